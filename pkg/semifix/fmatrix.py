"""
Matrices over the algebra F

Entries are F-elements of whatever algebra object is passed in; the algebra
supplies zero/one/add/sub/mul/zeta/sigma. Matrices are lists of rows.
"""

from typing import Callable, List, Sequence

from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

FMatrix = List[List]


def identity(alg, size: int) -> FMatrix:
    return [[alg.one() if r == c else alg.zero() for c in range(size)] for r in range(size)]


def zeros(alg, rows: int, cols: int) -> FMatrix:
    return [[alg.zero() for _ in range(cols)] for _ in range(rows)]


def scalar_matrix(alg, value, size: int) -> FMatrix:
    return [[value if r == c else alg.zero() for c in range(size)] for r in range(size)]


def copy(a: Sequence[Sequence]) -> FMatrix:
    return [list(row) for row in a]


def mat_mul(alg, a: Sequence[Sequence], b: Sequence[Sequence]) -> FMatrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    result = zeros(alg, len(a), cols)
    for r, row in enumerate(a):
        for k in range(inner):
            entry = row[k]
            if alg.is_zero(entry):
                continue
            b_row = b[k]
            out = result[r]
            for c in range(cols):
                if not alg.is_zero(b_row[c]):
                    out[c] = alg.add(out[c], alg.mul(entry, b_row[c]))
    return result


def mat_sub(alg, a: Sequence[Sequence], b: Sequence[Sequence]) -> FMatrix:
    return [[alg.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(alg, value, a: Sequence[Sequence]) -> FMatrix:
    return [[alg.mul(value, x) for x in row] for row in a]


def entrywise(fn: Callable, a: Sequence[Sequence]) -> FMatrix:
    return [[fn(x) for x in row] for row in a]


def transpose(a: Sequence[Sequence]) -> FMatrix:
    return [list(col) for col in zip(*a)] if a else []


def mat_vec(alg, a: Sequence[Sequence], v: Sequence) -> List:
    out = []
    for row in a:
        acc = alg.zero()
        for x, y in zip(row, v):
            if not alg.is_zero(x) and not alg.is_zero(y):
                acc = alg.add(acc, alg.mul(x, y))
        out.append(acc)
    return out


def twisted_power(alg, t: Sequence[Sequence], exponent: int) -> FMatrix:
    """
    Matrix P with (T zeta)^e v = P zeta^e(v).

    P_1 = T and P_(j+1) = T * zeta(P_j).
    """
    if exponent == 0:
        return identity(alg, len(t))
    power = copy(t)
    for _ in range(exponent - 1):
        power = mat_mul(alg, t, entrywise(alg.zeta, power))
    return power


def equals(alg, a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    if len(a) != len(b):
        return False
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def is_scalar(alg, a: Sequence[Sequence], value) -> bool:
    return equals(alg, a, scalar_matrix(alg, value, len(a)))


def restriction_of_scalars(alg, a: Sequence[Sequence]) -> List[List]:
    """Dense QQ matrix of v -> A v on the prime-field coordinates of F^N"""
    block = alg.q_dim
    size = len(a)
    dense = [[QQ(0)] * (size * block) for _ in range(size * block)]
    for r, row in enumerate(a):
        for c, entry in enumerate(row):
            if alg.is_zero(entry):
                continue
            mm = alg.mul_matrix(entry)
            for i in range(block):
                for j in range(block):
                    if mm[i][j] != 0:
                        dense[r * block + i][c * block + j] = mm[i][j]
    return dense


def is_invertible(alg, a: Sequence[Sequence]) -> bool:
    if not a:
        return True
    dense = restriction_of_scalars(alg, a)
    return DomainMatrix(dense, (len(dense), len(dense)), QQ).rank() == len(dense)


def inverse(alg, a: Sequence[Sequence]) -> FMatrix:
    """
    Gauss-Jordan inverse; pivots must be units of the algebra.

    Raises:
        ZeroDivisionError: If no unit pivot is found in some column
    """
    size = len(a)
    work = [list(row) + identity(alg, size)[r] for r, row in enumerate(a)]
    for col in range(size):
        pivot = next((r for r in range(col, size) if alg.is_unit(work[r][col])), None)
        if pivot is None:
            raise ZeroDivisionError(f"matrix is singular at column {col}")
        work[col], work[pivot] = work[pivot], work[col]
        scale_by = alg.inverse(work[col][col])
        work[col] = [alg.mul(scale_by, x) for x in work[col]]
        for r in range(size):
            if r == col or alg.is_zero(work[r][col]):
                continue
            factor = work[r][col]
            work[r] = [alg.sub(x, alg.mul(factor, y)) for x, y in zip(work[r], work[col])]
    return [row[size:] for row in work]


def q_product(a: Sequence[Sequence], b: Sequence[Sequence]) -> List[List]:
    """Product of two dense QQ matrices"""
    inner = len(b)
    cols = len(b[0]) if b else 0
    if not a or inner == 0 or cols == 0:
        return [[QQ.zero] * cols for _ in a]
    left = DomainMatrix([[QQ.convert(x) for x in row] for row in a], (len(a), inner), QQ)
    right = DomainMatrix([[QQ.convert(x) for x in row] for row in b], (inner, cols), QQ)
    return left.matmul(right).to_list()
