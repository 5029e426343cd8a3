"""
Ground data of a semilinear setup

GroundRegime fixes (k, F, zeta, sigma); EtaleAlgebraF and LoopModelF supply
the arithmetic of F in the two regimes; SetupParams bundles the instance
(n, m, beta, c, xi, epsilon, mode) and validate_params checks every
constraint it must satisfy. SemilinearOperator and twist realize theta and
its twists V -> V^xi.
"""

import logging
from dataclasses import dataclass, replace
from functools import cached_property
from typing import List, Optional, Sequence, Tuple, Union

from sympy import Matrix
from sympy.ntheory.factor_ import core
from sympy.polys.domains import QQ

from semifix import fmatrix
from semifix.errors import ConstraintViolation, SetupValidationError
from semifix.scalars import (
    CyclotomicNumber,
    LoopMonomial,
    euler_phi,
    format_rational,
    norm_F_over_k,
)

logger = logging.getLogger(__name__)

# --- Constants ---

REGIMES = ("numberfield", "loop")
SIGMA_KINDS = ("identity", "zeta_half", "minus_t", "conj")
PRESENTATIONS = ("trivial", "split", "quadratic")
MODES = ("linear", "polarized")

NORM_COMPATIBILITY = "norm-compatibility Nm(c)^(m/n) = beta*sigma(beta)"
XI_IN_XI = "xi in Xi_(m/n): Nm(xi)^(m/n) = 1"
N_DIVIDES_M = "n divides m"
SIGMA_COMMUTES = "sigma commutes with zeta"
SIGMA_INVOLUTION = "sigma^2 = id"
ZETA_ORDER = "zeta has exact order n"
ZETA_FIXED = "F^zeta = k"
C_SIGMA_FIXED = "c in (F^x)^sigma"
GAMMA_NORM = "gamma = Nm(c)"
GAMMA_SIGMA_FIXED = "gamma in k^sigma"
EPSILON_SIGN = "epsilon in {+1, -1}"
INTEGRAL_VALUATION = "elements of k and F have integral valuation"
NONZERO = "scalars are units"

FElement = Tuple[CyclotomicNumber, ...]
KScalar = Union[CyclotomicNumber, LoopMonomial]
FScalar = Union[FElement, LoopMonomial]


# --- Number-field F ---

@dataclass(frozen=True)
class EtaleAlgebraF:
    """
    Rank-n algebra F over k = Q(zeta_M), with zeta and sigma.

    Presentations:
        trivial:   F = k, n = 1
        split:     F = k x k in the idempotent basis, zeta swaps the factors
        quadratic: F = k(sqrt(d)) in the basis (1, sqrt(d)), zeta negates sqrt(d)

    sigma acts as sigma_matrix, composed with complex conjugation of the
    k-coordinates when sigma_kind is "conj".
    """
    order: int
    presentation: str = "trivial"
    sigma_kind: str = "identity"
    discriminant: Optional[int] = None

    @property
    def rank(self) -> int:
        return 1 if self.presentation == "trivial" else 2

    @property
    def phi(self) -> int:
        return euler_phi(self.order)

    @property
    def q_dim(self) -> int:
        """Dimension of F over Q"""
        return self.rank * self.phi

    @property
    def sigma_conj(self) -> bool:
        return self.sigma_kind == "conj"

    @cached_property
    def mult_table(self) -> List[List[List[int]]]:
        """Structure constants: e_i * e_j = sum_k table[i][j][k] e_k"""
        if self.presentation == "trivial":
            return [[[1]]]
        if self.presentation == "split":
            return [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]
        return [[[1, 0], [0, 1]], [[0, 1], [self.discriminant, 0]]]

    @cached_property
    def zeta_matrix(self) -> List[List[int]]:
        if self.presentation == "trivial":
            return [[1]]
        if self.presentation == "split":
            return [[0, 1], [1, 0]]
        return [[1, 0], [0, -1]]

    @cached_property
    def sigma_matrix(self) -> List[List[int]]:
        if self.sigma_kind == "zeta_half":
            return self.zeta_matrix
        return [[1 if r == c else 0 for c in range(self.rank)] for r in range(self.rank)]

    # --- elements ---

    def k(self, value) -> CyclotomicNumber:
        if isinstance(value, CyclotomicNumber):
            return value
        return CyclotomicNumber.rational(self.order, value)

    def from_k(self, value) -> FElement:
        value = self.k(value)
        zero = CyclotomicNumber.zero(self.order)
        if self.presentation == "trivial":
            return (value,)
        if self.presentation == "split":
            return (value, value)
        return (value, zero)

    def to_k(self, x: FElement) -> Optional[CyclotomicNumber]:
        """The k-element x equals, or None if x is not in k"""
        candidate = x[0]
        return candidate if self.from_k(candidate) == x else None

    def zero(self) -> FElement:
        return self.from_k(0)

    def one(self) -> FElement:
        return self.from_k(1)

    def is_zero(self, x: FElement) -> bool:
        return all(c.is_zero() for c in x)

    def add(self, x: FElement, y: FElement) -> FElement:
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x: FElement, y: FElement) -> FElement:
        return tuple(a - b for a, b in zip(x, y))

    def neg(self, x: FElement) -> FElement:
        return tuple(-a for a in x)

    def mul(self, x: FElement, y: FElement) -> FElement:
        if self.rank == 1:
            return (x[0] * y[0],)
        out = [CyclotomicNumber.zero(self.order) for _ in range(self.rank)]
        for i, xi in enumerate(x):
            if xi.is_zero():
                continue
            for j, yj in enumerate(y):
                if yj.is_zero():
                    continue
                product = xi * yj
                for k, coefficient in enumerate(self.mult_table[i][j]):
                    if coefficient:
                        out[k] = out[k] + product * coefficient
        return tuple(out)

    def scale(self, a: CyclotomicNumber, x: FElement) -> FElement:
        return tuple(a * c for c in x)

    def _apply(self, matrix: List[List[int]], x: Sequence[CyclotomicNumber]) -> FElement:
        out = []
        for row in matrix:
            acc = CyclotomicNumber.zero(self.order)
            for coefficient, value in zip(row, x):
                if coefficient:
                    acc = acc + value * coefficient
            out.append(acc)
        return tuple(out)

    def zeta(self, x: FElement) -> FElement:
        return self._apply(self.zeta_matrix, x)

    def sigma(self, x: FElement) -> FElement:
        if self.sigma_conj:
            x = tuple(c.conj() for c in x)
        return self._apply(self.sigma_matrix, x)

    def k_sigma(self, a: CyclotomicNumber) -> CyclotomicNumber:
        return a.conj() if self.sigma_conj else a

    def norm(self, x: FElement) -> CyclotomicNumber:
        """Nm_{F/k}(x), the product of the zeta-conjugates"""
        product = x
        conjugate = x
        for _ in range(self.rank - 1):
            conjugate = self.zeta(conjugate)
            product = self.mul(product, conjugate)
        value = self.to_k(product)
        if value is None:
            raise ArithmeticError(f"Norm of {self.format(x)} is not in k")
        return value

    def inverse(self, x: FElement) -> FElement:
        """
        Raises:
            ZeroDivisionError: If x is a zero divisor
        """
        if self.rank == 1:
            return (x[0].inverse(),)
        nm = self.norm(x)
        return self.scale(nm.inverse(), self.zeta(x))

    def is_unit(self, x: FElement) -> bool:
        return not self.norm(x).is_zero()

    def pow(self, x: FElement, exponent: int) -> FElement:
        base = x if exponent >= 0 else self.inverse(x)
        result = self.one()
        for _ in range(abs(exponent)):
            result = self.mul(result, base)
        return result

    # --- prime-field coordinates ---

    def coordinates(self, x: FElement) -> List:
        """QQ coordinates; index s * phi + j is the zeta_M^j coefficient of slot s"""
        coords = []
        for c in x:
            coords.extend(c.coeffs)
        return coords

    def from_coordinates(self, coords: Sequence) -> FElement:
        phi = self.phi
        return tuple(
            CyclotomicNumber(self.order, tuple(QQ.convert(v) for v in coords[s * phi:(s + 1) * phi]))
            for s in range(self.rank)
        )

    @cached_property
    def q_basis(self) -> List[FElement]:
        basis = []
        zero = CyclotomicNumber.zero(self.order)
        for s in range(self.rank):
            for j in range(self.phi):
                slots = [zero] * self.rank
                slots[s] = CyclotomicNumber.zeta(self.order, j)
                basis.append(tuple(slots))
        return basis

    def _q_matrix_of(self, fn) -> List[List]:
        columns = [self.coordinates(fn(e)) for e in self.q_basis]
        return [list(row) for row in zip(*columns)]

    def mul_matrix(self, x: FElement) -> List[List]:
        """QQ matrix of y -> x * y"""
        return self._q_matrix_of(lambda e: self.mul(x, e))

    @cached_property
    def zeta_q_matrix(self) -> List[List]:
        return self._q_matrix_of(self.zeta)

    @cached_property
    def sigma_q_matrix(self) -> List[List]:
        return self._q_matrix_of(self.sigma)

    def k_unit_basis(self) -> List[CyclotomicNumber]:
        return [CyclotomicNumber.zeta(self.order, j) for j in range(self.phi)]

    # --- structure checks ---

    def structure_violations(self) -> List[ConstraintViolation]:
        """Matrix-identity checks on zeta and sigma, plus presentation constraints"""
        violations = []
        if self.presentation not in PRESENTATIONS:
            return [ConstraintViolation("supported presentation",
                                        f"unknown presentation '{self.presentation}'")]
        if self.sigma_conj and self.order < 3:
            violations.append(ConstraintViolation(
                SIGMA_INVOLUTION, f"complex conjugation is trivial on Q(zeta_{self.order}); use M >= 3"))
        if self.presentation == "quadratic":
            problem = quadratic_discriminant_problem(self.discriminant, self.order)
            if problem:
                violations.append(ConstraintViolation("F = k[x]/(x^2 - d) is a field", problem))
                return violations

        z = Matrix(self.zeta_matrix)
        s = Matrix(self.sigma_matrix)
        ident = Matrix.eye(self.rank)
        if self.rank > 1 and z == ident:
            violations.append(ConstraintViolation(ZETA_ORDER, "zeta acts trivially"))
        if z ** self.rank != ident:
            violations.append(ConstraintViolation(ZETA_ORDER, f"zeta^{self.rank} != id"))
        if (z - ident).rank() != self.rank - 1:
            violations.append(ConstraintViolation(ZETA_FIXED, "zeta-fixed subalgebra is larger than k"))
        if s * s != ident:
            violations.append(ConstraintViolation(SIGMA_INVOLUTION, "sigma_matrix squared is not the identity"))
        # sigma_matrix has rational entries, so conjugation on k commutes with it
        if s * z != z * s:
            violations.append(ConstraintViolation(SIGMA_COMMUTES, "sigma_matrix * zeta_matrix != zeta_matrix * sigma_matrix"))
        return violations

    def norm_preimage(self, b: CyclotomicNumber) -> Optional[FElement]:
        """
        Some a in F with Nm(a) = b, searched among small elements.

        For split F, (b, 1) always works. For quadratic F, x + y*sqrt(d) is tried
        with x, y roots of unity, zero or small integers.
        """
        if self.rank == 1:
            return (b,)
        if self.presentation == "split":
            return (b, CyclotomicNumber.one(self.order))
        pool = {}
        for value in (0, 2, -2, 3, -3):
            small = CyclotomicNumber.rational(self.order, value)
            pool.setdefault(small.coeffs, small)
        for j in range(self.order):
            for sign in (1, -1):
                root = CyclotomicNumber.zeta(self.order, j) * sign
                pool.setdefault(root.coeffs, root)
        candidates = list(pool.values())
        for x in candidates:
            for y in candidates:
                a = (x, y)
                if self.is_zero(a):
                    continue
                if self.norm(a) == b:
                    return a
        return None

    def format(self, x: FElement) -> str:
        if self.rank == 1:
            return str(x[0])
        return "(" + ", ".join(str(c) for c in x) + ")"


def quadratic_discriminant_problem(d: Optional[int], order: int) -> Optional[str]:
    """Why k(sqrt(d)) fails to be a quadratic field over Q(zeta_M), or None"""
    if d is None or d == 0:
        return "quadratic presentation needs a nonzero integer d"
    squarefree = (1 if d > 0 else -1) * int(core(abs(d)))
    if squarefree == 1:
        return f"d = {d} is a square in Q"
    disc = squarefree if squarefree % 4 == 1 else 4 * squarefree
    conductor = order // 2 if order % 4 == 2 else order
    if conductor % abs(disc) == 0:
        return f"sqrt({d}) already lies in Q(zeta_{order})"
    return None


# --- Loop model F = C((t)) ---

@dataclass(frozen=True)
class LoopModelF:
    """
    F = C((t)) over k = C((tau)), tau = t^n; zeta: t -> zeta_n t.

    Elements are monomials with integral t-valuation. sigma is either the
    identity or t -> -t (zeta^(n/2) for even n, sigma|_k != id for odd n).
    """
    n: int
    sigma_kind: str = "identity"

    @property
    def rank(self) -> int:
        return self.n

    @property
    def sigma_on_t(self) -> bool:
        return self.sigma_kind in ("zeta_half", "minus_t")

    def one(self) -> LoopMonomial:
        return LoopMonomial.one()

    def mul(self, x: LoopMonomial, y: LoopMonomial) -> LoopMonomial:
        return x * y

    def inverse(self, x: LoopMonomial) -> LoopMonomial:
        return x.inverse()

    def zeta(self, x: LoopMonomial) -> LoopMonomial:
        return x.scale_coeff(x.val / self.n)

    def sigma(self, x: LoopMonomial) -> LoopMonomial:
        return x.scale_coeff(x.val / 2) if self.sigma_on_t else x

    def k_sigma(self, a: LoopMonomial) -> LoopMonomial:
        """sigma on k: tau -> (-1)^n tau when t -> -t"""
        return a.scale_coeff(a.val * self.n / 2) if self.sigma_on_t else a

    def norm(self, x: LoopMonomial) -> LoopMonomial:
        return norm_F_over_k(x, self.n)

    def from_k(self, a: LoopMonomial) -> LoopMonomial:
        return LoopMonomial(a.coeff, a.val * self.n)

    def format(self, x: LoopMonomial) -> str:
        return f"{x.coeff}*t^({format_rational(x.val)})"


# --- Ground regime ---

@dataclass(frozen=True)
class GroundRegime:
    """
    (k, F, zeta, sigma) of one problem instance.

    M is the cyclotomic order in the number-field regime; in the loop regime
    it only bounds witness searches.
    """
    kind: str
    M: int = 1
    n: int = 1
    sigma_kind: str = "identity"
    presentation: str = "trivial"
    discriminant: Optional[int] = None

    @cached_property
    def field(self) -> Union[EtaleAlgebraF, LoopModelF]:
        if self.kind == "loop":
            return LoopModelF(self.n, self.sigma_kind)
        return EtaleAlgebraF(self.M, self.presentation, self.sigma_kind, self.discriminant)

    @property
    def sigma_trivial_on_k(self) -> bool:
        if self.kind == "loop":
            return self.sigma_kind != "minus_t"
        return self.sigma_kind != "conj"

    @property
    def k_sigma_degree(self) -> int:
        """[k : k^sigma]"""
        return 1 if self.sigma_trivial_on_k else 2

    @property
    def prime_degree(self) -> Optional[int]:
        """[k^sigma : Q]; None in the loop regime"""
        if self.kind == "loop":
            return None
        return euler_phi(self.M) // self.k_sigma_degree

    def k_one(self) -> KScalar:
        return LoopMonomial.one() if self.kind == "loop" else CyclotomicNumber.one(self.M)

    def k_sigma(self, a: KScalar) -> KScalar:
        return self.field.k_sigma(a)

    def k_sigma_extended(self, a: KScalar) -> KScalar:
        """
        An extension of sigma|_k to the roots b_i.

        Loop regime with sigma|_k != id: tau^v -> e^(i pi v) tau^v. Any extension
        gives the same Galois orbits.
        """
        if self.kind == "loop":
            return a.scale_coeff(a.val / 2) if not self.sigma_trivial_on_k else a
        return self.k_sigma(a)

    def structure_violations(self) -> List[ConstraintViolation]:
        violations = []
        if self.kind not in REGIMES:
            return [ConstraintViolation("supported regime", f"unknown regime '{self.kind}'")]
        if self.sigma_kind not in SIGMA_KINDS:
            return [ConstraintViolation("supported sigma", f"unknown sigma kind '{self.sigma_kind}'")]
        if self.n < 1:
            violations.append(ConstraintViolation(ZETA_ORDER, f"n must be positive, got {self.n}"))
            return violations
        if self.sigma_kind == "zeta_half" and self.n % 2:
            violations.append(ConstraintViolation(SIGMA_COMMUTES, "sigma = zeta^(n/2) requires n even"))

        if self.kind == "loop":
            if self.sigma_kind == "minus_t" and self.n % 2 == 0:
                violations.append(ConstraintViolation(
                    SIGMA_COMMUTES, "t -> -t with sigma|_k != id requires n odd"))
            if self.sigma_kind == "conj":
                violations.append(ConstraintViolation(
                    "supported sigma", "conj is a number-field sigma kind"))
            return violations

        if self.M < 1:
            violations.append(ConstraintViolation("cyclotomic order", f"M must be positive, got {self.M}"))
            return violations
        if self.sigma_kind == "minus_t":
            violations.append(ConstraintViolation("supported sigma", "minus_t is a loop sigma kind"))
        expected_rank = 1 if self.presentation == "trivial" else 2
        if self.n != expected_rank:
            violations.append(ConstraintViolation(
                ZETA_ORDER, f"presentation '{self.presentation}' has rank {expected_rank}, but n = {self.n}"))
            return violations
        violations.extend(self.field.structure_violations())
        return violations


# --- Setup parameters ---

@dataclass(frozen=True)
class SetupParams:
    """
    One problem instance (n, m, beta, c, xi, epsilon, mode).

    beta and gamma are k-scalars, c and xi are F-scalars. In the loop regime
    gamma may be given directly in place of c. Fields after `warnings` are
    filled in by validate_params.
    """
    regime: GroundRegime
    m: int
    beta: KScalar
    xi: FScalar
    epsilon: int = 1
    mode: str = "polarized"
    c: Optional[FScalar] = None
    gamma: Optional[KScalar] = None
    warnings: Tuple[str, ...] = ()
    xi_in_Xi: Optional[bool] = None
    xi_norm_primitive: Optional[bool] = None
    validated: bool = False

    @property
    def n(self) -> int:
        return self.regime.n

    @property
    def mn(self) -> int:
        return self.m // self.regime.n

    @property
    def polarized(self) -> bool:
        return self.mode == "polarized"

    @property
    def xi_norm(self) -> KScalar:
        return self.regime.field.norm(self.xi)

    def describe(self) -> str:
        f = self.regime.field
        parts = [f"regime={self.regime.kind}", f"n={self.n}", f"m={self.m}",
                 f"beta={self.beta}", f"xi={f.format(self.xi)}"]
        if self.polarized:
            parts += [f"gamma={self.gamma}", f"epsilon={self.epsilon:+d}", f"sigma={self.regime.sigma_kind}"]
        return ", ".join(parts)


def _is_primitive_root(value: LoopMonomial, order: int) -> bool:
    return value.val == 0 and value.coeff.value.denominator == order


def validate_params(p: SetupParams) -> SetupParams:
    """
    Check every constraint of a setup.

    Args:
        p: Parameters as parsed from a configuration

    Returns:
        A copy with gamma (and c, where implied) filled in, warnings recorded
        and the xi flags set.

    Raises:
        SetupValidationError: Listing every violated constraint
    """
    regime = p.regime
    violations = list(regime.structure_violations())
    if violations:
        raise SetupValidationError(violations)

    f = regime.field
    warnings: List[str] = []

    if p.m < 1 or p.m % regime.n:
        violations.append(ConstraintViolation(N_DIVIDES_M, f"n = {regime.n} does not divide m = {p.m}"))
    if p.epsilon not in (1, -1):
        violations.append(ConstraintViolation(EPSILON_SIGN, f"epsilon = {p.epsilon}"))
    if p.mode not in MODES:
        violations.append(ConstraintViolation("mode in {linear, polarized}", f"unknown mode '{p.mode}'"))
    violations.extend(_scalar_violations(p))
    if violations:
        raise SetupValidationError(violations)

    mn = p.m // regime.n
    c = p.c
    gamma = p.gamma
    if p.polarized:
        c, gamma, more = _polarization_data(p)
        violations.extend(more)
        if gamma is not None and not more:
            lhs = gamma ** mn
            rhs = p.beta * regime.k_sigma(p.beta)
            if lhs != rhs:
                violations.append(ConstraintViolation(
                    NORM_COMPATIBILITY,
                    f"Nm(c)^{mn} = {lhs} but beta*sigma(beta) = {rhs}",
                ))
    if violations:
        raise SetupValidationError(violations)

    xi_norm = f.norm(p.xi)
    xi_in_Xi = (xi_norm ** mn) == regime.k_one()
    if not xi_in_Xi:
        message = f"[{XI_IN_XI}] Nm(xi) = {xi_norm} is not an (m/n)-th root of unity; g(xi) = 0"
        warnings.append(message)
        logger.warning(message)
    if p.polarized and f.sigma(p.xi) != p.xi:
        message = f"[xi in F^sigma] sigma(xi) != xi for xi = {f.format(p.xi)}"
        warnings.append(message)
        logger.warning(message)

    primitive = None
    if regime.kind == "loop":
        primitive = _is_primitive_root(xi_norm, mn)

    logger.debug(f"Validated setup: {p.describe()}")
    return replace(
        p,
        c=c,
        gamma=gamma,
        warnings=tuple(warnings),
        xi_in_Xi=xi_in_Xi,
        xi_norm_primitive=primitive,
        validated=True,
    )


def _scalar_violations(p: SetupParams) -> List[ConstraintViolation]:
    regime = p.regime
    problems = []
    if regime.kind == "loop":
        for name, value in (("beta", p.beta), ("gamma", p.gamma)):
            if value is not None and not value.is_integral():
                problems.append(ConstraintViolation(
                    INTEGRAL_VALUATION, f"{name} = {value} has fractional tau-valuation"))
        for name, value in (("xi", p.xi), ("c", p.c)):
            if value is not None and not value.is_integral():
                problems.append(ConstraintViolation(
                    INTEGRAL_VALUATION, f"{name} = {value} has fractional t-valuation"))
        return problems

    f = regime.field
    if p.beta.is_zero():
        problems.append(ConstraintViolation(NONZERO, "beta = 0"))
    if not f.is_unit(p.xi):
        problems.append(ConstraintViolation(NONZERO, f"xi = {f.format(p.xi)} is not invertible"))
    if p.c is not None and not f.is_unit(p.c):
        problems.append(ConstraintViolation(NONZERO, f"c = {f.format(p.c)} is not invertible"))
    if p.gamma is not None and p.gamma.is_zero():
        problems.append(ConstraintViolation(NONZERO, "gamma = 0"))
    return problems


def _polarization_data(p: SetupParams):
    """Resolve (c, gamma) and collect the violations concerning them"""
    regime = p.regime
    f = regime.field
    problems = []
    c, gamma = p.c, p.gamma

    if c is None and gamma is None:
        problems.append(ConstraintViolation(C_SIGMA_FIXED, "polarized mode needs c (or gamma in the loop regime)"))
        return c, gamma, problems

    if c is None and regime.kind == "numberfield":
        if regime.n != 1:
            problems.append(ConstraintViolation(
                C_SIGMA_FIXED, "the number-field regime with n = 2 needs c, not gamma"))
            return c, gamma, problems
        c = f.from_k(gamma)

    if c is not None:
        if f.sigma(c) != c:
            problems.append(ConstraintViolation(C_SIGMA_FIXED, f"sigma(c) != c for c = {f.format(c)}"))
        norm = f.norm(c)
        if gamma is not None and gamma != norm:
            problems.append(ConstraintViolation(GAMMA_NORM, f"gamma = {gamma} but Nm(c) = {norm}"))
        gamma = norm
    elif regime.k_sigma(gamma) != gamma:
        problems.append(ConstraintViolation(GAMMA_SIGMA_FIXED, f"sigma(gamma) != gamma for gamma = {gamma}"))
    return c, gamma, problems


# --- Semilinear operators ---

@dataclass(frozen=True)
class SemilinearOperator:
    """theta(v) = T * zeta(v) on V = F^N"""
    algebra: EtaleAlgebraF
    T: Tuple[Tuple, ...]

    @property
    def size(self) -> int:
        return len(self.T)

    def matrix(self) -> List[List]:
        return fmatrix.copy(self.T)

    def apply(self, v: Sequence) -> List:
        return fmatrix.mat_vec(self.algebra, self.T, [self.algebra.zeta(x) for x in v])

    def twisted_power(self, exponent: int) -> List[List]:
        return fmatrix.twisted_power(self.algebra, self.T, exponent)

    def power_is_scalar(self, exponent: int, value: CyclotomicNumber) -> bool:
        """theta^exponent == value * id"""
        power = self.twisted_power(exponent)
        return fmatrix.is_scalar(self.algebra, power, self.algebra.from_k(value))

    @classmethod
    def from_matrix(cls, algebra: EtaleAlgebraF, t: Sequence[Sequence]) -> "SemilinearOperator":
        return cls(algebra, tuple(tuple(row) for row in t))


def twist(op: SemilinearOperator, xi: FElement) -> SemilinearOperator:
    """theta -> xi * theta, the operator of V^xi"""
    scaled = fmatrix.scale(op.algebra, xi, op.T)
    return SemilinearOperator.from_matrix(op.algebra, scaled)
