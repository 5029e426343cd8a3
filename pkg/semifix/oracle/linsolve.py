"""
Rank and nullspace of sparse homogeneous systems over Q

Systems are assembled row by row as {column: rational}. Ranks are computed
modulo two random primes and compared; on disagreement, or when exact
arithmetic is requested, the system is eliminated over QQ instead.
"""

import logging
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, TypedDict

from sympy import nextprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from semifix.scalars import lcm, to_qq

logger = logging.getLogger(__name__)

DEFAULT_EXACT_LIMIT = 4000
DEFAULT_PRIME_BITS = 30

EXACT = "exact_rational"
MODULAR = "modular"


class LinearSystemRank(TypedDict, total=False):
    method: str
    primes: List[int]
    unknowns: int
    equations: int
    rank: int
    nullity: int
    modular_ranks: List[int]
    exact_rank: Optional[int]
    field_dim: int


@dataclass(frozen=True)
class SolverSettings:
    """How ranks are computed; seed drives the prime choice"""
    exact: bool = False
    exact_limit: int = DEFAULT_EXACT_LIMIT
    prime_bits: int = DEFAULT_PRIME_BITS
    seed: int = 0


class LinearSystem:
    """Homogeneous linear equations over Q in `unknowns` variables"""

    def __init__(self, unknowns: int):
        self.unknowns = unknowns
        self.rows: List[Dict[int, object]] = []

    def add_row(self, row: Dict[int, object]) -> None:
        cleaned = {}
        for column, value in row.items():
            value = to_qq(value)
            if value != QQ.zero:
                cleaned[column] = value
        if cleaned:
            self.rows.append(cleaned)

    def extend(self, other: "LinearSystem") -> None:
        if other.unknowns != self.unknowns:
            raise ValueError(f"Cannot merge systems in {self.unknowns} and {other.unknowns} unknowns")
        self.rows.extend(other.rows)

    @classmethod
    def from_dense(cls, matrix: Sequence[Sequence], unknowns: Optional[int] = None) -> "LinearSystem":
        width = unknowns if unknowns is not None else (len(matrix[0]) if matrix else 0)
        system = cls(width)
        for row in matrix:
            system.add_row({j: v for j, v in enumerate(row)})
        return system

    @property
    def equations(self) -> int:
        return len(self.rows)

    def to_domain_matrix(self) -> DomainMatrix:
        rows = {i: dict(row) for i, row in enumerate(self.rows)}
        return DomainMatrix(rows, (len(self.rows), self.unknowns), QQ)


# --- Primes ---

def choose_primes(settings: SolverSettings, count: int = 2) -> List[int]:
    """Distinct random primes in (2^bits, 2^(bits+1))"""
    rng = random.Random(settings.seed)
    low = 2 ** settings.prime_bits
    primes: List[int] = []
    while len(primes) < count:
        p = int(nextprime(rng.randrange(low, 2 * low)))
        if p not in primes:
            primes.append(p)
    return primes


# --- Rank ---

def _row_mod(row: Dict[int, object], p: int, field) -> Dict[int, object]:
    denominator = 1
    for value in row.values():
        denominator = lcm(denominator, int(QQ.denom(value)))
    reduced = {}
    for column, value in row.items():
        scaled = int(QQ.numer(value)) * (denominator // int(QQ.denom(value)))
        residue = scaled % p
        if residue:
            reduced[column] = field(residue)
    return reduced


def rank_modular(system: LinearSystem, p: int) -> int:
    """Rank of the row-normalized integer system modulo p (a lower bound for the rank over Q)"""
    if not system.rows or system.unknowns == 0:
        return 0
    field = GF(p)
    rows = {}
    for i, row in enumerate(system.rows):
        reduced = _row_mod(row, p, field)
        if reduced:
            rows[i] = reduced
    if not rows:
        return 0
    matrix = DomainMatrix(rows, (len(system.rows), system.unknowns), field)
    return matrix.rank()


def rank_exact(system: LinearSystem) -> int:
    if not system.rows or system.unknowns == 0:
        return 0
    return system.to_domain_matrix().rank()


def solve_rank(system: LinearSystem, settings: Optional[SolverSettings] = None) -> LinearSystemRank:
    """
    Rank and nullity of a homogeneous system.

    Args:
        system: The equations
        settings: Solver settings; defaults to modular with exact fallback

    Returns:
        LinearSystemRank naming the method actually used
    """
    settings = settings or SolverSettings()
    result = LinearSystemRank(
        unknowns=system.unknowns,
        equations=system.equations,
        primes=[],
        modular_ranks=[],
        exact_rank=None,
    )

    if system.unknowns == 0 or not system.rows:
        result.update(method=EXACT, rank=0, nullity=system.unknowns, exact_rank=0)
        return result

    want_exact = settings.exact
    if want_exact and system.unknowns > settings.exact_limit:
        logger.warning(
            f"Exact elimination requested for {system.unknowns} unknowns "
            f"(limit {settings.exact_limit}); using modular ranks"
        )
        want_exact = False

    if want_exact:
        rank = rank_exact(system)
        result.update(method=EXACT, rank=rank, nullity=system.unknowns - rank, exact_rank=rank)
        logger.debug(f"Exact rank {rank} for {system.equations}x{system.unknowns} system")
        return result

    primes = choose_primes(settings)
    ranks = [rank_modular(system, p) for p in primes]
    result.update(primes=primes, modular_ranks=ranks)
    logger.debug(f"Modular ranks {ranks} mod {primes} for {system.equations}x{system.unknowns} system")

    if ranks[0] != ranks[1]:
        logger.warning(f"Modular ranks disagree ({ranks} mod {primes}); falling back to exact elimination")
        rank = rank_exact(system)
        result.update(method=EXACT, rank=rank, nullity=system.unknowns - rank, exact_rank=rank)
        return result

    result.update(method=MODULAR, rank=ranks[0], nullity=system.unknowns - ranks[0])
    return result


# --- Nullspace ---

def nullspace_exact(system: LinearSystem) -> List[List]:
    """Basis of the solution space over QQ, as lists of QQ values"""
    n = system.unknowns
    if n == 0:
        return []
    if not system.rows:
        return [[QQ.one if i == j else QQ.zero for j in range(n)] for i in range(n)]
    basis = system.to_domain_matrix().nullspace()
    return [list(row) for row in basis.to_list()]


def rank_of_vectors(vectors: Sequence[Sequence]) -> int:
    """Rank over QQ of a list of coordinate vectors"""
    if not vectors:
        return 0
    return DomainMatrix([[to_qq(v) for v in row] for row in vectors],
                        (len(vectors), len(vectors[0])), QQ).rank()
