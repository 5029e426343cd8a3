"""
Explicit matrix realizations of semilinear setups

V is assembled as a direct sum of simple modules S_i = F with theta acting
by a_i * zeta (Nm(a_i) = b_i), each repeated d_i times. The Gram matrix J
pairs the blocks of i and i* through admissible pairings on the simple
models. The result is transported by a seeded random base change so the
oracle never sees the block structure.
"""

import logging
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from semifix import fmatrix
from semifix.algebra import EtaleAlgebraF, FElement, GroundRegime, SemilinearOperator, SetupParams, validate_params
from semifix.classifier import ClassificationReport, check_multiplicities, classify
from semifix.errors import InvariantFailure, OracleRegimeError, ParityConflict
from semifix.oracle.linsolve import LinearSystem, nullspace_exact
from semifix.quiver import InvolutiveQuiver, build_quiver
from semifix.scalars import CyclotomicNumber
from semifix.spectrum import CenterSpectrum, split_center

logger = logging.getLogger(__name__)

ORACLE_REGIME = "oracle requires numberfield regime"


@dataclass
class PolarizedSetup:
    """
    theta (and J in polarized mode) on V = F^N.

    block_pairings maps each vertex to the scalar p_i of the admissible
    pairing S_i x S_(i*) -> F used at construction.
    """
    params: SetupParams
    spectrum: CenterSpectrum
    theta: SemilinearOperator
    gram: Optional[List[List]]
    multiplicities: Dict[str, int]
    seed: Optional[int] = None
    block_pairings: Dict[str, FElement] = field(default_factory=dict)

    @property
    def algebra(self) -> EtaleAlgebraF:
        return self.theta.algebra

    @property
    def N(self) -> int:
        return self.theta.size

    @property
    def polarized(self) -> bool:
        return self.gram is not None

    @property
    def T(self) -> List[List]:
        return self.theta.matrix()

    @cached_property
    def quiver(self) -> InvolutiveQuiver:
        return build_quiver(self.spectrum, self.params)

    @classmethod
    def from_matrices(cls, p: SetupParams, T: Sequence[Sequence], J: Optional[Sequence[Sequence]] = None,
                      multiplicities: Optional[Mapping[str, int]] = None) -> "PolarizedSetup":
        """
        Wrap hand-written matrices; the setup invariants are checked.

        Raises:
            OracleRegimeError: Outside the numberfield regime
            InvariantFailure: If (T zeta)^m != beta or J violates the pairing axioms
        """
        p = require_oracle_regime(p)
        alg = p.regime.field
        setup = cls(
            params=p,
            spectrum=split_center(p),
            theta=SemilinearOperator.from_matrix(alg, T),
            gram=fmatrix.copy(J) if J is not None else None,
            multiplicities=dict(multiplicities or {}),
        )
        verify_setup(setup)
        return setup


def require_oracle_regime(p: SetupParams) -> SetupParams:
    if p.regime.kind != "numberfield":
        raise OracleRegimeError(ORACLE_REGIME)
    return p if p.validated else validate_params(p)


# --- Pairings on simple models ---

def _q_vector_solutions(alg: EtaleAlgebraF, matrix: List[List]) -> List[FElement]:
    system = LinearSystem.from_dense(matrix, unknowns=alg.q_dim)
    return [alg.from_coordinates(v) for v in nullspace_exact(system)]


def twisted_solutions(alg: EtaleAlgebraF, left: FElement, right: FElement) -> List[FElement]:
    """Q-basis of {h in F : left * h = right * zeta(h)}"""
    lhs = alg.mul_matrix(left)
    rhs = fmatrix.q_product(alg.mul_matrix(right), alg.zeta_q_matrix)
    matrix = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(lhs, rhs)]
    return _q_vector_solutions(alg, matrix)


def admissible_pairing(alg: EtaleAlgebraF, a_left: FElement, a_right: FElement, c: FElement) -> FElement:
    """
    Scalar p with <u, v> = u * p * sigma(v) admissible on S_left x S_right.

    Solves a_left * sigma(a_right) * p = c * zeta(p), preferring p = 1.

    Raises:
        InvariantFailure: If no invertible solution exists
    """
    u = alg.mul(a_left, alg.sigma(a_right))
    one = alg.one()
    if alg.mul(u, one) == alg.mul(c, alg.zeta(one)):
        return one
    for candidate in twisted_solutions(alg, u, c):
        if alg.is_unit(candidate):
            return candidate
    raise InvariantFailure(
        f"no admissible pairing for a = {alg.format(a_left)}, a* = {alg.format(a_right)}, c = {alg.format(c)}"
    )


def sigma_eigenvalue(alg: EtaleAlgebraF, p0: FElement) -> CyclotomicNumber:
    """lambda in k with sigma(p0) = lambda * p0"""
    ratio = alg.to_k(alg.mul(alg.sigma(p0), alg.inverse(p0)))
    if ratio is None:
        raise InvariantFailure(f"sigma({alg.format(p0)}) is not a k-multiple of it")
    return ratio


def hermitian_normalize(regime: GroundRegime, p0: FElement) -> Tuple[FElement, CyclotomicNumber]:
    """
    Rescale p0 by t in k so that sigma(p0) = p0 when sigma|_k != id.

    Returns:
        The (possibly rescaled) scalar and its sigma-eigenvalue
    """
    alg = regime.field
    lam = sigma_eigenvalue(alg, p0)
    if regime.sigma_trivial_on_k or lam.is_one():
        return p0, lam
    for s in alg.k_unit_basis():
        t = s + lam * regime.k_sigma(s)
        if not t.is_zero():
            rescaled = alg.scale(t, p0)
            return rescaled, sigma_eigenvalue(alg, rescaled)
    raise InvariantFailure(f"no Hermitian rescaling of {alg.format(p0)}")


def _fixed_block(regime: GroundRegime, d: int, sign: CyclotomicNumber, vertex_id: str) -> List[List]:
    """d x d matrix B over k with B = sign * sigma(B)^T and det B != 0"""
    alg = regime.field
    if regime.sigma_trivial_on_k:
        if sign.is_one():
            return fmatrix.identity(alg, d)
        if d % 2:
            raise ParityConflict(
                f"parity conflict: vertex {vertex_id} carries an alternating form but d = {d} is odd"
            )
        block = fmatrix.zeros(alg, d, d)
        for j in range(0, d, 2):
            block[j][j + 1] = alg.one()
            block[j + 1][j] = alg.neg(alg.one())
        return block
    for t in alg.k_unit_basis():
        s = t + sign * regime.k_sigma(t)
        if not s.is_zero():
            return fmatrix.scalar_matrix(alg, alg.from_k(s), d)
    raise InvariantFailure(f"no {sign}-Hermitian scalar in Q(zeta_{regime.M})")


# --- Construction ---

def _random_element(alg: EtaleAlgebraF, rng: random.Random) -> FElement:
    while True:
        coords = [rng.choice((-1, 0, 0, 1, 2)) for _ in range(alg.q_dim)]
        if any(coords):
            return alg.from_coordinates(coords)


def random_conjugation(alg: EtaleAlgebraF, T: List[List], J: Optional[List[List]],
                       rng: random.Random, steps: int) -> Tuple[List[List], Optional[List[List]]]:
    """
    Transport (T, J) by a product of elementary matrices g = I + a e_(ij).

    T -> g T zeta(g)^-1 and J -> g^-T J sigma(g)^-1.
    """
    size = len(T)
    if size < 2:
        return T, J
    T = fmatrix.copy(T)
    J = fmatrix.copy(J) if J is not None else None
    for _ in range(steps):
        i, j = rng.sample(range(size), 2)
        a = _random_element(alg, rng)
        # T: row i += a * row j, then column j -= zeta(a) * column i
        T[i] = [alg.add(x, alg.mul(a, y)) for x, y in zip(T[i], T[j])]
        za = alg.zeta(a)
        for row in T:
            row[j] = alg.sub(row[j], alg.mul(za, row[i]))
        if J is not None:
            # J: row j -= a * row i, then column j -= sigma(a) * column i
            J[j] = [alg.sub(y, alg.mul(a, x)) for x, y in zip(J[i], J[j])]
            sa = alg.sigma(a)
            for row in J:
                row[j] = alg.sub(row[j], alg.mul(sa, row[i]))
    return T, J


def build_setup(p: SetupParams, mult: Mapping[str, int], seed: Optional[int] = 0,
                report: Optional[ClassificationReport] = None) -> PolarizedSetup:
    """
    Realize V = (+)_i S_i^(d_i) with theta and, in polarized mode, J.

    Args:
        p: Setup parameters (numberfield regime)
        mult: vertex id -> d_i
        seed: Seed of the random base change; None keeps the block form
        report: Classification of p, computed when omitted

    Returns:
        A setup whose invariants have been verified

    Raises:
        OracleRegimeError: Outside the numberfield regime
        ParityConflict: If an alternating block of odd size is required
        SetupValidationError: If the multiplicities are inconsistent
    """
    p = require_oracle_regime(p)
    report = report or classify(p)
    mult = check_multiplicities(report, mult)
    regime = p.regime
    alg = regime.field
    spectrum = report.spectrum

    blocks: Dict[str, range] = {}
    diagonal = []
    for vertex in spectrum.vertices:
        start = len(diagonal)
        diagonal.extend([vertex.simple_model] * mult[vertex.id])
        blocks[vertex.id] = range(start, len(diagonal))
    size = len(diagonal)
    T = fmatrix.zeros(alg, size, size)
    for r, a in enumerate(diagonal):
        T[r][r] = a

    J = None
    pairings: Dict[str, FElement] = {}
    if p.polarized:
        J = fmatrix.zeros(alg, size, size)
        star = report.quiver.vertex_star
        epsilon = alg.from_k(p.epsilon)
        for vertex in spectrum.vertices:
            i = vertex.id
            j = star[i]
            if i in pairings:
                continue
            a_i = vertex.simple_model
            a_j = spectrum.vertex(j).simple_model
            if i != j:
                scalar = admissible_pairing(alg, a_i, a_j, p.c)
                pairings[i] = scalar
                pairings[j] = alg.sigma(scalar)
                mirrored = alg.mul(epsilon, alg.sigma(scalar))
                for r, c in zip(blocks[i], blocks[j]):
                    J[r][c] = scalar
                    J[c][r] = mirrored
                continue
            p0, lam = hermitian_normalize(regime, admissible_pairing(alg, a_i, a_i, p.c))
            pairings[i] = p0
            d = mult[i]
            if d == 0:
                continue
            block = _fixed_block(regime, d, CyclotomicNumber.rational(regime.M, p.epsilon) * lam, i)
            for r, row in zip(blocks[i], block):
                for c, entry in zip(blocks[i], row):
                    J[r][c] = alg.mul(p0, entry)

    if seed is not None:
        rng = random.Random(seed)
        T, J = random_conjugation(alg, T, J, rng, steps=3 * size)

    setup = PolarizedSetup(
        params=p,
        spectrum=spectrum,
        theta=SemilinearOperator.from_matrix(alg, T),
        gram=J,
        multiplicities=mult,
        seed=seed,
        block_pairings=pairings,
    )
    verify_setup(setup)
    logger.info(f"Built {p.mode} setup with N = {size} over F of rank {alg.rank} (seed {seed})")
    return setup


# --- Invariants ---

def setup_invariant_failures(setup: PolarizedSetup) -> List[str]:
    """Matrix identities a setup must satisfy; empty when all hold"""
    p = setup.params
    alg = setup.algebra
    T = setup.T
    failures = []
    if not setup.theta.power_is_scalar(p.m, p.beta):
        failures.append(f"(T zeta)^{p.m} != beta * id")
    if not fmatrix.is_invertible(alg, T):
        failures.append("T is singular")
    J = setup.gram
    if J is None:
        return failures
    epsilon = alg.from_k(p.epsilon)
    mirrored = fmatrix.scale(alg, epsilon, fmatrix.transpose(fmatrix.entrywise(alg.sigma, J)))
    if not fmatrix.equals(alg, J, mirrored):
        failures.append("J != epsilon * sigma(J)^T")
    lhs = fmatrix.mat_mul(alg, fmatrix.mat_mul(alg, fmatrix.transpose(T), J), fmatrix.entrywise(alg.sigma, T))
    rhs = fmatrix.scale(alg, p.c, fmatrix.entrywise(alg.zeta, J))
    if not fmatrix.equals(alg, lhs, rhs):
        failures.append("T^T J sigma(T) != c * zeta(J)")
    if not fmatrix.is_invertible(alg, J):
        failures.append("J is singular")
    return failures


def verify_setup(setup: PolarizedSetup) -> None:
    """
    Raises:
        InvariantFailure: Listing every failed identity
    """
    failures = setup_invariant_failures(setup)
    if failures:
        raise InvariantFailure("; ".join(failures))
