"""
Golden table of the loop-field cases

Twelve hand-transcribed rows covering k = C((tau)) with primitive Nm(xi):
the shape of Q_xi and the kinds of the H-factors and g(xi)-summands. Kinds
written as "form" / "alt_sym" are resolved from (sigma, epsilon) by the same
rule as the classifier's typing.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, List, Optional, Tuple

from semifix.algebra import GroundRegime, SetupParams, validate_params
from semifix.classifier import (
    GL_PAIR,
    HERMITIAN,
    HOM_PAIR,
    ORTH,
    ORTH_OR_SYMP,
    SYM2,
    SYMP,
    UNITARY,
    WEDGE2,
    WEDGE_OR_SYM,
    ClassificationReport,
    classify,
)
from semifix.errors import SemifixError
from semifix.scalars import LoopMonomial, monomial_roots

logger = logging.getLogger(__name__)

FORM = "form"
ALT_SYM = "alt_sym"

DEFAULT_NMAX = 4
DEFAULT_MNMAX = 6


@dataclass(frozen=True)
class LoopCaseRow:
    """
    One row: a parameter pattern and the expected classification.

    None in a pattern field means "any".
    """
    key: str
    sigma_trivial_on_k: bool
    mn_even: bool
    shape: str
    factor_slots: Tuple[str, ...]
    edge_slots: Tuple[str, ...]
    source: str
    val_gamma_even: Optional[bool] = None
    half_even: Optional[bool] = None
    beta_sign: Optional[int] = None
    sigma_F: Optional[str] = None
    epsilon: Optional[int] = None
    eqn_b_solvable: Optional[bool] = None

    def pattern(self) -> str:
        parts = ["sigma|_k = id" if self.sigma_trivial_on_k else "sigma|_k != id",
                 "m/n even" if self.mn_even else "m/n odd"]
        if self.val_gamma_even is not None:
            parts.append("val(gamma) even" if self.val_gamma_even else "val(gamma) odd")
        if self.half_even is not None:
            parts.append("m/2n even" if self.half_even else "m/2n odd")
        if self.beta_sign is not None:
            parts.append("beta = +gamma^(m/2n)" if self.beta_sign > 0 else "beta = -gamma^(m/2n)")
        if self.sigma_F is not None:
            parts.append("sigma = id_F" if self.sigma_F == "identity" else "sigma = zeta^(n/2)")
        if self.epsilon is not None:
            parts.append(f"epsilon = {self.epsilon:+d}")
        if self.eqn_b_solvable is not None:
            parts.append("b*sigma(b) = gamma, b^(m/n) = beta solvable" if self.eqn_b_solvable
                         else "b*sigma(b) = gamma, b^(m/n) = beta unsolvable")
        return ", ".join(parts)

    def expected_kinds(self, sigma_kind: str, epsilon: int) -> Tuple[List[str], List[str]]:
        """Factor and edge kinds (sorted) with the form slots resolved"""
        factors = sorted(resolve_slot(s, sigma_kind, epsilon) for s in self.factor_slots)
        edges = sorted(resolve_slot(s, sigma_kind, epsilon) for s in self.edge_slots)
        return factors, edges


def resolve_slot(slot: str, sigma_kind: str, epsilon: int) -> str:
    if slot == FORM:
        if sigma_kind == "identity":
            return ORTH if epsilon == 1 else SYMP
        return ORTH_OR_SYMP
    if slot == ALT_SYM:
        if sigma_kind == "identity":
            return WEDGE2 if epsilon == 1 else SYM2
        return WEDGE_OR_SYM
    return slot


def loop_case_table() -> List[LoopCaseRow]:
    """The twelve loop-field rows"""
    return [
        LoopCaseRow("A", True, False, "VE", (ORTH,), (WEDGE2,),
                    "sigma|_k = id, m/n odd: single odd cycle, orthogonal group for epsilon = 1",
                    sigma_F="identity", epsilon=1),
        LoopCaseRow("B", True, False, "VE", (SYMP,), (SYM2,),
                    "sigma|_k = id, m/n odd: single odd cycle, symplectic group for epsilon = -1",
                    sigma_F="identity", epsilon=-1),
        LoopCaseRow("C", True, False, "VE", (ORTH_OR_SYMP,), (WEDGE_OR_SYM,),
                    "sigma|_k = id, m/n odd, sigma = zeta^(n/2): orthogonal or symplectic",
                    sigma_F="zeta_half"),
        LoopCaseRow("D", True, True, "VV", (FORM, FORM), (),
                    "sigma|_k = id, m/n even, val(gamma) even, beta = gamma^(m/2n): type VV",
                    val_gamma_even=True, beta_sign=1),
        LoopCaseRow("E", True, True, "EE", (), (ALT_SYM, ALT_SYM),
                    "sigma|_k = id, m/n even, val(gamma) even, beta = -gamma^(m/2n): type EE",
                    val_gamma_even=True, beta_sign=-1),
        LoopCaseRow("F", True, True, "VE", (FORM,), (HERMITIAN,),
                    "val(gamma) odd, m/2n odd, beta = gamma^(m/2n): fixed arrow carries L_j/k-Hermitian forms",
                    val_gamma_even=False, half_even=False, beta_sign=1),
        LoopCaseRow("G", True, True, "VE", (UNITARY,), (ALT_SYM,),
                    "val(gamma) odd, m/2n odd, beta = -gamma^(m/2n): unitary group at the fixed vertex",
                    val_gamma_even=False, half_even=False, beta_sign=-1),
        LoopCaseRow("H", True, True, "VV", (FORM, UNITARY), (),
                    "val(gamma) odd, m/2n even, beta = gamma^(m/2n): one O/Sp and one unitary vertex",
                    val_gamma_even=False, half_even=True, beta_sign=1),
        LoopCaseRow("I", True, True, "EE", (), (ALT_SYM, HERMITIAN),
                    "val(gamma) odd, m/2n even, beta = -gamma^(m/2n): one square and one Hermitian arrow",
                    val_gamma_even=False, half_even=True, beta_sign=-1),
        LoopCaseRow("J", False, False, "VE", (UNITARY,), (HERMITIAN,),
                    "sigma|_k != id, m/n odd: k/k^sigma-Hermitian arrow; vertex typed unitary and flagged"),
        LoopCaseRow("K", False, True, "VV", (UNITARY, UNITARY), (),
                    "sigma|_k != id, m/n even, common solution of b*sigma(b) = gamma and b^(m/n) = beta: "
                    "two unitary groups over k^sigma",
                    eqn_b_solvable=True),
        LoopCaseRow("L", False, True, "EE", (), (HERMITIAN, HERMITIAN),
                    "sigma|_k != id, m/n even, no common solution: k/k^sigma-Hermitian forms on both arrows",
                    eqn_b_solvable=False),
    ]


# --- Matching ---

def eqn_b_solvable(p: SetupParams) -> bool:
    """Whether some b in k^x has b*sigma(b) = gamma and b^(m/n) = beta"""
    gamma = p.gamma
    if gamma.val % 2:
        return False
    s = gamma.val / 2
    n = p.regime.n
    # b = u tau^s: b*sigma(b) = u^2 (-1)^(n s) tau^(2s)
    base = LoopMonomial.of(gamma.coeff.value - n * s / 2, 0)
    for u in monomial_roots(base, 2):
        b = LoopMonomial(u.coeff, s)
        if b ** p.mn == p.beta:
            return True
    return False


def _beta_sign(p: SetupParams) -> Optional[int]:
    half = p.gamma ** (p.mn // 2)
    if p.beta == half:
        return 1
    if p.beta == -half:
        return -1
    return None


def row_matches(row: LoopCaseRow, p: SetupParams) -> bool:
    regime = p.regime
    if regime.kind != "loop" or not p.polarized or not p.xi_norm_primitive:
        return False
    if row.sigma_trivial_on_k != regime.sigma_trivial_on_k:
        return False
    mn_even = p.mn % 2 == 0
    if row.mn_even != mn_even:
        return False
    if row.sigma_F is not None and row.sigma_F != regime.sigma_kind:
        return False
    if row.epsilon is not None and row.epsilon != p.epsilon:
        return False
    if row.val_gamma_even is not None and row.val_gamma_even != (p.gamma.val % 2 == 0):
        return False
    if row.half_even is not None and row.half_even != ((p.mn // 2) % 2 == 0):
        return False
    if row.beta_sign is not None and row.beta_sign != _beta_sign(p):
        return False
    if row.eqn_b_solvable is not None and row.eqn_b_solvable != eqn_b_solvable(p):
        return False
    return True


def match_loop_case(p: SetupParams) -> Optional[LoopCaseRow]:
    """
    The unique row applying to a validated loop setup, or None.

    Raises:
        SemifixError: If more than one row applies
    """
    matches = [row for row in loop_case_table() if row_matches(row, p)]
    if len(matches) > 1:
        raise SemifixError(f"rows {[r.key for r in matches]} all match {p.describe()}")
    return matches[0] if matches else None


def report_agrees(row: LoopCaseRow, report: ClassificationReport) -> bool:
    """Single component with the row's shape and exactly the row's kinds"""
    if len(report.components) != 1:
        return False
    component = report.components[0]
    p = report.params
    factors, edges = row.expected_kinds(p.regime.sigma_kind, p.epsilon)
    got_factors = sorted(f.kind for f in component.factors if f.kind != GL_PAIR)
    got_edges = sorted(e.kind for e in component.edges if e.kind != HOM_PAIR)
    return component.shape.kind == row.shape and got_factors == factors and got_edges == edges


# --- Witness search ---

def _sigma_kinds(n: int) -> List[str]:
    kinds = ["identity"]
    kinds.append("zeta_half" if n % 2 == 0 else "minus_t")
    return kinds


def _beta_candidates(regime: GroundRegime, gamma: LoopMonomial, mn: int) -> Iterator[LoopMonomial]:
    target = gamma ** mn
    if target.val % 2:
        return
    if regime.sigma_trivial_on_k:
        yield from monomial_roots(target, 2)
        return
    s = target.val / 2
    base = LoopMonomial.of(target.coeff.value - regime.n * s / 2, 0)
    for u in monomial_roots(base, 2):
        yield LoopMonomial(u.coeff, s)


def candidate_setups(nmax: int = DEFAULT_NMAX, mnmax: int = DEFAULT_MNMAX) -> Iterator[SetupParams]:
    """Validated loop setups with xi = zeta_m over small parameters"""
    gammas = [LoopMonomial.of(coeff, val) for val in (0, 1, 2) for coeff in (0, Fraction(1, 2))]
    for n, mn in product(range(1, nmax + 1), range(1, mnmax + 1)):
        m = n * mn
        xi = LoopMonomial.of(Fraction(1, m), 0)
        for sigma_kind, epsilon in product(_sigma_kinds(n), (1, -1)):
            regime = GroundRegime(kind="loop", M=m, n=n, sigma_kind=sigma_kind)
            for gamma in gammas:
                for beta in _beta_candidates(regime, gamma, mn):
                    p = SetupParams(regime=regime, m=m, beta=beta, xi=xi, epsilon=epsilon,
                                    mode="polarized", gamma=gamma)
                    try:
                        yield validate_params(p)
                    except SemifixError as e:
                        logger.debug(f"Skipping candidate {p.describe()}: {e}")


def find_witness(row: LoopCaseRow, nmax: int = DEFAULT_NMAX, mnmax: int = DEFAULT_MNMAX) -> Optional[SetupParams]:
    """First small setup that matches `row` (within the bounds), or None"""
    for p in candidate_setups(nmax, mnmax):
        if row_matches(row, p):
            return p
    return None


WitnessRow = Tuple[LoopCaseRow, Optional[SetupParams], Optional[ClassificationReport]]


def table_with_witnesses(nmax: int = DEFAULT_NMAX, mnmax: int = DEFAULT_MNMAX,
                         keep_missing: bool = False) -> List[WitnessRow]:
    """
    Rows with the first witness inside the bounds and its classification.

    Rows without a witness are dropped, or kept as (row, None, None) when
    keep_missing is set.
    """
    rows: List[WitnessRow] = []
    for row in loop_case_table():
        witness = find_witness(row, nmax, mnmax)
        if witness is None:
            logger.info(f"Row {row.key}: no witness with n <= {nmax}, m/n <= {mnmax}")
            if keep_missing:
                rows.append((row, None, None))
            continue
        rows.append((row, witness, classify(witness)))
    return rows
