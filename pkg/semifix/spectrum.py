"""
Center spectrum: the factorization of L_beta = k[b]/(b^(m/n) - beta)

Each factor field L_i is one vertex of the quiver, represented by a root
b_i of b^(m/n) = beta together with its Galois orbit over k.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Dict, List, Optional, Tuple

from semifix.algebra import FElement, KScalar, SetupParams
from semifix.errors import (
    InsufficientCyclotomicOrder,
    InvariantFailure,
    NonSplitAlgebraError,
    SetupValidationError,
)
from semifix.scalars import (
    LoopMonomial,
    lcm,
    minimal_cyclotomic_order,
    monomial_roots,
    root_of_unity,
    root_of_unity_exponent,
    unit_group_order,
)

logger = logging.getLogger(__name__)

BETA_ROOT_OF_UNITY = "beta is a root of unity in Q(zeta_M)"


@dataclass(frozen=True)
class Vertex:
    """
    One factor L_i of the center.

    simple_model is the F-element a_i with Nm(a_i) = b_i used to model the
    simple module S_i in the number-field regime.
    """
    id: str
    b_value: KScalar
    residue_degree: int = 1
    division_degree: int = 1
    simple_dim: int = 1
    orbit: Tuple[KScalar, ...] = ()
    simple_model: Optional[FElement] = None

    @property
    def label(self) -> str:
        return str(self.b_value)


@dataclass(frozen=True)
class CenterSpectrum:
    """Vertices of the quiver, ordered by canonical b-value"""
    mn: int
    beta: KScalar
    vertices: Tuple[Vertex, ...]

    @cached_property
    def _index(self) -> Dict[KScalar, Vertex]:
        index = {}
        for vertex in self.vertices:
            for root in vertex.orbit:
                index[root] = vertex
        return index

    @cached_property
    def _by_id(self) -> Dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @property
    def ids(self) -> List[str]:
        return [v.id for v in self.vertices]

    def find(self, root: KScalar) -> Optional[Vertex]:
        """The vertex whose root orbit contains root"""
        return self._index.get(root)

    def vertex(self, vertex_id: str) -> Vertex:
        try:
            return self._by_id[vertex_id]
        except KeyError:
            raise KeyError(f"Unknown vertex '{vertex_id}'") from None

    def position(self, vertex_id: str) -> int:
        return self.ids.index(vertex_id)

    def select(self, selector: str) -> Optional[Vertex]:
        """Match a multiplicity selector: vertex id or canonical b-value"""
        if selector in self._by_id:
            return self._by_id[selector]
        for vertex in self.vertices:
            if vertex.label == selector or any(str(root) == selector for root in vertex.orbit):
                return vertex
        return None

    def total_degree(self) -> int:
        return sum(v.residue_degree for v in self.vertices)


def split_center_numberfield(p: SetupParams) -> CenterSpectrum:
    """
    One vertex per root of b^(m/n) = beta in Q(zeta_M).

    Raises:
        SetupValidationError: If beta is not a root of unity
        InsufficientCyclotomicOrder: If some root lies outside Q(zeta_M)
        NonSplitAlgebraError: If a vertex would need a non-split simple module
    """
    regime = p.regime
    mn = p.mn
    exponent = root_of_unity_exponent(p.beta)
    if exponent is None:
        raise SetupValidationError.single(BETA_ROOT_OF_UNITY, f"beta = {p.beta} is not a root of unity")

    exponents = sorted(((exponent + j) / mn) % 1 for j in range(mn))
    denominators = 1
    for e in exponents:
        denominators = lcm(denominators, e.denominator)
    if unit_group_order(regime.M) % denominators:
        raise InsufficientCyclotomicOrder(
            f"roots of b^{mn} = {p.beta} are {denominators}-th roots of unity",
            minimal_order=lcm(regime.M, minimal_cyclotomic_order(denominators)),
        )

    f = regime.field
    vertices = []
    for position, e in enumerate(exponents):
        root = root_of_unity(regime.M, e)
        model = f.norm_preimage(root)
        if model is None:
            raise NonSplitAlgebraError(
                f"b = {root} is not a norm from F = k(sqrt({f.discriminant})); "
                f"its simple module would have division degree 2"
            )
        vertices.append(Vertex(
            id=f"b{position}",
            b_value=root,
            residue_degree=1,
            simple_dim=regime.n,
            orbit=(root,),
            simple_model=model,
        ))

    spectrum = CenterSpectrum(mn=mn, beta=p.beta, vertices=tuple(vertices))
    logger.info(f"Center splits into {len(vertices)} fields over Q(zeta_{regime.M})")
    return spectrum


def _orbit_key(root: LoopMonomial) -> Tuple[Fraction, Fraction]:
    q = root.val.denominator
    return (root.val, root.coeff.value % Fraction(1, q))


def split_center_loop(p: SetupParams) -> CenterSpectrum:
    """
    Group the m/n roots of b^(m/n) = beta into Galois orbits over C((tau)).

    Two roots are conjugate iff they differ by a root of unity whose order
    divides the denominator q of their valuation; each orbit has size q.
    """
    mn = p.mn
    roots = monomial_roots(p.beta, mn)
    groups: Dict[Tuple[Fraction, Fraction], List[LoopMonomial]] = {}
    for root in roots:
        groups.setdefault(_orbit_key(root), []).append(root)

    vertices = []
    for position, key in enumerate(sorted(groups)):
        members = sorted(groups[key], key=lambda r: r.coeff.value)
        q = members[0].val.denominator
        if len(members) != q:
            raise InvariantFailure(f"orbit of {members[0]} has {len(members)} roots, expected {q}")
        vertices.append(Vertex(
            id=f"b{position}",
            b_value=members[0],
            residue_degree=q,
            simple_dim=p.regime.n,
            orbit=tuple(members),
        ))

    spectrum = CenterSpectrum(mn=mn, beta=p.beta, vertices=tuple(vertices))
    if spectrum.total_degree() != mn:
        raise InvariantFailure(f"residue degrees sum to {spectrum.total_degree()}, expected {mn}")
    logger.info(f"Center splits into {len(vertices)} fields over C((tau))")
    return spectrum


def split_center(p: SetupParams) -> CenterSpectrum:
    if p.regime.kind == "loop":
        return split_center_loop(p)
    return split_center_numberfield(p)


def expected_vertex_count(mn: int, beta_val: int) -> int:
    """gcd(m/n, val(beta)) for beta = tau^r"""
    return gcd(mn, beta_val)
