"""
Quiver Q_xi with involution

Vertices are the factors of the center; every vertex i has exactly one
outgoing arrow i -> xi_bar(i). In polarized mode the involution * acts on
vertices and reverses arrows, and each *-orbit of cycles falls into one of
the shapes CC, VV, VE, EE.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from semifix.algebra import SetupParams
from semifix.errors import InvariantFailure, InvolutionError
from semifix.spectrum import CenterSpectrum

logger = logging.getLogger(__name__)

SHAPES = ("CC", "VV", "VE", "EE")
ELL0_AMBIGUITY = "ell0-ambiguity"
XI_OUTSIDE = "xi-outside-Xi"


@dataclass(frozen=True)
class Arrow:
    source: str
    target: str


@dataclass
class InvolutiveQuiver:
    """
    Q_xi together with the vertex and arrow involutions.

    Arrows are keyed by their source vertex. vertex_star and arrow_star are
    None in linear mode.
    """
    params: SetupParams
    spectrum: CenterSpectrum
    arrows: List[Arrow]
    xi_bar: Dict[str, str]
    vertex_star: Optional[Dict[str, str]] = None
    arrow_star: Optional[Dict[str, str]] = None
    sigma_c_fixed: Dict[str, bool] = field(default_factory=dict)
    sigma_cxi_fixed: Dict[str, bool] = field(default_factory=dict)
    xi_outside: bool = False

    @property
    def polarized(self) -> bool:
        return self.vertex_star is not None

    def arrow_from(self, vertex_id: str) -> Arrow:
        return Arrow(vertex_id, self.xi_bar[vertex_id])

    def vertex_fixed(self, vertex_id: str) -> bool:
        return self.polarized and self.vertex_star[vertex_id] == vertex_id

    def arrow_fixed(self, source: str) -> bool:
        return self.polarized and self.arrow_star[source] == source

    def cycles(self) -> List[List[str]]:
        """xi_bar-cycles, each started at its smallest vertex"""
        seen = set()
        cycles = []
        for vertex_id in self.spectrum.ids:
            if vertex_id in seen:
                continue
            cycle = []
            current = vertex_id
            while current not in seen:
                seen.add(current)
                cycle.append(current)
                current = self.xi_bar[current]
            cycles.append(cycle)
        return cycles


@dataclass(frozen=True)
class ComponentShape:
    """
    One *-orbit of cycles.

    labels pairs each vertex with its diagram label ("0", "1", "1*", ...).
    fixed_arrows lists arrow sources.
    """
    kind: str
    ell: int
    labels: Tuple[Tuple[str, str], ...]
    fixed_vertices: Tuple[str, ...] = ()
    fixed_arrows: Tuple[str, ...] = ()
    flags: Tuple[str, ...] = ()

    @property
    def vertices(self) -> List[str]:
        return [vertex_id for _, vertex_id in self.labels]

    def label_of(self, vertex_id: str) -> str:
        for label, vid in self.labels:
            if vid == vertex_id:
                return label
        raise KeyError(vertex_id)

    @property
    def name(self) -> str:
        return f"{self.kind}-{self.ell}"


def build_quiver(spectrum: CenterSpectrum, p: SetupParams) -> InvolutiveQuiver:
    """
    Compute xi_bar, the involution and the sigma_c / sigma_(c xi^-1) flags.

    If xi is outside Xi_(m/n) the arrows are those of xi = 1.

    Raises:
        InvolutionError: If b -> sigma(gamma / b) does not permute the vertices
    """
    regime = p.regime
    xi_outside = p.xi_in_Xi is False
    norm = regime.k_one() if xi_outside else p.xi_norm

    xi_bar = {}
    for vertex in spectrum.vertices:
        image = spectrum.find(norm * vertex.b_value)
        if image is None:
            raise InvariantFailure(f"Nm(xi) * {vertex.b_value} is not a root of b^{spectrum.mn} = {spectrum.beta}")
        xi_bar[vertex.id] = image.id
    arrows = [Arrow(v, xi_bar[v]) for v in spectrum.ids]

    quiver = InvolutiveQuiver(params=p, spectrum=spectrum, arrows=arrows, xi_bar=xi_bar, xi_outside=xi_outside)
    if not p.polarized:
        logger.info(f"Built linear quiver with {len(arrows)} arrows")
        return quiver

    gamma = p.gamma
    star = {}
    for vertex in spectrum.vertices:
        image_root = regime.k_sigma_extended(gamma * vertex.b_value.inverse())
        image = spectrum.find(image_root)
        if image is None:
            raise InvolutionError(
                f"involution ill-defined: sigma(gamma / {vertex.b_value}) = {image_root} is not a vertex"
            )
        star[vertex.id] = image.id
    for vertex_id, image in star.items():
        if star[image] != vertex_id:
            raise InvolutionError(f"involution ill-defined: * is not an involution at {vertex_id}")

    arrow_star = {}
    for source in spectrum.ids:
        mirrored = star[xi_bar[source]]
        if xi_bar[mirrored] != star[source]:
            raise InvariantFailure(f"* does not reverse the arrow from {source}")
        arrow_star[source] = mirrored

    trivial_on_k = regime.sigma_trivial_on_k
    norm_inverse = norm.inverse()
    sigma_c_fixed = {}
    sigma_cxi_fixed = {}
    for vertex in spectrum.vertices:
        b = vertex.b_value
        sigma_c_fixed[vertex.id] = (
            star[vertex.id] == vertex.id and trivial_on_k and b * b == gamma
        )
        sigma_cxi_fixed[vertex.id] = (
            arrow_star[vertex.id] == vertex.id and trivial_on_k and b * b == gamma * norm_inverse
        )

    quiver.vertex_star = star
    quiver.arrow_star = arrow_star
    quiver.sigma_c_fixed = sigma_c_fixed
    quiver.sigma_cxi_fixed = sigma_cxi_fixed
    fixed = sum(1 for v in star if star[v] == v)
    logger.info(f"Built polarized quiver: {len(arrows)} arrows, {fixed} *-fixed vertices")
    return quiver


def _walk(q: InvolutiveQuiver, start: str, steps: int) -> List[str]:
    path = [start]
    for _ in range(steps - 1):
        path.append(q.xi_bar[path[-1]])
    return path


def classify_components(q: InvolutiveQuiver) -> List[ComponentShape]:
    """
    Partition the quiver into *-orbits of cycles and name their shapes.

    Raises:
        InvariantFailure: If a *-stable cycle has an impossible fixed-point count
    """
    position = {v: i for i, v in enumerate(q.spectrum.ids)}
    cycles = q.cycles()

    if not q.polarized:
        shapes = []
        for cycle in cycles:
            labels = tuple((str(j + 1), v) for j, v in enumerate(cycle))
            shapes.append(ComponentShape(kind="CYCLE", ell=len(cycle), labels=labels))
        return shapes

    star = q.vertex_star
    owner = {v: idx for idx, cycle in enumerate(cycles) for v in cycle}
    done = set()
    shapes = []
    for idx, cycle in enumerate(cycles):
        if idx in done:
            continue
        mirror = owner[star[cycle[0]]]
        done.update({idx, mirror})
        size = len(cycle)

        if mirror != idx:
            start = min(cycle + cycles[mirror], key=position.get)
            path = _walk(q, start, size)
            labels = []
            for j, v in enumerate(path):
                labels.append((str(j + 1), v))
            for j, v in enumerate(path):
                labels.append((f"{j + 1}*", star[v]))
            shapes.append(ComponentShape(kind="CC", ell=size, labels=tuple(labels)))
            continue

        fixed_vertices = sorted((v for v in cycle if star[v] == v), key=position.get)
        fixed_arrows = sorted((v for v in cycle if q.arrow_star[v] == v), key=position.get)
        counts = (len(fixed_vertices), len(fixed_arrows))

        if counts == (2, 0):
            kind, ell = "VV", size // 2
            path = _walk(q, fixed_vertices[0], size)
            labels = _reflected_labels(path, ell, offset=0)
        elif counts == (1, 1):
            kind, ell = "VE", (size - 1) // 2
            path = _walk(q, fixed_vertices[0], size)
            labels = _reflected_labels(path, ell, offset=0)
        elif counts == (0, 2):
            kind, ell = "EE", size // 2
            targets = sorted((q.xi_bar[s] for s in fixed_arrows), key=position.get)
            path = _walk(q, targets[0], size)
            labels = _reflected_labels(path, ell, offset=1)
        else:
            raise InvariantFailure(
                f"*-stable cycle {cycle} has {counts[0]} fixed vertices and {counts[1]} fixed arrows"
            )

        flags = (ELL0_AMBIGUITY,) if kind == "VE" and ell == 0 else ()
        shapes.append(ComponentShape(
            kind=kind,
            ell=ell,
            labels=tuple(labels),
            fixed_vertices=tuple(fixed_vertices),
            fixed_arrows=tuple(fixed_arrows),
            flags=flags,
        ))

    logger.debug(f"Components: {', '.join(s.name for s in shapes)}")
    return shapes


def _reflected_labels(path: List[str], ell: int, offset: int) -> List[Tuple[str, str]]:
    """
    Labels along a *-stable cycle.

    offset 0 (VV, VE): path[0] is the fixed vertex 0, path[j] is j and
    path[-j] is j*. offset 1 (EE): path[0] is 1, path[j] is j+1 and
    path[-j-1] is (j+1)*.
    """
    size = len(path)
    labels: List[Tuple[str, str]] = []
    if offset == 0:
        for j in range(min(ell, size - 1) + 1):
            labels.append((str(j), path[j]))
        for j in range(1, size - ell):
            labels.append((f"{j}*", path[size - j]))
    else:
        for j in range(ell):
            labels.append((str(j + 1), path[j]))
        for j in range(ell):
            labels.append((f"{j + 1}*", path[size - j - 1]))
    return labels


def render_text(q: InvolutiveQuiver, shapes: List[ComponentShape]) -> str:
    """Plain-text rendering of Q_xi with its involution"""
    lines = []
    for vertex in q.spectrum.vertices:
        target = q.xi_bar[vertex.id]
        line = f"{vertex.id} [{vertex.label}, deg {vertex.residue_degree}] -> {target}"
        if q.polarized:
            line += f"   *: {q.vertex_star[vertex.id]}"
            if q.vertex_fixed(vertex.id):
                line += " (fixed)"
            if q.arrow_fixed(vertex.id):
                line += "   arrow fixed"
        lines.append(line)
    for shape in shapes:
        members = " ".join(f"{label}={vid}" for label, vid in shape.labels)
        lines.append(f"{shape.name}: {members}")
    if q.xi_outside:
        lines.append("xi outside Xi_(m/n): arrows shown for xi = 1")
    return "\n".join(lines)
