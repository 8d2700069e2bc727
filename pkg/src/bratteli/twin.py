"""The twin algebras A and B inside a product of 2x2 matrix algebras.

A point set X is truncated to a finite ordered ground set X0.  The product
over all 2-subsets z of X is modelled by one M_2 block per 2-subset of X0
plus one "tail" block {x, TAIL} per point, standing for every z that meets
X0 in the single point x.  Without the tail blocks p_x would lie in the span
of the M_z at the top stage and the line summands would collapse.

Variant ``"A"`` uses p_x(z) = e_{1,1}; variant ``"B"`` uses q_x(z) = e_{x,x},
where the points of z label the coordinates of M_z in ground order (the tail
point comes last).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .diagrams import BratteliDiagram, FinitePoset, subset_name, subsets
from .exactalg import (
    Element,
    MatrixUnitSystem,
    MultiMatrixAlgebra,
    Span,
    commutator,
    decompose,
    ideal_generated_by,
    is_projection,
    multiply,
)
from .homs import Wiring, check_unit_map, wiring_from_unit_images, zero_wiring

TAIL = "TAIL"
VARIANTS = ("A", "B")


@dataclass(frozen=True)
class GroundSet:
    points: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if len(self.points) < 2:
            raise ValueError("ground set needs at least two points")
        if len(set(self.points)) != len(self.points) or TAIL in self.points:
            raise ValueError("point names must be distinct and differ from the tail name")

    @property
    def pairs(self) -> list[tuple[str, str]]:
        """Z0: the 2-subsets of X0 in lexicographic ground order."""
        return list(combinations(self.points, 2))

    def index(self, x: str) -> int:
        try:
            return self.points.index(x)
        except ValueError:
            raise KeyError(f"unknown point {x!r}") from None


@dataclass(frozen=True)
class TwinAmbient:
    ground: GroundSet

    @cached_property
    def blocks(self) -> list[tuple[str, str]]:
        return self.ground.pairs + [(x, TAIL) for x in self.ground.points]

    @cached_property
    def block_index(self) -> dict[tuple[str, str], int]:
        return {z: i for i, z in enumerate(self.blocks)}

    @cached_property
    def algebra(self) -> MultiMatrixAlgebra:
        return MultiMatrixAlgebra((2,) * len(self.blocks))

    def unit(self, z: tuple[str, str], i: int, j: int) -> Element:
        """e^z_{i,j} (0-based coordinates)."""
        return Element(self.algebra, {(self.block_index[z], i, j): 1})

    def labelled_unit(self, z: tuple[str, str], x: str, y: str) -> Element:
        """e^z_{x,y}: coordinates named by the points of z."""
        return self.unit(z, z.index(x), z.index(y))

    def pair(self, x: str, y: str) -> tuple[str, str]:
        gx, gy = self.ground.index(x), self.ground.index(y)
        return (x, y) if gx < gy else (y, x)


def twin_generator(ambient: TwinAmbient, variant: str, x: str) -> Element:
    """p_x for variant A, q_x for variant B."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be 'A' or 'B', got {variant!r}")
    ambient.ground.index(x)
    entries = {}
    for z, b in ambient.block_index.items():
        if x in z:
            c = 0 if variant == "A" else z.index(x)
            entries[(b, c, c)] = 1
    return Element(ambient.algebra, entries)


def _corner(ambient: TwinAmbient, variant: str, x: str, z: tuple[str, str]) -> Element:
    """The unit of M_z that the generator of x occupies."""
    return ambient.unit(z, 0, 0) if variant == "A" else ambient.labelled_unit(z, x, x)


@dataclass(frozen=True, eq=False)
class TwinStage:
    ambient: TwinAmbient
    variant: str
    points: tuple[str, ...]

    @cached_property
    def pairs(self) -> list[tuple[str, str]]:
        return list(combinations(self.points, 2))

    @cached_property
    def span(self) -> list[Element]:
        amb = self.ambient
        out = [amb.unit(z, i, j) for z in self.pairs for i in range(2) for j in range(2)]
        out += [twin_generator(amb, self.variant, x) for x in self.points]
        return out

    def line_projection(self, x: str) -> Element:
        """p'_x: the generator minus its corners inside the stage."""
        amb = self.ambient
        g = twin_generator(amb, self.variant, x)
        for y in self.points:
            if y != x:
                g = g - _corner(amb, self.variant, x, amb.pair(x, y))
        return g

    @cached_property
    def units(self) -> MatrixUnitSystem:
        amb = self.ambient
        summands = [
            tuple(tuple(amb.unit(z, i, j) for j in range(2)) for i in range(2)) for z in self.pairs
        ]
        summands += [((self.line_projection(x),),) for x in self.points]
        return MatrixUnitSystem(amb.algebra, tuple(summands))

    @property
    def algebra(self) -> MultiMatrixAlgebra:
        return self.units.algebra

    @property
    def dimension(self) -> int:
        return self.algebra.dimension

    def computed_decomposition(self) -> list[tuple[Element, int]]:
        """Minimal central idempotents and summand sizes, computed from the span."""
        return decompose(self.span)

    def summand_of_point(self, x: str) -> int:
        return len(self.pairs) + self.points.index(x)


def build_twin_stage(ambient: TwinAmbient, variant: str, lam) -> TwinStage:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be 'A' or 'B', got {variant!r}")
    lam = set(lam)
    unknown = lam - set(ambient.ground.points)
    if unknown:
        raise ValueError(f"points {sorted(unknown)} are not in the ground set")
    pts = tuple(x for x in ambient.ground.points if x in lam)
    return TwinStage(ambient, variant, pts)


def inclusion_wiring(small: TwinStage, large: TwinStage) -> Wiring:
    if small.ambient != large.ambient or small.variant != large.variant:
        raise ValueError("stages belong to different constructions")
    if not set(small.points) <= set(large.points):
        raise ValueError("first stage is not contained in the second")
    if not small.points:
        return zero_wiring(small.algebra, large.algebra)
    return wiring_from_unit_images(
        small.algebra,
        large.algebra,
        lambda i, r, s: large.units.coordinates(small.units.units[i][r][s]),
    )


@dataclass
class QuotientReport:
    ideal_blocks: frozenset[int]
    quotient_sizes: tuple[int, ...]
    quotient_dimension: int
    generator_images: dict[str, tuple]


def quotient_by_commutators(stage: TwinStage) -> QuotientReport:
    """Ideal generated by all commutators of the stage and the quotient map on generators."""
    alg = stage.algebra
    comms = []
    for a in stage.span:
        for b in stage.span:
            c = commutator(a, b)
            if c:
                comms.append(stage.units.coordinates(c))
    ideal = ideal_generated_by(alg, comms)
    rest = [i for i in range(alg.k) if i not in ideal]
    sizes = tuple(alg.sizes[i] for i in rest)
    images = {}
    for x in stage.points:
        coords = stage.units.coordinates(twin_generator(stage.ambient, stage.variant, x))
        images[x] = tuple(coords.entries.get((i, 0, 0), 0) for i in rest)
    return QuotientReport(ideal, sizes, sum(n * n for n in sizes), images)


def quotient_map(stage: TwinStage, a: Element) -> tuple:
    """Image of an ambient element of the stage in the quotient by the commutator ideal."""
    coords = stage.units.coordinates(a)
    return tuple(coords.entries.get((stage.summand_of_point(x), 0, 0), 0) for x in stage.points)


def splitting_B(stage: TwinStage) -> Wiring:
    """The section delta_x -> q_x of the quotient map, as a wiring into the stage."""
    if stage.variant != "B":
        raise ValueError("the splitting delta_x -> generator is only a homomorphism for variant B")
    lines = MultiMatrixAlgebra((1,) * len(stage.points))
    return wiring_from_unit_images(
        lines,
        stage.algebra,
        lambda i, r, s: stage.units.coordinates(twin_generator(stage.ambient, "B", stage.points[i])),
    )


# ---------------------------------------------------------------------------
# the isomorphism for an enumerated ground set


@dataclass
class CountableIsoReport:
    images: dict[str, Element]  # labels of A-spanning elements -> images in B
    linear_independent: bool
    multiplicative: bool
    adjoint_preserving: bool
    into_b: bool
    onto_b: bool
    first_point_fixed: bool

    @property
    def ok(self) -> bool:
        return all(
            (self.linear_independent, self.multiplicative, self.adjoint_preserving, self.into_b, self.onto_b, self.first_point_fixed)
        )


def countable_iso_table(ambient: TwinAmbient) -> tuple[list[tuple[str, Element]], dict[str, Element]]:
    """(A spanning set with labels, images under phi) on the top stage."""
    amb = ambient
    pts = amb.ground.points
    basis: list[tuple[str, Element]] = []
    images: dict[str, Element] = {}
    for k, l in combinations(range(len(pts)), 2):
        z = (pts[k], pts[l])
        n = (k, l)  # n_1 < n_2 in the enumeration
        for i in range(2):
            for j in range(2):
                label = f"e[{z[0]},{z[1]}]({i + 1},{j + 1})"
                basis.append((label, amb.unit(z, i, j)))
                images[label] = amb.labelled_unit(z, pts[n[i]], pts[n[j]])
    for k, x in enumerate(pts):
        label = f"p[{x}]"
        basis.append((label, twin_generator(amb, "A", x)))
        img = twin_generator(amb, "B", x)
        for i in range(k):
            z = (pts[i], x)
            img = img + amb.labelled_unit(z, pts[i], pts[i]) - amb.labelled_unit(z, x, x)
        images[label] = img
    return basis, images


def countable_iso(ambient: TwinAmbient) -> CountableIsoReport:
    """Build phi: A -> B on the top stage and verify it is a *-isomorphism."""
    basis, images = countable_iso_table(ambient)
    labels = [lab for lab, _ in basis]
    coords = Span(track=True)
    independent = all(coords.insert(e.entries) is None for _, e in basis)

    def phi(a: Element) -> Element:
        c = coords.coordinates(a.entries)
        if c is None:
            raise ValueError("element outside the A span")
        out = a.algebra.zero()
        for idx, v in c.items():
            out = out + v * images[labels[idx]]
        return out

    elems = [e for _, e in basis]
    mult = independent and all(
        phi(multiply(a, b)) == multiply(images[la], images[lb]) for la, a in basis for lb, b in basis
    )
    adj = independent and all(phi(a.adjoint()) == images[la].adjoint() for la, a in basis)
    top_b = build_twin_stage(ambient, "B", ambient.ground.points)
    b_span = Span()
    for e in top_b.span:
        b_span.insert(e.entries)
    into = all(b_span.contains(images[lab].entries) for lab in labels)
    img_span = Span()
    for lab in labels:
        img_span.insert(images[lab].entries)
    onto = into and img_span.rank == b_span.rank == len(elems)
    x1 = ambient.ground.points[0]
    fixed = images[f"p[{x1}]"] == twin_generator(ambient, "B", x1)
    return CountableIsoReport(images, independent, mult, adj, into, onto, fixed)


# ---------------------------------------------------------------------------
# Bratteli data


def twin_stages(ambient: TwinAmbient, variant: str) -> dict[tuple[str, ...], TwinStage]:
    return {s: build_twin_stage(ambient, variant, s) for s in subsets(ambient.ground.points, include_empty=False)}


def twin_bratteli_data(ambient: TwinAmbient, variant: str) -> BratteliDiagram:
    """Diagram over the nonempty subsets of X0 from the actual stage inclusions."""
    stages = twin_stages(ambient, variant)
    names = {s: subset_name(s) for s in stages}
    poset = FinitePoset(names.values(), [(names[a], names[b]) for a in stages for b in stages if set(a) < set(b)])
    dims = {names[s]: st.algebra.sizes for s, st in stages.items()}
    mults = {}
    for a, sa in stages.items():
        for b, sb in stages.items():
            if set(a) < set(b):
                mults[(names[b], names[a])] = inclusion_wiring(sa, sb).multiplicity
    return BratteliDiagram(poset, dims, dict(sorted(mults.items())))


def generator_identities(ambient: TwinAmbient) -> list[str]:
    """Failures of p_x p_y = e^{x,y}_{1,1} and q_x q_y = 0 for x != y."""
    bad = []
    pts = ambient.ground.points
    for x in pts:
        for v in VARIANTS:
            if not is_projection(twin_generator(ambient, v, x)):
                bad.append(f"{v}: generator of {x} is not a projection")
        for y in pts:
            if x == y:
                continue
            z = ambient.pair(x, y)
            p = multiply(twin_generator(ambient, "A", x), twin_generator(ambient, "A", y))
            if p != ambient.unit(z, 0, 0):
                bad.append(f"p_{x} p_{y} != e^{{{z[0]},{z[1]}}}_11")
            q = multiply(twin_generator(ambient, "B", x), twin_generator(ambient, "B", y))
            if q:
                bad.append(f"q_{x} q_{y} != 0")
    return bad


def check_splitting(stage: TwinStage) -> bool:
    """sigma_B is a homomorphism and a right inverse of the quotient map."""
    sigma = splitting_B(stage)
    lines = sigma.source
    if not check_unit_map(lines, stage.algebra, lambda i, r, s: sigma(Element(lines, {(i, r, s): 1}))):
        return False
    for i, x in enumerate(stage.points):
        img = stage.units.embed(sigma(Element(lines, {(i, 0, 0): 1})))
        if img != twin_generator(stage.ambient, "B", x):
            return False
        delta = tuple(int(y == x) for y in stage.points)
        if quotient_map(stage, img) != delta:
            return False
    return True
