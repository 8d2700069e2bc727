"""K_0 of multi-matrix stages and of their colimit over a finite diagram.

K_0 of M_{n_1} + ... + M_{n_k} is Z^k with the componentwise order and the
scale [0, n].  A homomorphism acts by its multiplicity matrix.  Classes in
the colimit are pairs (vertex, vector); two of them agree when their images
agree at some common upper bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .diagrams import BratteliDiagram
from .exactalg import Element, MatrixUnitSystem, MultiMatrixAlgebra, block_ranks, is_projection
from .homs import MultiplicityMatrix, Wiring, compose_homs, matmul, matvec

Vector = tuple[int, ...]


@dataclass(frozen=True)
class K0Stage:
    dims: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.dims)

    def is_positive(self, v: Sequence[int]) -> bool:
        self._check(v)
        return all(x >= 0 for x in v)

    def in_scale(self, v: Sequence[int]) -> bool:
        self._check(v)
        return all(0 <= x <= n for x, n in zip(v, self.dims))

    def _check(self, v):
        if len(v) != self.rank:
            raise ValueError(f"vector of length {len(v)} in a group of rank {self.rank}")


def stage_k0(alg: MultiMatrixAlgebra) -> K0Stage:
    return K0Stage(alg.sizes)


def connect(w: Wiring) -> MultiplicityMatrix:
    return w.multiplicity


def connect_is_functorial(g: Wiring, f: Wiring) -> bool:
    return connect(compose_homs(g, f)) == matmul(connect(g), connect(f), inner=g.source.k)


def connect_is_positive(w: Wiring) -> bool:
    """Positive cone to positive cone, and scale to scale when the map is unit-decreasing."""
    src, dst = stage_k0(w.source), stage_k0(w.target)
    N = connect(w)
    if any(x < 0 for row in N for x in row):
        return False
    return dst.in_scale(matvec(N, src.dims)) if src.rank else True


def class_of_projection(p: Element, units: MatrixUnitSystem | None = None) -> Vector:
    """Block ranks of a projection, in the stage basis when ``units`` is given."""
    if not is_projection(p):
        raise ValueError("element is not a projection")
    if units is not None:
        p = units.coordinates(p)
    return block_ranks(p)


@dataclass(frozen=True)
class ColimitClass:
    vertex: str
    vector: Vector

    def __post_init__(self):
        object.__setattr__(self, "vector", tuple(int(x) for x in self.vector))


def push(d: BratteliDiagram, c: ColimitClass, nu: str) -> Vector:
    """Representative of c at a vertex above it."""
    if c.vertex not in d.dims or nu not in d.dims:
        raise KeyError("vertex not in the diagram")
    if not d.poset.le(c.vertex, nu):
        raise ValueError(f"{nu} is not above {c.vertex}")
    if len(c.vector) != len(d.dims[c.vertex]):
        raise ValueError(f"vector length does not match vertex {c.vertex}")
    return matvec(d.mult(nu, c.vertex), c.vector)


def colimit_equal(d: BratteliDiagram, c1: ColimitClass, c2: ColimitClass) -> bool:
    for nu in d.poset.upper_bounds(c1.vertex, c2.vertex):
        if push(d, c1, nu) == push(d, c2, nu):
            return True
    return False


def positive_and_scale(d: BratteliDiagram, c: ColimitClass) -> tuple[bool, bool]:
    positive = scale = False
    for nu in [c.vertex] + d.poset.above(c.vertex):
        v = push(d, c, nu)
        st = K0Stage(d.dims[nu])
        positive = positive or st.is_positive(v)
        scale = scale or st.in_scale(v)
    return positive, scale


def unit_class(d: BratteliDiagram, v: str) -> ColimitClass:
    return ColimitClass(v, d.dims[v])


def block_classes(d: BratteliDiagram, v: str) -> list[ColimitClass]:
    """Classes of the minimal projections of each block of a stage."""
    k = len(d.dims[v])
    return [ColimitClass(v, tuple(int(i == j) for j in range(k))) for i in range(k)]
