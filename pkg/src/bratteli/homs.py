"""*-homomorphisms between multi-matrix algebras, realized as wirings.

A wiring places, inside each target block, copies of source blocks at chosen
coordinate positions.  Position ``q`` of target block ``j`` carries a slot
``(i, c, r)``: coordinate ``r`` of copy ``c`` of source block ``i``; positions
carrying ``None`` are zero padding.  The induced map is

    e^{(i)}_{r,s}  ->  sum_j sum_c  E^{(j)}_{pos(i,c,r), pos(i,c,s)}.

Copy numbers are not part of the homomorphism, so layouts are normalized:
within each (target block, source block) pair copies are renumbered in order
of first appearance.  Two wirings are then equal exactly when they induce the
same map.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Sequence

from .exactalg import Element, MultiMatrixAlgebra, block_ranks, multiply

Slot = tuple[int, int, int]
MultiplicityMatrix = tuple[tuple[int, ...], ...]


def as_matrix(rows: Sequence[Sequence[int]]) -> MultiplicityMatrix:
    return tuple(tuple(int(v) for v in row) for row in rows)


def matmul(a: MultiplicityMatrix, b: MultiplicityMatrix, inner: int | None = None) -> MultiplicityMatrix:
    """Integer matrix product; ``inner`` fixes the shared dimension when a side has no rows."""
    n = inner if inner is not None else (len(b) if b else 0)
    cols = len(b[0]) if b else 0
    return tuple(tuple(sum(row[k] * b[k][c] for k in range(n)) for c in range(cols)) for row in a)


def identity_matrix(k: int) -> MultiplicityMatrix:
    return tuple(tuple(int(i == j) for j in range(k)) for i in range(k))


def matvec(a: MultiplicityMatrix, v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


@dataclass(frozen=True)
class Wiring:
    source: MultiMatrixAlgebra
    target: MultiMatrixAlgebra
    layout: tuple[tuple[Optional[Slot], ...], ...]

    def __post_init__(self):
        layout = tuple(tuple(block) for block in self.layout)
        if len(layout) != self.target.k:
            raise ValueError(f"layout has {len(layout)} blocks, target has {self.target.k}")
        normalized = []
        for j, (n, block) in enumerate(zip(self.target.sizes, layout)):
            if len(block) != n:
                raise ValueError(f"target block {j + 1}: layout length {len(block)} != {n}")
            seen: dict[tuple[int, int], set] = {}
            renumber: dict[tuple[int, int], int] = {}
            counts: dict[int, int] = {}
            out = []
            for slot in block:
                if slot is None:
                    out.append(None)
                    continue
                i, c, r = slot
                if not 0 <= i < self.source.k or not 0 <= r < self.source.sizes[i]:
                    raise ValueError(f"target block {j + 1}: slot {slot} out of range")
                coords = seen.setdefault((i, c), set())
                if r in coords:
                    raise ValueError(f"target block {j + 1}: slot {slot} used twice")
                coords.add(r)
                if (i, c) not in renumber:
                    renumber[(i, c)] = counts.get(i, 0)
                    counts[i] = renumber[(i, c)] + 1
                out.append((i, renumber[(i, c)], r))
            for (i, c), coords in seen.items():
                if len(coords) != self.source.sizes[i]:
                    raise ValueError(f"target block {j + 1}: copy {c} of source block {i + 1} is incomplete")
            normalized.append(tuple(out))
        object.__setattr__(self, "layout", tuple(normalized))

    @cached_property
    def copies(self) -> dict[int, list[tuple[int, tuple[int, ...]]]]:
        """source block -> list of (target block, positions indexed by coordinate)."""
        table: dict[tuple[int, int, int], dict[int, int]] = {}
        for j, block in enumerate(self.layout):
            for q, slot in enumerate(block):
                if slot is not None:
                    i, c, r = slot
                    table.setdefault((i, j, c), {})[r] = q
        out: dict[int, list] = {i: [] for i in range(self.source.k)}
        for (i, j, c) in sorted(table):
            pos = table[(i, j, c)]
            out[i].append((j, tuple(pos[r] for r in range(self.source.sizes[i]))))
        return out

    @cached_property
    def multiplicity(self) -> MultiplicityMatrix:
        counts = [[0] * self.source.k for _ in range(self.target.k)]
        for i, lst in self.copies.items():
            for j, _ in lst:
                counts[j][i] += 1
        return as_matrix(counts)

    def __call__(self, a: Element) -> Element:
        return apply_hom(self, a)

    def describe(self) -> str:
        """Compact 1-based rendering: one bracket per target block."""
        parts = []
        for block in self.layout:
            cells = ["." if s is None else f"{s[0] + 1}:{s[1] + 1}:{s[2] + 1}" for s in block]
            parts.append("[" + " ".join(cells) + "]")
        return " ".join(parts) if parts else "[]"


def standard_wiring(source: MultiMatrixAlgebra, target: MultiMatrixAlgebra, N: Sequence[Sequence[int]]) -> Wiring:
    """Canonical wiring: slots packed by (source block, copy, coordinate), padding last."""
    N = as_matrix(N)
    if len(N) != target.k or any(len(row) != source.k for row in N):
        raise ValueError(f"multiplicity matrix must be {target.k}x{source.k}")
    layout = []
    for j, row in enumerate(N):
        if any(v < 0 for v in row):
            raise ValueError(f"row {j + 1}: negative multiplicity")
        used = sum(m * n for m, n in zip(row, source.sizes))
        if used > target.sizes[j]:
            raise ValueError(f"row {j + 1}: {used} slots exceed target block size {target.sizes[j]}")
        block = [(i, c, r) for i, m in enumerate(row) for c in range(m) for r in range(source.sizes[i])]
        block += [None] * (target.sizes[j] - used)
        layout.append(tuple(block))
    return Wiring(source, target, tuple(layout))


def identity_wiring(alg: MultiMatrixAlgebra) -> Wiring:
    return standard_wiring(alg, alg, identity_matrix(alg.k))


def apply_hom(w: Wiring, a: Element) -> Element:
    if a.algebra != w.source:
        raise ValueError("element is not in the source algebra")
    out = {}
    copies = w.copies
    for (i, r, s), v in a.entries.items():
        for j, pos in copies[i]:
            out[(j, pos[r], pos[s])] = v
    return Element(w.target, out)


def compose_homs(g: Wiring, f: Wiring) -> Wiring:
    """The wiring of ``g o f``."""
    if f.target != g.source:
        raise ValueError("cannot compose: target of f differs from source of g")
    layout = []
    for block in g.layout:
        out = []
        for slot in block:
            if slot is None:
                out.append(None)
                continue
            j, c, p = slot
            inner = f.layout[j][p]
            if inner is None:
                out.append(None)
            else:
                i, c2, r = inner
                out.append((i, (j, c, c2), r))
        layout.append(tuple(out))
    return Wiring(f.source, g.target, tuple(layout))


def multiplicity_of(w: Wiring) -> MultiplicityMatrix:
    return w.multiplicity


def multiplicity_by_rank(w: Wiring) -> MultiplicityMatrix:
    """Multiplicities recomputed as block ranks of the images of minimal projections."""
    cols = []
    for i in range(w.source.k):
        e = Element(w.source, {(i, 0, 0): 1})
        cols.append(block_ranks(apply_hom(w, e)))
    return tuple(tuple(cols[i][j] for i in range(w.source.k)) for j in range(w.target.k))


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    violation: str | None = None

    def __bool__(self):
        return self.ok


def check_unit_map(
    source: MultiMatrixAlgebra,
    target: MultiMatrixAlgebra,
    image: Callable[[int, int, int], Element],
) -> CheckResult:
    """Check that a map given on matrix units extends to a *-homomorphism.

    Verifies phi(e_rs) phi(e_s't) = delta_{s,s'} phi(e_rt), phi(e_rs)* = phi(e_sr)
    within every source block and phi(x) phi(y) = 0 across blocks.
    """
    imgs = {}
    for i, n in enumerate(source.sizes):
        for r in range(n):
            for s in range(n):
                x = image(i, r, s)
                if x.algebra != target:
                    return CheckResult(False, f"image of e[{i + 1}]({r + 1},{s + 1}) not in target")
                imgs[(i, r, s)] = x
    zero = target.zero()
    for (i, r, s), x in imgs.items():
        if x.adjoint() != imgs[(i, s, r)]:
            return CheckResult(False, f"phi(e[{i + 1}]({r + 1},{s + 1}))* != phi(e[{i + 1}]({s + 1},{r + 1}))")
    for (i, r, s), x in imgs.items():
        for (i2, s2, t), y in imgs.items():
            prod = multiply(x, y)
            if i == i2 and s == s2:
                expect = imgs[(i, r, t)]
            else:
                expect = zero
            if prod != expect:
                return CheckResult(
                    False,
                    f"phi(e[{i + 1}]({r + 1},{s + 1})) phi(e[{i2 + 1}]({s2 + 1},{t + 1})) is wrong",
                )
    return CheckResult(True)


def check_homomorphism(w: Wiring) -> CheckResult:
    return check_unit_map(w.source, w.target, lambda i, r, s: apply_hom(w, Element(w.source, {(i, r, s): 1})))


def unitarily_equivalent(f: Wiring, g: Wiring) -> bool:
    if f.source != g.source or f.target != g.target:
        raise ValueError("wirings have different source or target")
    return f.multiplicity == g.multiplicity


def zero_wiring(source: MultiMatrixAlgebra, target: MultiMatrixAlgebra) -> Wiring:
    return Wiring(source, target, tuple((None,) * n for n in target.sizes))


def wiring_from_unit_images(
    source: MultiMatrixAlgebra,
    target: MultiMatrixAlgebra,
    image: Callable[[int, int, int], Element],
) -> Wiring:
    """Recover the wiring inducing a map given on matrix units.

    Raises ``ValueError`` if the map is not induced by any wiring.
    """
    layout = [[None] * n for n in target.sizes]
    for i, n in enumerate(source.sizes):
        diag = image(i, 0, 0)
        columns = {}
        for r in range(n):
            img = image(i, r, 0)
            for (j, q, p), v in img.entries.items():
                if v != 1:
                    raise ValueError(f"image of e[{i + 1}]({r + 1},1) has entry {v}")
                if (j, p, r) in columns:
                    raise ValueError(f"image of e[{i + 1}]({r + 1},1) is not a partial permutation")
                columns[(j, p, r)] = q
        copy_no: dict[int, int] = {}
        for (j, q, p), v in sorted(diag.entries.items()):
            if q != p or v != 1:
                raise ValueError(f"image of e[{i + 1}](1,1) is not a sum of diagonal units")
            c = copy_no.get(j, 0)
            copy_no[j] = c + 1
            for r in range(n):
                pos = columns.get((j, p, r))
                if pos is None:
                    raise ValueError(f"image of e[{i + 1}]({r + 1},1) misses copy at position {p + 1}")
                if layout[j][pos] is not None:
                    raise ValueError(f"target block {j + 1} position {pos + 1} used twice")
                layout[j][pos] = (i, c, r)
    w = Wiring(source, target, tuple(tuple(b) for b in layout))
    for i, n in enumerate(source.sizes):
        for r in range(n):
            for s in range(n):
                if apply_hom(w, Element(source, {(i, r, s): 1})) != image(i, r, s):
                    raise ValueError(f"map on e[{i + 1}]({r + 1},{s + 1}) is not induced by a wiring")
    return w
