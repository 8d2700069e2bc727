"""Bratteli diagrams and inductive systems over finite posets."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterable, Mapping, Optional

from .exactalg import MultiMatrixAlgebra
from .homs import (
    MultiplicityMatrix,
    Wiring,
    as_matrix,
    compose_homs,
    identity_matrix,
    matmul,
    matvec,
    standard_wiring,
)


class FinitePoset:
    """A finite partial order; ``leq`` is stored as its reflexive closure."""

    def __init__(self, vertices: Iterable[str], relations: Iterable[tuple[str, str]] = ()):
        self.vertices: tuple[str, ...] = tuple(sorted(set(vertices)))
        vset = set(self.vertices)
        up: dict[str, set[str]] = {v: {v} for v in self.vertices}
        for a, b in relations:
            if a not in vset or b not in vset:
                raise ValueError(f"relation {a} <= {b} uses an unknown vertex")
            up[a].add(b)
        changed = True
        while changed:
            changed = False
            for v in self.vertices:
                new = set().union(*(up[w] for w in up[v]))
                if new != up[v]:
                    up[v] = new
                    changed = True
        for a in self.vertices:
            for b in up[a]:
                if a != b and a in up[b]:
                    raise ValueError(f"order is not antisymmetric: {a} and {b} lie on a cycle")
        self._up = {v: frozenset(s) for v, s in up.items()}
        self._down = {v: frozenset(w for w in self.vertices if v in self._up[w]) for v in self.vertices}

    def le(self, a: str, b: str) -> bool:
        return b in self._up[a]

    def lt(self, a: str, b: str) -> bool:
        return a != b and b in self._up[a]

    def above(self, v: str) -> list[str]:
        """Strict up-set, sorted."""
        return sorted(self._up[v] - {v})

    def below(self, v: str) -> list[str]:
        """Strict down-set, sorted."""
        return sorted(self._down[v] - {v})

    def comparable_pairs(self) -> list[tuple[str, str]]:
        """All (mu, lam) with lam < mu, sorted."""
        return sorted((mu, lam) for lam in self.vertices for mu in self.above(lam))

    def covers(self, v: str) -> list[str]:
        """Lower covers of ``v`` (its in-neighbours in the Hasse diagram)."""
        low = self.below(v)
        return [a for a in low if not any(self.lt(a, b) for b in low)]

    def hasse_edges(self) -> list[tuple[str, str]]:
        """(mu, lam) with lam covered by mu."""
        return sorted((mu, lam) for mu in self.vertices for lam in self.covers(mu))

    def upper_bounds(self, a: str, b: str) -> list[str]:
        return sorted(self._up[a] & self._up[b])

    def is_chain(self) -> bool:
        return all(self.le(a, b) or self.le(b, a) for a, b in combinations(self.vertices, 2))

    def is_directed(self) -> bool:
        return all(self.upper_bounds(a, b) for a, b in combinations(self.vertices, 2))

    def topological_order(self) -> list[str]:
        """Linear extension: repeatedly take the least-named minimal vertex."""
        done: set[str] = set()
        order = []
        while len(order) < len(self.vertices):
            v = min(w for w in self.vertices if w not in done and all(x in done for x in self.below(w)))
            done.add(v)
            order.append(v)
        return order

    def __eq__(self, other):
        return isinstance(other, FinitePoset) and self.vertices == other.vertices and self._up == other._up

    def __repr__(self):
        return f"FinitePoset({list(self.vertices)}, {self.hasse_edges()})"


@dataclass(eq=True)
class BratteliDiagram:
    poset: FinitePoset
    dims: dict[str, tuple[int, ...]]
    mults: dict[tuple[str, str], MultiplicityMatrix] = field(default_factory=dict)

    def mult(self, mu: str, lam: str) -> MultiplicityMatrix:
        if mu == lam:
            return identity_matrix(len(self.dims[lam]))
        return self.mults[(mu, lam)]

    def algebra(self, v: str) -> MultiMatrixAlgebra:
        return MultiMatrixAlgebra(self.dims[v])

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.poset.vertices


@dataclass
class InductiveSystem:
    poset: FinitePoset
    algebras: dict[str, MultiMatrixAlgebra]
    maps: dict[tuple[str, str], Wiring]

    def map(self, mu: str, lam: str) -> Wiring:
        if mu == lam:
            from .homs import identity_wiring

            return identity_wiring(self.algebras[lam])
        return self.maps[(mu, lam)]

    def diagram(self) -> BratteliDiagram:
        return BratteliDiagram(
            self.poset,
            {v: a.sizes for v, a in self.algebras.items()},
            {pair: w.multiplicity for pair, w in self.maps.items()},
        )

    def functoriality_violations(self) -> list[tuple[str, str, str]]:
        """Chains lam < mu < nu where the maps do not compose exactly."""
        bad = []
        P = self.poset
        for lam in P.vertices:
            for mu in P.above(lam):
                for nu in P.above(mu):
                    if compose_homs(self.maps[(nu, mu)], self.maps[(mu, lam)]) != self.maps[(nu, lam)]:
                        bad.append((nu, mu, lam))
        return bad


# ---------------------------------------------------------------------------
# file format


class DiagramParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")


def _ints(text: str, line: int, col: int) -> list[int]:
    out = []
    for m in re.finditer(r"\S+", text):
        tok = m.group()
        if not re.fullmatch(r"\d+", tok):
            raise DiagramParseError(f"expected a nonnegative integer, got {tok!r}", line, col + m.start())
        out.append(int(tok))
    return out


def parse_diagram(text: str) -> BratteliDiagram:
    dims: dict[str, tuple[int, ...]] = {}
    explicit: dict[tuple[str, str], MultiplicityMatrix] = {}
    where: dict[tuple[str, str], tuple[int, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        head, _, rest = body.partition(" ")
        col0 = indent + 1
        if ":" not in body:
            raise DiagramParseError("missing ':'", lineno, col0 + len(body))
        lhs, rhs = body.split(":", 1)
        rhs_col = col0 + len(lhs) + 1
        if head == "vertex":
            name = lhs[len("vertex"):].strip()
            if not _NAME.match(name):
                raise DiagramParseError(f"bad vertex name {name!r}", lineno, col0 + 7)
            if name in dims:
                raise DiagramParseError(f"vertex {name} declared twice", lineno, col0 + 7)
            sizes = _ints(rhs, lineno, rhs_col)
            if any(n < 1 for n in sizes):
                raise DiagramParseError("block sizes must be positive", lineno, rhs_col)
            dims[name] = tuple(sizes)
        elif head == "edge":
            m = re.fullmatch(r"edge\s+(\S+)\s*->\s*(\S+)\s*", lhs)
            if not m:
                raise DiagramParseError("expected 'edge <src> -> <dst> : <matrix>'", lineno, col0)
            src, dst = m.group(1), m.group(2)
            for name, pos in ((src, m.start(1)), (dst, m.start(2))):
                if name not in dims:
                    raise DiagramParseError(f"unknown vertex {name!r}", lineno, col0 + pos)
            if (dst, src) in explicit:
                raise DiagramParseError(f"edge {src} -> {dst} given twice", lineno, col0)
            if src == dst:
                raise DiagramParseError("self-loop edge", lineno, col0)
            rows_text = rhs.split(";")
            rows = []
            offset = rhs_col
            for chunk in rows_text:
                rows.append(_ints(chunk, lineno, offset))
                offset += len(chunk) + 1
            if dims[dst] == () and rows == [[]]:
                rows = []
            k_src, k_dst = len(dims[src]), len(dims[dst])
            if len(rows) != k_dst or any(len(r) != k_src for r in rows):
                raise DiagramParseError(
                    f"matrix for {src} -> {dst} must be {k_dst}x{k_src}", lineno, rhs_col
                )
            explicit[(dst, src)] = as_matrix(rows)
            where[(dst, src)] = (lineno, col0)
        else:
            raise DiagramParseError(f"unknown directive {head!r}", lineno, col0)
    try:
        poset = FinitePoset(dims, [(lam, mu) for (mu, lam) in explicit])
    except ValueError as exc:
        line, col = max(where.values()) if where else (1, 1)
        raise DiagramParseError(str(exc), line, col) from None
    mults = dict(explicit)
    # derive missing composite matrices in increasing order of the upper end
    for mu in poset.topological_order():
        for lam in poset.below(mu):
            if (mu, lam) in mults:
                continue
            candidates = set()
            for mid in poset.covers(mu):
                if poset.lt(lam, mid) or lam == mid:
                    upper = mults.get((mu, mid))
                    lower = identity_matrix(len(dims[lam])) if lam == mid else mults.get((mid, lam))
                    if upper is None or lower is None:
                        continue
                    candidates.add(matmul(upper, lower, inner=len(dims[mid])))
            if len(candidates) != 1:
                line, col = max(where.values()) if where else (1, 1)
                reason = "no path" if not candidates else "paths disagree"
                raise DiagramParseError(f"cannot derive matrix for {lam} -> {mu}: {reason}", line, col)
            mults[(mu, lam)] = candidates.pop()
    return BratteliDiagram(poset, dims, dict(sorted(mults.items())))


def _fmt_matrix(N: MultiplicityMatrix) -> str:
    return " ; ".join(" ".join(str(v) for v in row) for row in N)


def format_diagram(d: BratteliDiagram, edges: str = "all") -> str:
    """Render in the diagram file format; ``edges`` is ``"all"`` or ``"hasse"``."""
    lines = []
    for v in d.vertices:
        lines.append(f"vertex {v} : {' '.join(str(n) for n in d.dims[v])}".rstrip())
    pairs = d.poset.comparable_pairs() if edges == "all" else d.poset.hasse_edges()
    for mu, lam in sorted(pairs, key=lambda p: (p[1], p[0])):
        lines.append(f"edge {lam} -> {mu} : {_fmt_matrix(d.mults[(mu, lam)])}".rstrip())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    kind: str  # "missing", "shape", "dimension", "composition"
    witness: tuple[str, ...]
    detail: str

    def __str__(self):
        return f"{self.kind} at ({','.join(self.witness)}): {self.detail}"


@dataclass
class ValidationReport:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def of_kind(self, kind: str) -> list[Violation]:
        return [v for v in self.violations if v.kind == kind]


def _mat_str(N) -> str:
    return "[" + "; ".join(" ".join(str(v) for v in row) for row in N) + "]"


def validate_diagram(d: BratteliDiagram) -> ValidationReport:
    out: list[Violation] = []
    P = d.poset
    good_shape = set()
    for mu, lam in P.comparable_pairs():
        N = d.mults.get((mu, lam))
        if N is None:
            out.append(Violation("missing", (mu, lam), "no multiplicity matrix"))
            continue
        k_mu, k_lam = len(d.dims[mu]), len(d.dims[lam])
        if len(N) != k_mu or any(len(r) != k_lam for r in N) or any(v < 0 for r in N for v in r):
            out.append(Violation("shape", (mu, lam), f"matrix {_mat_str(N)} is not a {k_mu}x{k_lam} nonnegative matrix"))
            continue
        good_shape.add((mu, lam))
        image = matvec(N, d.dims[lam])
        if any(a > b for a, b in zip(image, d.dims[mu])):
            out.append(
                Violation("dimension", (mu, lam), f"N*n = {list(image)} exceeds n = {list(d.dims[mu])}")
            )
    for lam in P.vertices:
        for mu in P.above(lam):
            for nu in P.above(mu):
                if {(nu, mu), (mu, lam), (nu, lam)} <= good_shape:
                    prod = matmul(d.mults[(nu, mu)], d.mults[(mu, lam)], inner=len(d.dims[mu]))
                    if prod != d.mults[(nu, lam)]:
                        out.append(
                            Violation(
                                "composition",
                                (nu, mu, lam),
                                f"N[{nu},{mu}]*N[{mu},{lam}] = {_mat_str(prod)} != N[{nu},{lam}] = {_mat_str(d.mults[(nu, lam)])}",
                            )
                        )
    return ValidationReport(out)


class InvalidDiagramError(ValueError):
    pass


def _require_valid(d: BratteliDiagram) -> None:
    report = validate_diagram(d)
    if not report.ok:
        raise InvalidDiagramError(f"invalid diagram: {report.violations[0]}")


# ---------------------------------------------------------------------------
# realization of chains


def realize_chain(d: BratteliDiagram) -> InductiveSystem:
    """Standard wirings along consecutive stages, composites by composition."""
    if not d.poset.is_chain():
        raise ValueError("diagram is not over a chain")
    _require_valid(d)
    order = d.poset.topological_order()
    algs = {v: d.algebra(v) for v in order}
    maps: dict[tuple[str, str], Wiring] = {}
    for a, b in zip(order, order[1:]):
        maps[(b, a)] = standard_wiring(algs[a], algs[b], d.mults[(b, a)])
    for i, lam in enumerate(order):
        for j in range(i + 2, len(order)):
            mu, prev = order[j], order[j - 1]
            maps[(mu, lam)] = compose_homs(maps[(mu, prev)], maps[(prev, lam)])
    return InductiveSystem(d.poset, algs, maps)


# ---------------------------------------------------------------------------
# primeness


def is_prime_diagram(d: BratteliDiagram, truncated: bool = False) -> bool:
    """Any two (vertex, block) pairs are eventually co-supported in a common block.

    With ``truncated=True`` only pairs whose vertices have a common upper
    bound strictly above both are required to meet.  A finite poset with a
    top vertex of several blocks never passes the plain test, so this is the
    reading that survives cutting an infinite diagram down to finitely many
    stages.
    """
    _require_valid(d)
    return prime_witness_failure(d, truncated) is None


def _interior(P: FinitePoset, l1: str, l2: str) -> bool:
    return any(P.lt(l1, mu) and P.lt(l2, mu) for mu in P.upper_bounds(l1, l2))


def prime_witness_failure(
    d: BratteliDiagram, truncated: bool = False
) -> Optional[tuple[tuple[str, int], tuple[str, int]]]:
    """First pair of (vertex, block) that is never co-supported, or ``None``."""
    P = d.poset
    nodes = [(v, i) for v in P.vertices for i in range(len(d.dims[v]))]
    for a, (l1, i) in enumerate(nodes):
        for l2, j in nodes[a:]:
            if truncated and not _interior(P, l1, l2):
                continue
            found = False
            for mu in P.upper_bounds(l1, l2):
                N1, N2 = d.mult(mu, l1), d.mult(mu, l2)
                if any(N1[k][i] > 0 and N2[k][j] > 0 for k in range(len(d.dims[mu]))):
                    found = True
                    break
            if not found:
                return (l1, i), (l2, j)
    return None


# ---------------------------------------------------------------------------
# isomorphism


@dataclass(frozen=True)
class DiagramIsomorphism:
    vertex_map: dict[str, str]
    block_maps: dict[str, tuple[int, ...]]  # block i of v -> block block_maps[v][i] of vertex_map[v]

    def describe(self) -> list[str]:
        out = []
        for v in sorted(self.vertex_map):
            perm = " ".join(str(b + 1) for b in self.block_maps[v])
            out.append(f"{v} -> {self.vertex_map[v]} blocks [{perm}]")
        return out


def diagrams_isomorphic(d1: BratteliDiagram, d2: BratteliDiagram) -> Optional[DiagramIsomorphism]:
    """Deterministic backtracking search for a diagram isomorphism."""
    P1, P2 = d1.poset, d2.poset
    if len(P1.vertices) != len(P2.vertices):
        return None

    def signature(d, v):
        P = d.poset
        return (tuple(sorted(d.dims[v])), len(P.below(v)), len(P.above(v)), len(P.covers(v)))

    sig2 = {v: signature(d2, v) for v in P2.vertices}
    if sorted(signature(d1, v) for v in P1.vertices) != sorted(sig2.values()):
        return None
    order = sorted(P1.vertices, key=lambda v: (len(d1.dims[v]), len(P1.below(v)), v))
    vmap: dict[str, str] = {}
    bmap: dict[str, list[int]] = {}
    used: set[str] = set()

    def block_ok(v: str, i: int, b: int) -> bool:
        w = vmap[v]
        for u, ww in vmap.items():
            if u == v or u not in bmap or len(bmap[u]) < len(d1.dims[u]):
                continue
            for k, kk in enumerate(bmap[u]):
                if P1.lt(u, v):
                    if d1.mults[(v, u)][i][k] != d2.mults[(w, ww)][b][kk]:
                        return False
                elif P1.lt(v, u):
                    if d1.mults[(u, v)][k][i] != d2.mults[(ww, w)][kk][b]:
                        return False
        return True

    def assign_blocks(v: str, i: int):
        if i == len(d1.dims[v]):
            yield
            return
        w = vmap[v]
        for b in range(len(d2.dims[w])):
            if b in bmap[v] or d2.dims[w][b] != d1.dims[v][i] or not block_ok(v, i, b):
                continue
            bmap[v].append(b)
            yield from assign_blocks(v, i + 1)
            bmap[v].pop()

    def assign(idx: int) -> bool:
        if idx == len(order):
            return True
        v = order[idx]
        sv = signature(d1, v)
        for w in P2.vertices:
            if w in used or sig2[w] != sv:
                continue
            if any(P1.le(u, v) != P2.le(vmap[u], w) or P1.le(v, u) != P2.le(w, vmap[u]) for u in vmap):
                continue
            vmap[v] = w
            used.add(w)
            bmap[v] = []
            for _ in assign_blocks(v, 0):
                if assign(idx + 1):
                    return True
            del bmap[v]
            del vmap[v]
            used.discard(w)
        return False

    if not assign(0):
        return None
    return DiagramIsomorphism(dict(vmap), {v: tuple(b) for v, b in bmap.items()})


def apply_isomorphism(iso: DiagramIsomorphism, d1: BratteliDiagram, d2: BratteliDiagram) -> bool:
    """Independent re-check that ``iso`` carries ``d1`` onto ``d2``."""
    for v, w in iso.vertex_map.items():
        perm = iso.block_maps[v]
        if sorted(perm) != list(range(len(d2.dims[w]))):
            return False
        if any(d1.dims[v][i] != d2.dims[w][perm[i]] for i in range(len(perm))):
            return False
    for (mu, lam), N in d1.mults.items():
        M = d2.mult(iso.vertex_map[mu], iso.vertex_map[lam])
        pm, pl = iso.block_maps[mu], iso.block_maps[lam]
        for k, row in enumerate(N):
            for i, v in enumerate(row):
                if M[pm[k]][pl[i]] != v:
                    return False
    return {(iso.vertex_map[m], iso.vertex_map[l]) for m, l in d1.poset.comparable_pairs()} == set(
        d2.poset.comparable_pairs()
    )


def invert_isomorphism(iso: DiagramIsomorphism) -> DiagramIsomorphism:
    vmap = {w: v for v, w in iso.vertex_map.items()}
    bmap = {}
    for v, perm in iso.block_maps.items():
        inv = [0] * len(perm)
        for i, b in enumerate(perm):
            inv[b] = i
        bmap[iso.vertex_map[v]] = tuple(inv)
    return DiagramIsomorphism(vmap, bmap)


# ---------------------------------------------------------------------------
# built-in diagrams

EXAMPLE_NONREALIZABLE = """\
# a > b, c > d, e
vertex a : 24
vertex b : 4 4
vertex c : 6 6
vertex d : 1 3
vertex e : 2 2
edge b -> a : 3 3
edge d -> b : 1 1 ; 1 1
edge e -> b : 1 1 ; 1 1
edge d -> a : 6 6
edge c -> a : 2 2
edge d -> c : 3 1 ; 0 2
edge e -> c : 1 2 ; 2 1
edge e -> a : 6 6
"""


def subset_name(points: Iterable[str]) -> str:
    pts = list(points)
    return "_".join(pts) if pts else "empty"


def point_names(n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, n + 1))


def subsets(points: tuple[str, ...], include_empty: bool = True) -> list[tuple[str, ...]]:
    """Subsets in (size, lexicographic by ground order) order."""
    out = []
    for k in range(0 if include_empty else 1, len(points) + 1):
        out.extend(combinations(points, k))
    return out


def finite_subsets_diagram(n: int, include_empty: bool = True) -> BratteliDiagram:
    pts = point_names(n)
    subs = subsets(pts, include_empty)
    names = {s: subset_name(s) for s in subs}
    poset = FinitePoset(names.values(), [(names[a], names[b]) for a in subs for b in subs if set(a) < set(b)])
    dims = {names[s]: ((len(s),) if s else ()) for s in subs}
    mults = {}
    for a in subs:
        for b in subs:
            if set(a) < set(b):
                mults[(names[b], names[a])] = ((1,),) if a else ((),)
    return BratteliDiagram(poset, dims, dict(sorted(mults.items())))


def finite_subset_systems(n: int) -> tuple[InductiveSystem, InductiveSystem]:
    """Two systems over the nonempty subsets of an n-point set with one diagram.

    The first sends e_{x,y} to e_{x,y} (indices are the points themselves), the
    second sends e_{k,l} to e_{k,l} (indices are 1..|lambda|).
    """
    from .homs import Wiring

    pts = point_names(n)
    subs = subsets(pts, include_empty=False)
    names = {s: subset_name(s) for s in subs}
    poset = FinitePoset(names.values(), [(names[a], names[b]) for a in subs for b in subs if set(a) < set(b)])
    algs = {names[s]: MultiMatrixAlgebra((len(s),)) for s in subs}
    by_point, by_index = {}, {}
    for a in subs:
        for b in subs:
            if set(a) < set(b):
                src, dst = algs[names[a]], algs[names[b]]
                layout = [None] * len(b)
                for r, x in enumerate(a):
                    layout[b.index(x)] = (0, 0, r)
                by_point[(names[b], names[a])] = Wiring(src, dst, (tuple(layout),))
                by_index[(names[b], names[a])] = standard_wiring(src, dst, ((1,),))
    return InductiveSystem(poset, dict(algs), by_point), InductiveSystem(poset, dict(algs), by_index)


def two_disjoint_chains() -> BratteliDiagram:
    """Control diagram: blocks are never co-supported, so it is not prime."""
    text = """\
vertex s1 : 1 1
vertex s2 : 1 1
vertex t1 : 1 1
vertex t2 : 1 1
vertex u : 1 1
edge s1 -> s2 : 1 0 ; 0 1
edge t1 -> t2 : 1 0 ; 0 1
edge s2 -> u : 1 0 ; 0 1
edge t2 -> u : 1 0 ; 0 1
"""
    return parse_diagram(text)


def builtin_diagram(name: str, size: int = 2, **options) -> BratteliDiagram:
    if name == "example-nonrealizable":
        return parse_diagram(EXAMPLE_NONREALIZABLE)
    if name == "finite-subsets":
        return finite_subsets_diagram(size, options.get("include_empty", True))
    if name == "twin":
        from .twin import GroundSet, TwinAmbient, twin_bratteli_data

        return twin_bratteli_data(TwinAmbient(GroundSet(point_names(size))), options.get("variant", "A"))
    if name == "prime":
        from .prime import PrimeAmbient, stage_diagram

        return stage_diagram(PrimeAmbient(point_names(size)))
    if name == "disjoint-chains":
        return two_disjoint_chains()
    raise ValueError(f"unknown builtin diagram {name!r}")


BUILTIN_NAMES = ("example-nonrealizable", "finite-subsets", "twin", "prime", "disjoint-chains")
