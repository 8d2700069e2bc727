"""Exact arithmetic in finite direct sums of full matrix algebras.

Entries live in the Gaussian rationals.  Purely real entries are kept as
``int``/``Fraction``; a :class:`Scalar` appears only when an imaginary part
is present.  Floating point values are rejected.

Block, row and column indices are 0-based in the API and 1-based in any
human-facing report.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt
from numbers import Rational
from typing import Iterable, NamedTuple, Sequence


class Scalar:
    """A Gaussian rational ``re + im*i`` with exact rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _rational(re)
        self.im = _rational(im)

    def conjugate(self):
        return _make(self.re, -self.im)

    def __add__(self, other):
        o = _parts(other)
        if o is None:
            return NotImplemented
        return _make(self.re + o[0], self.im + o[1])

    __radd__ = __add__

    def __sub__(self, other):
        o = _parts(other)
        if o is None:
            return NotImplemented
        return _make(self.re - o[0], self.im - o[1])

    def __rsub__(self, other):
        o = _parts(other)
        if o is None:
            return NotImplemented
        return _make(o[0] - self.re, o[1] - self.im)

    def __mul__(self, other):
        o = _parts(other)
        if o is None:
            return NotImplemented
        a, b = self.re, self.im
        c, d = o
        return _make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __neg__(self):
        return _make(-self.re, -self.im)

    def __eq__(self, other):
        o = _parts(other)
        if o is None:
            return NotImplemented
        return self.re == o[0] and self.im == o[1]

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"Scalar({self.re}, {self.im})"

    def __str__(self):
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"



def _rational(x):
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, Rational):
        return x
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


def _parts(x):
    if isinstance(x, Scalar):
        return x.re, x.im
    if isinstance(x, Rational):
        return x, 0
    return None


def _make(re, im):
    if im == 0:
        return _rational(re)
    s = Scalar.__new__(Scalar)
    s.re = _rational(re)
    s.im = _rational(im)
    return s


def scalar(re, im=0):
    """Build an exact scalar; returns a plain rational when ``im == 0``."""
    return _make(_rational(re), _rational(im))


def div(a, b):
    """Exact quotient; never produces a float."""
    pa, pb = _parts(a), _parts(b)
    if pa is None or pb is None:
        raise TypeError("exact scalars expected")
    c, d = pb
    if c == 0 and d == 0:
        raise ZeroDivisionError("division by zero scalar")
    if d == 0:
        return _make(Fraction(pa[0]) / c, Fraction(pa[1]) / c)
    norm = Fraction(c * c + d * d)
    a_, b_ = pa
    return _make((a_ * c + b_ * d) / norm, (b_ * c - a_ * d) / norm)


def conj(x):
    return x.conjugate()


I = Scalar(0, 1)


# ---------------------------------------------------------------------------
# algebras and elements


@dataclass(frozen=True)
class MultiMatrixAlgebra:
    """The algebra M_{n_1} + ... + M_{n_k}; ``sizes == ()`` is the zero algebra."""

    sizes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(self.sizes))
        for n in self.sizes:
            if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                raise ValueError(f"block sizes must be positive integers, got {self.sizes}")

    @property
    def k(self) -> int:
        return len(self.sizes)

    @property
    def dimension(self) -> int:
        return sum(n * n for n in self.sizes)

    def zero(self) -> Element:
        return Element(self, {})

    def unit(self) -> Element:
        return Element(self, {(b, r, r): 1 for b, n in enumerate(self.sizes) for r in range(n)})

    def block_unit(self, block: int) -> Element:
        return Element(self, {(block, r, r): 1 for r in range(self.sizes[block])})

    def units(self) -> list[Element]:
        """All matrix units, block by block, row-major."""
        return [
            Element(self, {(b, r, c): 1})
            for b, n in enumerate(self.sizes)
            for r in range(n)
            for c in range(n)
        ]

    def __str__(self):
        if not self.sizes:
            return "0"
        return " + ".join("C" if n == 1 else f"M{n}" for n in self.sizes)


def make_algebra(sizes: Iterable[int]) -> MultiMatrixAlgebra:
    return MultiMatrixAlgebra(tuple(sizes))


class MatrixUnitIndex(NamedTuple):
    block: int
    row: int
    col: int


class Element:
    """An element of a multi-matrix algebra, stored sparsely.

    ``entries`` maps ``(block, row, col)`` to a nonzero exact scalar.  Treat
    instances as immutable.
    """

    __slots__ = ("algebra", "entries", "_hash")

    def __init__(self, algebra: MultiMatrixAlgebra, entries: dict):
        self.algebra = algebra
        self.entries = {k: v for k, v in entries.items() if v}
        self._hash = None

    @classmethod
    def from_blocks(cls, algebra: MultiMatrixAlgebra, blocks: Sequence[Sequence[Sequence]]) -> Element:
        if len(blocks) != algebra.k:
            raise ValueError(f"expected {algebra.k} blocks, got {len(blocks)}")
        entries = {}
        for b, (n, mat) in enumerate(zip(algebra.sizes, blocks)):
            if len(mat) != n or any(len(row) != n for row in mat):
                raise ValueError(f"block {b + 1} must be {n}x{n}")
            for r, row in enumerate(mat):
                for c, v in enumerate(row):
                    v = v if isinstance(v, Scalar) else _rational(v)
                    if v:
                        entries[(b, r, c)] = v
        return cls(algebra, entries)

    def block(self, b: int) -> list[list]:
        n = self.algebra.sizes[b]
        mat = [[0] * n for _ in range(n)]
        for (bb, r, c), v in self.entries.items():
            if bb == b:
                mat[r][c] = v
        return mat

    def blocks(self) -> list[list[list]]:
        return [self.block(b) for b in range(self.algebra.k)]

    def support_blocks(self) -> frozenset[int]:
        return frozenset(b for b, _, _ in self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def __bool__(self):
        return bool(self.entries)

    def _check(self, other: Element):
        if not isinstance(other, Element):
            raise TypeError(f"expected Element, got {type(other).__name__}")
        if other.algebra != self.algebra:
            raise ValueError(f"algebra mismatch: {self.algebra.sizes} vs {other.algebra.sizes}")

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) + v
        return Element(self.algebra, out)

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        out = dict(self.entries)
        for k, v in other.entries.items():
            out[k] = out.get(k, 0) - v
        return Element(self.algebra, out)

    def __neg__(self):
        return Element(self.algebra, {k: -v for k, v in self.entries.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            return multiply(self, other)
        if isinstance(other, (Scalar, Rational)):
            return scale(other, self)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Scalar, Rational)):
            return scale(other, self)
        return NotImplemented

    def adjoint(self) -> Element:
        return Element(self.algebra, {(b, c, r): v.conjugate() for (b, r, c), v in self.entries.items()})

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.algebra == other.algebra and self.entries == other.entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.algebra, frozenset(self.entries.items())))
        return self._hash

    def __repr__(self):
        items = ", ".join(
            f"{v}*e[{b + 1}]({r + 1},{c + 1})" for (b, r, c), v in sorted(self.entries.items())
        )
        return f"Element({items or '0'})"


def matrix_unit(alg: MultiMatrixAlgebra, block: int, row: int, col: int) -> Element:
    if not 0 <= block < alg.k:
        raise IndexError(f"block {block} out of range for {alg.sizes}")
    n = alg.sizes[block]
    if not (0 <= row < n and 0 <= col < n):
        raise IndexError(f"unit ({row}, {col}) out of range for block of size {n}")
    return Element(alg, {(block, row, col): 1})


def add(a: Element, b: Element) -> Element:
    return a + b


def scale(c, a: Element) -> Element:
    if not c:
        return Element(a.algebra, {})
    return Element(a.algebra, {k: c * v for k, v in a.entries.items()})


def adjoint(a: Element) -> Element:
    return a.adjoint()


def multiply(a: Element, b: Element) -> Element:
    a._check(b)
    rows: dict[tuple[int, int], list] = {}
    for (blk, r, c), v in b.entries.items():
        rows.setdefault((blk, r), []).append((c, v))
    out: dict = {}
    for (blk, r, c), v in a.entries.items():
        for c2, w in rows.get((blk, c), ()):
            key = (blk, r, c2)
            out[key] = out.get(key, 0) + v * w
    return Element(a.algebra, out)


def commutator(a: Element, b: Element) -> Element:
    return multiply(a, b) - multiply(b, a)


def is_projection(a: Element) -> bool:
    return multiply(a, a) == a and a.adjoint() == a


def block_ranks(a: Element) -> tuple[int, ...]:
    """Rank of each block of ``a``."""
    ranks = []
    for b, n in enumerate(a.algebra.sizes):
        span = Span()
        for row in a.block(b):
            span.insert({c: v for c, v in enumerate(row) if v})
        ranks.append(span.rank)
    return tuple(ranks)


# ---------------------------------------------------------------------------
# exact linear algebra on sparse vectors


class Span:
    """Incrementally maintained reduced row-echelon basis of sparse vectors.

    Vectors are dicts with sortable keys.  With ``track=True`` every basis row
    remembers its expression in the inserted vectors (indexed by insertion
    order), which gives coordinates and linear dependencies.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self.rows: dict = {}
        self.combos: dict = {}
        self.count = 0

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict) -> tuple[dict, dict]:
        res = {k: v for k, v in vec.items() if v}
        combo: dict = {}
        for p in [k for k in res if k in self.rows]:
            coef = res.get(p)
            if not coef:
                continue
            for k, v in self.rows[p].items():
                nv = res.get(k, 0) - coef * v
                if nv:
                    res[k] = nv
                else:
                    res.pop(k, None)
            if self.track:
                for g, v in self.combos[p].items():
                    nv = combo.get(g, 0) - coef * v
                    if nv:
                        combo[g] = nv
                    else:
                        combo.pop(g, None)
        return res, combo

    def insert(self, vec: dict):
        """Insert ``vec``.

        Returns ``None`` when ``vec`` was independent and has been added.
        Otherwise returns the dependency ``{index: coef}`` with
        ``sum(coef * inserted[index]) == 0`` (tracked spans only; an empty dict
        otherwise).
        """
        idx = self.count
        self.count += 1
        res, combo = self.reduce(vec)
        if self.track:
            combo[idx] = 1
        if not res:
            return combo
        p = min(res)
        pv = res[p]
        if pv != 1:
            res = {k: div(v, pv) for k, v in res.items()}
            combo = {g: div(v, pv) for g, v in combo.items()}
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                for k, v in res.items():
                    nv = row.get(k, 0) - c * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
                if self.track:
                    qc = self.combos[q]
                    for g, v in combo.items():
                        nv = qc.get(g, 0) - c * v
                        if nv:
                            qc[g] = nv
                        else:
                            qc.pop(g, None)
        self.rows[p] = res
        if self.track:
            self.combos[p] = combo
        return None

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]

    def coordinates(self, vec: dict) -> dict | None:
        """Express ``vec`` in the inserted vectors, or ``None`` if outside the span."""
        if not self.track:
            raise ValueError("coordinates need a tracked span")
        res, combo = self.reduce(vec)
        if res:
            return None
        return {g: -v for g, v in combo.items()}


def rank(elements: Iterable[Element]) -> int:
    span = Span()
    for e in elements:
        span.insert(e.entries)
    return span.rank


def independent_subset(elements: Sequence[Element]) -> list[Element]:
    span = Span()
    return [e for e in elements if span.insert(e.entries) is None]


def solve(columns: Sequence[dict], target: dict) -> list | None:
    """Return coefficients ``x`` with ``sum(x[i] * columns[i]) == target``, or ``None``."""
    span = Span(track=True)
    for col in columns:
        span.insert(col)
    coords = span.coordinates(target)
    if coords is None:
        return None
    return [coords.get(i, 0) for i in range(len(columns))]


# ---------------------------------------------------------------------------
# subalgebras given by spanning sets


class NotClosedError(ValueError):
    """A spanning set whose span is not a *-subalgebra."""


class NonSplitCenterError(ValueError):
    """The center does not split into idempotents over the Gaussian rationals."""


def check_closed(span: Sequence[Element]) -> None:
    """Raise :class:`NotClosedError` unless ``span`` spans a *-subalgebra."""
    basis = independent_subset(span)
    lin = Span()
    for b in basis:
        lin.insert(b.entries)
    for a in basis:
        if not lin.contains(a.adjoint().entries):
            raise NotClosedError(f"adjoint of {a!r} leaves the span")
        for b in basis:
            if not lin.contains(multiply(a, b).entries):
                raise NotClosedError(f"product {a!r} * {b!r} leaves the span")


def center(span: Sequence[Element], generators: Sequence[Element] | None = None) -> list[Element]:
    """Basis of the center of the algebra spanned by ``span``.

    ``generators`` may name a smaller set generating the same algebra; the
    center is then the part of the span commuting with them.
    """
    basis = independent_subset(span)
    gens = basis if generators is None else list(generators)
    null = Span(track=True)
    out = []
    for b in basis:
        vec = {}
        for j, g in enumerate(gens):
            for key, v in commutator(b, g).entries.items():
                vec[(j,) + key] = v
        dep = null.insert(vec)
        if dep is not None:
            z = Element(b.algebra, {})
            for idx, coef in dep.items():
                z = z + scale(coef, basis[idx])
            out.append(z)
    return out


def _algebra_unit(center_basis: Sequence[Element]) -> Element:
    alg = center_basis[0].algebra
    cols = []
    for u in center_basis:
        col = {}
        for i, c in enumerate(center_basis):
            for key, v in multiply(u, c).entries.items():
                col[(i,) + key] = v
        cols.append(col)
    target = {(i,) + key: v for i, c in enumerate(center_basis) for key, v in c.entries.items()}
    coef = solve(cols, target)
    if coef is None:
        raise NotClosedError("spanned algebra has no unit")
    unit = Element(alg, {})
    for c, z in zip(coef, center_basis):
        unit = unit + scale(c, z)
    return unit


def _rational_roots(coeffs: list) -> list:
    """Distinct rational roots of a monic polynomial (ascending coefficients),
    raising :class:`NonSplitCenterError` unless it splits into distinct
    rational linear factors."""
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly(
        [sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else sympy.Integer(c) for c in reversed(coeffs)],
        x,
        domain=sympy.QQ,
    )
    roots = poly.ground_roots()
    if sum(roots.values()) != poly.degree() or any(m != 1 for m in roots.values()):
        raise NonSplitCenterError(f"minimal polynomial {poly.as_expr()} does not split over Q")
    return sorted(Fraction(int(r.p), int(r.q)) for r in roots)


def _spectral_split(e: Element, h: Element) -> list[Element]:
    """Split the idempotent ``e`` along the self-adjoint central element ``e*h``."""
    x = multiply(e, h)
    powers = [e]
    span = Span(track=True)
    span.insert(e.entries)
    while True:
        nxt = multiply(powers[-1], x)
        dep = span.insert(nxt.entries)
        if dep is not None:
            break
        powers.append(nxt)
    # dep: sum_k c_k x^k (k = index) with the top coefficient 1
    coeffs = [dep.get(k, 0) for k in range(len(powers) + 1)]
    for c in coeffs:
        if isinstance(c, Scalar):
            raise NonSplitCenterError("non-real minimal polynomial of a self-adjoint element")
    roots = _rational_roots(coeffs)
    if len(roots) == 1:
        return [e]
    parts = []
    for r in roots:
        p = e
        for s in roots:
            if s != r:
                p = scale(div(1, r - s), multiply(p, x - scale(s, e)))
        parts.append(p)
    return parts


def _first_key(e: Element):
    return min(e.entries)


def minimal_central_idempotents(
    span: Sequence[Element],
    generators: Sequence[Element] | None = None,
    check: bool = True,
) -> list[Element]:
    """Minimal central idempotents of the *-algebra spanned by ``span``.

    Closure of the span is verified unless ``check`` is false.  Output is
    ordered by the first ambient coordinate each idempotent touches.
    """
    span = [s for s in span if s]
    if not span:
        return []
    if check:
        check_closed(span)
    zs = center(span, generators)
    idems = [_algebra_unit(zs)]
    for z in zs:
        real = scale(Fraction(1, 2), z + z.adjoint())
        imag = scale(div(1, Scalar(0, 2)), z - z.adjoint())
        for h in (real, imag):
            if not h:
                continue
            refined = []
            for e in idems:
                refined.extend(_spectral_split(e, h))
            idems = refined
    return sorted(idems, key=_first_key)


def summand_size(idempotent: Element, span: Sequence[Element]) -> int:
    """Matrix size n of the summand ``e*S`` (which has dimension n**2)."""
    d = rank(multiply(idempotent, s) for s in span)
    n = isqrt(d)
    if n * n != d:
        raise ValueError(f"summand dimension {d} is not a square")
    return n


def decompose(span: Sequence[Element], generators=None, check: bool = True) -> list[tuple[Element, int]]:
    """Pairs (minimal central idempotent, summand size) of the spanned algebra."""
    idems = minimal_central_idempotents(span, generators, check)
    return [(e, summand_size(e, span)) for e in idems]


def ideal_generated_by(alg: MultiMatrixAlgebra, gens: Iterable[Element]) -> frozenset[int]:
    """Blocks of the two-sided ideal generated by ``gens``.

    Every ideal of a multi-matrix algebra is a sum of whole blocks, and a full
    matrix block is simple, so the ideal is exactly the union of supports.
    """
    out: set[int] = set()
    for g in gens:
        if g.algebra != alg:
            raise ValueError("generator outside the algebra")
        out |= g.support_blocks()
    return frozenset(out)


def in_ideal(blocks: frozenset[int], a: Element) -> bool:
    return a.support_blocks() <= blocks


# ---------------------------------------------------------------------------
# concrete subalgebras with explicit matrix units


@dataclass(frozen=True, eq=False)
class MatrixUnitSystem:
    """A subalgebra of ``ambient`` presented by explicit matrix units.

    ``units[i][r][s]`` is the ambient element playing the role of e_{r,s} in
    the i-th summand; the abstract algebra is ``M_{n_1} + ... + M_{n_k}``.
    """

    ambient: MultiMatrixAlgebra
    units: tuple

    @cached_property
    def algebra(self) -> MultiMatrixAlgebra:
        return MultiMatrixAlgebra(tuple(len(u) for u in self.units))

    @cached_property
    def _refs(self):
        refs = []
        for u in self.units:
            key = min(u[0][0].entries)
            refs.append((key, u[0][0].entries[key]))
        return refs

    def summand_projections(self) -> list[Element]:
        out = []
        for u in self.units:
            p = self.ambient.zero()
            for r in range(len(u)):
                p = p + u[r][r]
            out.append(p)
        return out

    def unit(self) -> Element:
        p = self.ambient.zero()
        for q in self.summand_projections():
            p = p + q
        return p

    def span(self) -> list[Element]:
        return [e for u in self.units for row in u for e in row]

    def embed(self, a: Element) -> Element:
        if a.algebra != self.algebra:
            raise ValueError("element is not in the abstract algebra of this system")
        out = {}
        for (i, r, s), v in a.entries.items():
            for key, w in self.units[i][r][s].entries.items():
                out[key] = out.get(key, 0) + v * w
        return Element(self.ambient, out)

    def coordinates(self, x: Element) -> Element:
        """The abstract element mapping to ``x``; raises ``ValueError`` if ``x`` is outside."""
        if x.algebra != self.ambient:
            raise ValueError("element is not in the ambient algebra")
        entries = {}
        for i, u in enumerate(self.units):
            key, ref = self._refs[i]
            n = len(u)
            for r in range(n):
                left = multiply(u[0][r], x)
                if not left:
                    continue
                for s in range(n):
                    v = multiply(left, u[s][0]).entries.get(key, 0)
                    if v:
                        entries[(i, r, s)] = div(v, ref)
        a = Element(self.algebra, entries)
        if self.embed(a) != x:
            raise ValueError("element lies outside the subalgebra")
        return a

    def verify(self) -> list[str]:
        """Check a complete presentation of matrix-unit relations; returns problems."""
        problems = []
        projs = self.summand_projections()
        for i, u in enumerate(self.units):
            n = len(u)
            if not u[0][0]:
                problems.append(f"summand {i + 1}: e(1,1) is zero")
            for r in range(n):
                for s in range(n):
                    if u[r][s].adjoint() != u[s][r]:
                        problems.append(f"summand {i + 1}: e({r + 1},{s + 1})* != e({s + 1},{r + 1})")
                    if multiply(u[r][0], u[0][s]) != u[r][s]:
                        problems.append(f"summand {i + 1}: e({r + 1},1)e(1,{s + 1}) != e({r + 1},{s + 1})")
                    expect = u[0][0] if r == s else self.ambient.zero()
                    if multiply(u[0][r], u[s][0]) != expect:
                        problems.append(f"summand {i + 1}: e(1,{r + 1})e({s + 1},1) wrong")
                    if multiply(projs[i], u[r][s]) != u[r][s] or multiply(u[r][s], projs[i]) != u[r][s]:
                        problems.append(f"summand {i + 1}: e({r + 1},{s + 1}) not inside its summand")
        for i in range(len(projs)):
            for j in range(len(projs)):
                if i != j and multiply(projs[i], projs[j]):
                    problems.append(f"summands {i + 1} and {j + 1} not orthogonal")
        return problems
