"""Search for exactly-commuting wiring realizations of a Bratteli diagram.

Vertices are processed in ``FinitePoset.topological_order``.  At a vertex mu
the wirings of all Hasse in-edges are chosen together:

* the in-edge from the least-named lower cover is forced to the standard
  wiring (conjugating mu by a coordinate permutation reaches it, and this
  does not affect realizability);
* every other in-edge is filled position by position, target blocks in
  order, position by position, in-edges by name; candidate slots are tried in
  lexicographic order ``(source block, copy, coordinate)`` with padding last,
  and a new copy may only be opened after all lower-numbered ones;
* copies of one source block under the forced wiring (and its padding
  positions) are interchangeable, so their slot signatures must be
  non-decreasing.

A slot is accepted only if, for every vertex kappa below it, the composite
label it induces (kappa-coordinate plus copy partition) agrees with what the
other in-edges already force at that position.  Counting constraints for
vertices higher up (how many target positions carry each tuple of lower
labels) prune partial choices early.

The first complete assignment is returned, so the witness is the least one
in this enumeration order.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from .diagrams import BratteliDiagram, InductiveSystem, _require_valid
from .homs import Wiring, compose_homs, standard_wiring

WITNESS = "witness found"
NO_REALIZATION = "no wiring realization"
BUDGET = "budget exhausted"

_PAD_SIG = (1 << 30, 0)


class _Budget(Exception):
    pass


@dataclass
class SearchResult:
    verdict: str
    nodes: int
    system: Optional[InductiveSystem] = None

    @property
    def found(self) -> bool:
        return self.verdict == WITNESS

    def describe(self) -> str:
        if self.verdict == WITNESS:
            return "witness found (exactly commuting wiring system)"
        if self.verdict == NO_REALIZATION:
            return "no wiring realization (search space fully enumerated)"
        return "budget exhausted (no verdict)"


class _Realizer:
    def __init__(self, d: BratteliDiagram, budget: int, census: bool = True, symmetry: bool = True):
        self.d = d
        self.use_census = census
        self.use_symmetry = symmetry
        self.P = d.poset
        self.budget = budget
        self.nodes = 0
        self.order = self.P.topological_order()
        self.rank = {v: i for i, v in enumerate(self.order)}
        self.algs = {v: d.algebra(v) for v in self.P.vertices}
        # per processed vertex: composite wirings and position labels
        self.W: dict[tuple[str, str], Wiring] = {}
        self.edges: dict[tuple[str, str], Wiring] = {}
        self.labels: dict[str, dict[tuple[int, int], dict[str, tuple]]] = {}
        self.census = {v: [] for v in self.P.vertices}
        for nu in self.P.vertices:
            cov = self.P.covers(nu)
            for a_i, ma in enumerate(cov):
                for mb in cov[a_i + 1:]:
                    K = sorted(set(self.P.below(ma)) & set(self.P.below(mb)))
                    if not K:
                        continue
                    first, second = sorted((ma, mb), key=self.rank.get)
                    self.census[second].append((nu, first, K))

    # -- helpers -----------------------------------------------------------

    def positions(self, v: str) -> list[tuple[int, int]]:
        return [(j, q) for j, n in enumerate(self.d.dims[v]) for q in range(n)]

    def _pad_count(self, nu: str, mu: str, jn: int) -> int:
        N = self.d.mults[(nu, mu)]
        return self.d.dims[nu][jn] - sum(N[jn][j] * n for j, n in enumerate(self.d.dims[mu]))

    def _targets(self, nu: str, other: str, K: list[str]) -> list[dict]:
        N = self.d.mults[(nu, other)]
        out = []
        none = tuple(None for _ in K)
        for jn in range(len(self.d.dims[nu])):
            T: dict = {}
            for (b, p), lab in self.labels[other].items():
                w = N[jn][b]
                if w:
                    L = tuple(lab[k][0] for k in K)
                    T[L] = T.get(L, 0) + w
            pad = self._pad_count(nu, other, jn)
            if pad:
                T[none] = T.get(none, 0) + pad
            out.append(T)
        return out

    # -- driver --------------------------------------------------------------

    def run(self) -> SearchResult:
        try:
            found = self._vertex(0)
        except _Budget:
            return SearchResult(BUDGET, self.nodes)
        if not found:
            return SearchResult(NO_REALIZATION, self.nodes)
        system = InductiveSystem(self.P, dict(self.algs), dict(sorted(self.W.items())))
        return SearchResult(WITNESS, self.nodes, system)

    def _vertex(self, idx: int) -> bool:
        if idx == len(self.order):
            return True
        mu = self.order[idx]
        for _ in _VertexSearch(self, mu).solutions():
            if self._vertex(idx + 1):
                return True
        return False

    def install(self, mu: str, wirings: dict[str, Wiring]) -> None:
        covers = self.P.covers(mu)
        for lam, w in wirings.items():
            self.edges[(mu, lam)] = w
        for kappa in self.P.below(mu):
            for lam in covers:
                if lam == kappa:
                    self.W[(mu, kappa)] = wirings[lam]
                    break
                if self.P.lt(kappa, lam):
                    self.W[(mu, kappa)] = compose_homs(wirings[lam], self.W[(lam, kappa)])
                    break
        labels: dict[tuple[int, int], dict[str, tuple]] = {pos: {} for pos in self.positions(mu)}
        for kappa in self.P.below(mu):
            for j, block in enumerate(self.W[(mu, kappa)].layout):
                for q, slot in enumerate(block):
                    if slot is None:
                        labels[(j, q)][kappa] = (None, None)
                    else:
                        i, c, r = slot
                        labels[(j, q)][kappa] = ((i, r), (i, c))
        self.labels[mu] = labels

    def uninstall(self, mu: str) -> None:
        for kappa in self.P.below(mu):
            self.W.pop((mu, kappa), None)
        for lam in self.P.covers(mu):
            self.edges.pop((mu, lam), None)
        self.labels.pop(mu, None)


class _VertexSearch:
    def __init__(self, R: _Realizer, mu: str):
        self.R = R
        self.mu = mu
        d = R.d
        covers = R.P.covers(mu)
        self.covers = covers
        self.free = covers[1:]
        self.positions = R.positions(mu)
        self.alg = R.algs[mu]
        if covers:
            lam1 = covers[0]
            self.forced = standard_wiring(R.algs[lam1], self.alg, d.mults[(mu, lam1)])
        else:
            self.forced = None
        # for every path index: kappa values it covers, with a lookup per source coordinate
        self.path_kappas: list[list[str]] = [[lam] + R.P.below(lam) for lam in covers]
        self.ref: dict[str, int] = {}
        for i, ks in enumerate(self.path_kappas):
            for k in ks:
                self.ref.setdefault(k, i)
        self.below = R.P.below(mu)
        # known[pos][kappa] = (label, key); fixed by the reference path
        self.known: dict[tuple[int, int], dict[str, tuple]] = {pos: {} for pos in self.positions}
        if self.forced is not None:
            for pos in self.positions:
                self._extend_known(pos, 0, self.forced.layout[pos[0]][pos[1]])
        # bijections between reference copy keys and keys of other paths
        self.fwd: dict = {}
        self.bwd: dict = {}
        # capacities for free edges
        self.assign: dict[tuple[tuple[int, int], int], Optional[tuple]] = {}
        self.opened: dict = {}
        self.used: dict = {}
        self.pads: dict = {}
        self.padcap = {}
        for f, lam in enumerate(self.free, start=1):
            N = d.mults[(mu, lam)]
            for j, n in enumerate(d.dims[mu]):
                self.padcap[(f, j)] = n - sum(N[j][b] * m for b, m in enumerate(d.dims[lam]))
        self.chunks = self._chunks() if R.use_symmetry else {}
        self.census = [] if not R.use_census else [
            (nu, other, K, R._targets(nu, other, K), d.mults[(nu, mu)], [R._pad_count(nu, mu, jn) for jn in range(len(d.dims[nu]))])
            for nu, other, K in R.census[mu]
        ]

    # -- labels --------------------------------------------------------------

    def _path_labels(self, path: int, slot):
        """(kappa, label, key) for every kappa reachable through ``path`` given ``slot``."""
        lam = self.covers[path]
        ks = self.path_kappas[path]
        if slot is None:
            return [(k, None, None) for k in ks]
        b, c, p = slot
        out = [(lam, (b, p), (b, c))]
        lab = self.R.labels[lam][(b, p)]
        for k in ks[1:]:
            label, key = lab[k]
            out.append((k, label, None if label is None else (b, c, key)))
        return out

    def _extend_known(self, pos, path, slot):
        for k, label, key in self._path_labels(path, slot):
            if self.ref[k] == path:
                self.known[pos][k] = (label, key)

    # -- symmetry chunks -------------------------------------------------------

    def _chunks(self):
        """Map from a position to the (previous chunk, this chunk) it completes."""
        ends = {}
        if self.forced is None or not self.free:
            return ends
        for j, block in enumerate(self.forced.layout):
            groups: dict = {}
            q = 0
            while q < len(block):
                slot = block[q]
                if slot is None:
                    chunk = [(j, q)]
                    gkey = None
                    q += 1
                else:
                    b = slot[0]
                    n = self.R.d.dims[self.covers[0]][b]
                    chunk = [(j, q + t) for t in range(n)]
                    gkey = b
                    q += n
                prev = groups.get(gkey)
                if prev is not None:
                    ends[chunk[-1]] = (prev, chunk)
                groups[gkey] = chunk
        return ends

    def _signature(self, chunk):
        sig = []
        for pos in chunk:
            for f in range(1, len(self.covers)):
                s = self.assign[(pos, f)]
                sig.append(_PAD_SIG if s is None else (s[0], s[2]))
        return tuple(sig)

    # -- census ----------------------------------------------------------------

    def _census_ok(self) -> bool:
        for nu, other, K, targets, N, pads in self.census:
            for jn, T in enumerate(targets):
                lo: dict = {}
                partial = []
                none = tuple(None for _ in K)
                if pads[jn]:
                    lo[none] = pads[jn]
                for pos in self.positions:
                    w = N[jn][pos[0]]
                    if not w:
                        continue
                    kn = self.known[pos]
                    lab = tuple(kn[k][0] if k in kn else ... for k in K)
                    if ... in lab:
                        partial.append((lab, w))
                    else:
                        lo[lab] = lo.get(lab, 0) + w
                for L in set(T) | set(lo):
                    t = T.get(L, 0)
                    have = lo.get(L, 0)
                    if have > t:
                        return False
                    g = 0
                    room = 0
                    for lab, w in partial:
                        if all(a is ... or a == b for a, b in zip(lab, L)):
                            room += w
                            g = gcd(g, w)
                    if t > have + room:
                        return False
                    if g == 0:
                        if t != have:
                            return False
                    elif (t - have) % g:
                        return False
        return True

    # -- search ----------------------------------------------------------------

    def _candidates(self, pos, f):
        j = pos[0]
        lam = self.free[f - 1]
        N = self.R.d.mults[(self.mu, lam)][j]
        sizes = self.R.d.dims[lam]
        for b, m in enumerate(N):
            if not m:
                continue
            opened = self.opened.get((f, j, b), 0)
            for c in range(min(opened + 1, m)):
                used = self.used.get((f, j, b, c), set())
                for p in range(sizes[b]):
                    if p not in used:
                        yield (b, c, p)
        if self.pads.get((f, j), 0) < self.padcap[(f, j)]:
            yield None

    def _try(self, pos, f, slot):
        """Check consistency of ``slot``; on success record it and return an undo list."""
        j = pos[0]
        kn = self.known[pos]
        undo = []
        for k, label, key in self._path_labels(f, slot):
            r = self.ref[k]
            if r == f:
                kn[k] = (label, key)
                undo.append(("known", pos, k))
                continue
            ref_label, ref_key = kn[k]
            if ref_label != label:
                self._undo(undo)
                return None
            if label is None:
                continue
            fk = (j, k, f)
            fmap = self.fwd.setdefault(fk, {})
            bmap = self.bwd.setdefault(fk, {})
            a = fmap.get(ref_key)
            b = bmap.get(key)
            if a is None and b is None:
                fmap[ref_key] = key
                bmap[key] = ref_key
                undo.append(("map", fk, ref_key, key))
            elif a != key or b != ref_key:
                self._undo(undo)
                return None
        return undo

    def _undo(self, undo):
        for item in reversed(undo):
            if item[0] == "known":
                del self.known[item[1]][item[2]]
            else:
                _, fk, ref_key, key = item
                del self.fwd[fk][ref_key]
                del self.bwd[fk][key]

    def _record(self, pos, f, slot):
        self.assign[(pos, f)] = slot
        j = pos[0]
        if slot is None:
            self.pads[(f, j)] = self.pads.get((f, j), 0) + 1
        else:
            b, c, p = slot
            key = (f, j, b)
            if c == self.opened.get(key, 0):
                self.opened[key] = c + 1
            self.used.setdefault((f, j, b, c), set()).add(p)

    def _erase(self, pos, f, slot):
        del self.assign[(pos, f)]
        j = pos[0]
        if slot is None:
            self.pads[(f, j)] -= 1
        else:
            b, c, p = slot
            used = self.used[(f, j, b, c)]
            used.discard(p)
            if not used:
                del self.used[(f, j, b, c)]
                self.opened[(f, j, b)] = c

    def solutions(self):
        R = self.R
        if self.census and not self._census_ok():
            return
        variables = [(pos, f) for pos in self.positions for f in range(1, len(self.covers))]
        yield from self._solve(variables, 0)

    def _solve(self, variables, idx):
        R = self.R
        if idx == len(variables):
            R.install(self.mu, self._wirings())
            yield
            R.uninstall(self.mu)
            return
        pos, f = variables[idx]
        last_at_pos = f == len(self.covers) - 1
        for slot in list(self._candidates(pos, f)):
            R.nodes += 1
            if R.nodes > R.budget:
                raise _Budget
            undo = self._try(pos, f, slot)
            if undo is None:
                continue
            self._record(pos, f, slot)
            ok = True
            if last_at_pos:
                ends = self.chunks.get(pos)
                if ends is not None and self._signature(ends[0]) > self._signature(ends[1]):
                    ok = False
                if ok and self.census and not self._census_ok():
                    ok = False
            if ok:
                yield from self._solve(variables, idx + 1)
            self._erase(pos, f, slot)
            self._undo(undo)

    def _wirings(self) -> dict[str, Wiring]:
        out = {}
        if self.forced is not None:
            out[self.covers[0]] = self.forced
        for f, lam in enumerate(self.free, start=1):
            layout = []
            for j, n in enumerate(self.R.d.dims[self.mu]):
                layout.append(tuple(self.assign[((j, q), f)] for q in range(n)))
            out[lam] = Wiring(self.R.algs[lam], self.alg, tuple(layout))
        return out


def search_realization(d: BratteliDiagram, budget: int = 10_000_000) -> SearchResult:
    """Decide realizability of ``d`` by exactly commuting wirings.

    Returns a :class:`SearchResult` whose verdict is one of ``WITNESS``,
    ``NO_REALIZATION`` (full enumeration, no witness) or ``BUDGET``.
    """
    _require_valid(d)
    return _Realizer(d, budget).run()
