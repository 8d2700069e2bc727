"""The algebras N_lambda built from label embeddings, and their stage algebras.

Coordinates of the ambient product are all subsets of a finite ground set X0,
ordered by (size, lexicographic).  A label of lambda is an ordering of its
points; labels are listed lexicographically by value sequence, so block
coordinate ``r`` of M_lambda is the r-th ordering.

Restriction to the coordinates nu contained in mu is injective on the stage
A_mu and the dimensions agree, so A_mu is isomorphic to the sum of M_nu over
nu contained in mu.  The matrix units of that decomposition are built by
subtracting, stage by stage, the overflow of iota_nu into larger coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import permutations
from math import comb, factorial
from typing import Iterable

from .diagrams import BratteliDiagram, FinitePoset, subset_name, subsets
from .exactalg import (
    Element,
    MatrixUnitSystem,
    MultiMatrixAlgebra,
    Span,
    decompose,
    ideal_generated_by,
    multiply,
    rank,
)
from .homs import Wiring, apply_hom, check_unit_map, wiring_from_unit_images

Label = tuple[str, ...]
Subset = tuple[str, ...]


class CapacityError(ValueError):
    """The truncated ground set has no point outside the stage."""


def concat_labels(t: Label, s: Label) -> Label:
    if set(t) & set(s):
        raise ValueError(f"labels {t} and {s} have overlapping domains")
    return tuple(t) + tuple(s)


def label_algebra(lam: Iterable[str]) -> MultiMatrixAlgebra:
    return MultiMatrixAlgebra((factorial(len(tuple(lam))),))


@dataclass(frozen=True)
class PrimeAmbient:
    points: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        if len(set(self.points)) != len(self.points):
            raise ValueError("point names must be distinct")

    def normalize(self, lam: Iterable[str]) -> Subset:
        lam = set(lam)
        unknown = lam - set(self.points)
        if unknown:
            raise ValueError(f"points {sorted(unknown)} are not in the ground set")
        return tuple(x for x in self.points if x in lam)

    @cached_property
    def blocks(self) -> list[Subset]:
        return subsets(self.points, include_empty=True)

    @cached_property
    def block_index(self) -> dict[Subset, int]:
        return {mu: i for i, mu in enumerate(self.blocks)}

    @cached_property
    def algebra(self) -> MultiMatrixAlgebra:
        return MultiMatrixAlgebra(tuple(factorial(len(mu)) for mu in self.blocks))

    def labels(self, lam: Iterable[str]) -> list[Label]:
        return _labels(self.normalize(lam))

    def label_index(self, lam: Iterable[str]) -> dict[Label, int]:
        return _label_index(self.normalize(lam))

    def supersets(self, lam: Iterable[str], within: Iterable[str] | None = None) -> list[Subset]:
        lam = set(lam)
        top = set(self.points) if within is None else set(within)
        return [mu for mu in self.blocks if lam <= set(mu) <= top]


@lru_cache(maxsize=None)
def _labels(lam: Subset) -> list[Label]:
    return list(permutations(lam))


@lru_cache(maxsize=None)
def _label_index(lam: Subset) -> dict[Label, int]:
    return {t: i for i, t in enumerate(_labels(lam))}


def labels(lam: Iterable[str], ground: Iterable[str] | None = None) -> list[Label]:
    """All orderings of lam, lexicographic by value sequence in ground order."""
    lam = tuple(lam)
    if ground is not None:
        order = {x: i for i, x in enumerate(ground)}
        lam = tuple(sorted(lam, key=order.__getitem__))
    return _labels(lam)


def iota_hom(amb: PrimeAmbient, lam, mu) -> Wiring:
    """iota_{mu,lam}: e_{s,t} -> sum over u of e_{su,tu}."""
    return _iota(amb, amb.normalize(lam), amb.normalize(mu))


@lru_cache(maxsize=None)
def _iota(amb: PrimeAmbient, lam: Subset, mu: Subset) -> Wiring:
    if not set(lam) <= set(mu):
        raise ValueError(f"{subset_name(lam)} is not contained in {subset_name(mu)}")
    rest = tuple(x for x in mu if x not in lam)
    idx = _label_index(mu)
    layout: list = [None] * factorial(len(mu))
    for c, u in enumerate(_labels(rest)):
        for r, t in enumerate(_labels(lam)):
            layout[idx[concat_labels(t, u)]] = (0, c, r)
    return Wiring(label_algebra(lam), label_algebra(mu), (tuple(layout),))


def iota_element(amb: PrimeAmbient, lam, x: Element) -> Element:
    """iota_lam(x): iota_{mu,lam}(x) at every coordinate mu containing lam."""
    lam = amb.normalize(lam)
    entries = {}
    for mu in amb.supersets(lam):
        b = amb.block_index[mu]
        for (_, r, s), v in apply_hom(_iota(amb, lam, mu), x).entries.items():
            entries[(b, r, s)] = v
    return Element(amb.algebra, entries)


def f_unit(amb: PrimeAmbient, lam, s: Label, t: Label) -> Element:
    lam = amb.normalize(lam)
    idx = _label_index(lam)
    if tuple(s) not in idx or tuple(t) not in idx:
        raise ValueError(f"labels {s}, {t} are not orderings of {subset_name(lam)}")
    return _f_unit(amb, lam, tuple(s), tuple(t))


@lru_cache(maxsize=None)
def _f_unit(amb: PrimeAmbient, lam: Subset, s: Label, t: Label) -> Element:
    idx = _label_index(lam)
    e = Element(label_algebra(lam), {(0, idx[s], idx[t]): 1})
    return iota_element(amb, lam, e)


def n_units(amb: PrimeAmbient, lam) -> list[Element]:
    """The matrix units f^{(lam)}_{s,t}, row-major in label order."""
    lam = amb.normalize(lam)
    ls = _labels(lam)
    return [_f_unit(amb, lam, s, t) for s in ls for t in ls]


def unit_of(amb: PrimeAmbient, lam) -> Element:
    """p_lam, the unit of N_lam."""
    lam = amb.normalize(lam)
    out = amb.algebra.zero()
    for t in _labels(lam):
        out = out + _f_unit(amb, lam, t, t)
    return out


def expected_stage_dimension(n: int) -> int:
    return sum(comb(n, k) * factorial(k) ** 2 for k in range(n + 1))


# ---------------------------------------------------------------------------
# stages


@dataclass(frozen=True, eq=False)
class PrimeStage:
    ambient: PrimeAmbient
    mu: Subset

    @cached_property
    def parts(self) -> list[Subset]:
        """Subsets of mu; the summand for nu is the restriction to coordinate nu."""
        return [nu for nu in self.ambient.blocks if set(nu) <= set(self.mu)]

    @cached_property
    def span(self) -> list[Element]:
        out = []
        for lam in self.parts:
            out.extend(n_units(self.ambient, lam))
        return out

    def _summand_unit(self, nu: Subset, r: int, s: int) -> Element:
        amb = self.ambient
        c = {nu: Element(label_algebra(nu), {(0, r, s): 1})}
        for kappa in self.parts:
            if set(nu) < set(kappa):
                acc = label_algebra(kappa).zero()
                for k2, val in c.items():
                    if set(k2) < set(kappa):
                        acc = acc + apply_hom(_iota(amb, k2, kappa), val)
                if acc:
                    c[kappa] = -acc
        out = amb.algebra.zero()
        for kappa, val in c.items():
            out = out + iota_element(amb, kappa, val)
        return out

    @cached_property
    def units(self) -> MatrixUnitSystem:
        summands = []
        for nu in self.parts:
            n = factorial(len(nu))
            summands.append(tuple(tuple(self._summand_unit(nu, r, s) for s in range(n)) for r in range(n)))
        return MatrixUnitSystem(self.ambient.algebra, tuple(summands))

    @property
    def algebra(self) -> MultiMatrixAlgebra:
        return self.units.algebra

    @property
    def dimension(self) -> int:
        return self.algebra.dimension

    def span_rank(self) -> int:
        return rank(self.span)

    def computed_decomposition(self) -> list[tuple[Element, int]]:
        return decompose(self.span)

    def ideal_of(self, gens: Iterable[Element]) -> frozenset[int]:
        """Summands of the ideal of this stage generated by ``gens``."""
        return ideal_generated_by(self.algebra, [self.units.coordinates(g) for g in gens])

    def support_of_n(self, lam) -> frozenset[int]:
        """Summands on which N_lam is nonzero; also the ideal it generates."""
        lam = self.ambient.normalize(lam)
        if lam not in self._supports:
            self._supports[lam] = self.ideal_of(n_units(self.ambient, lam))
        return self._supports[lam]

    @cached_property
    def _supports(self) -> dict:
        return {}

    def contains_n(self, blocks: frozenset[int], lam) -> bool:
        return self.support_of_n(lam) <= blocks


def stage_algebra(amb: PrimeAmbient, mu) -> PrimeStage:
    return _stage(amb, amb.normalize(mu))


@lru_cache(maxsize=None)
def _stage(amb: PrimeAmbient, mu: Subset) -> PrimeStage:
    return PrimeStage(amb, mu)


def stage_inclusion(small: PrimeStage, large: PrimeStage) -> Wiring:
    if small.ambient != large.ambient or not set(small.mu) <= set(large.mu):
        raise ValueError("first stage is not contained in the second")
    return wiring_from_unit_images(
        small.algebra,
        large.algebra,
        lambda i, r, s: large.units.coordinates(small.units.units[i][r][s]),
    )


def stage_diagram(amb: PrimeAmbient) -> BratteliDiagram:
    """Diagram over all subsets of X0 (the empty set is named ``empty``)."""
    stages = {mu: stage_algebra(amb, mu) for mu in amb.blocks}
    names = {mu: subset_name(mu) for mu in stages}
    rel = [(names[a], names[b]) for a in stages for b in stages if set(a) < set(b)]
    poset = FinitePoset(names.values(), rel)
    dims = {names[mu]: st.algebra.sizes for mu, st in stages.items()}
    mults = {}
    for a, sa in stages.items():
        for b, sb in stages.items():
            if set(a) < set(b):
                mults[(names[b], names[a])] = stage_inclusion(sa, sb).multiplicity
    return BratteliDiagram(poset, dims, dict(sorted(mults.items())))


# ---------------------------------------------------------------------------
# lemma checks; each returns a list of failure descriptions


def _pairs(amb: PrimeAmbient):
    return [(lam, mu) for lam in amb.blocks for mu in amb.blocks if set(lam) <= set(mu)]


def check_product_formula(amb: PrimeAmbient) -> list[str]:
    """f^{(lam)}_{s,t} f^{(mu)}_{s',t'} = f^{(mu)}_{su,t'} if s' = tu, else 0."""
    bad = []
    for lam, mu in _pairs(amb):
        rest = tuple(x for x in mu if x not in lam)
        for s in _labels(lam):
            for t in _labels(lam):
                a = _f_unit(amb, lam, s, t)
                for s2 in _labels(mu):
                    k = len(lam)
                    match = s2[:k] == t and s2[k:] in _label_index(rest)
                    for t2 in _labels(mu):
                        got = multiply(a, _f_unit(amb, mu, s2, t2))
                        want = _f_unit(amb, mu, concat_labels(s, s2[k:]), t2) if match else amb.algebra.zero()
                        if got != want:
                            bad.append(f"f[{subset_name(lam)}]{s},{t} * f[{subset_name(mu)}]{s2},{t2}")
    return bad


def _n_span(amb: PrimeAmbient, lam) -> Span:
    sp = Span()
    for f in n_units(amb, lam):
        sp.insert(f.entries)
    return sp


def check_trichotomy(amb: PrimeAmbient) -> list[str]:
    """N_lam N_mu is a nonzero part of the larger one when nested, zero otherwise."""
    bad = []
    spans = {lam: _n_span(amb, lam) for lam in amb.blocks}
    for lam in amb.blocks:
        for mu in amb.blocks:
            prods = [multiply(a, b) for a in n_units(amb, lam) for b in n_units(amb, mu)]
            name = f"N[{subset_name(lam)}] N[{subset_name(mu)}]"
            if set(lam) <= set(mu) or set(mu) <= set(lam):
                host = mu if set(lam) <= set(mu) else lam
                if not any(prods):
                    bad.append(f"{name} = 0")
                if not all(spans[host].contains(p.entries) for p in prods):
                    bad.append(f"{name} not inside N[{subset_name(host)}]")
            elif any(prods):
                bad.append(f"{name} != 0")
    return bad


def check_orthogonal_levels(amb: PrimeAmbient) -> list[str]:
    """N_lam N_mu = 0 for distinct subsets of equal size."""
    bad = []
    for lam in amb.blocks:
        for mu in amb.blocks:
            if lam != mu and len(lam) == len(mu):
                if any(multiply(a, b) for a in n_units(amb, lam) for b in n_units(amb, mu)):
                    bad.append(f"N[{subset_name(lam)}] N[{subset_name(mu)}] != 0")
    return bad


def check_cut_down(amb: PrimeAmbient) -> list[str]:
    """a -> a p_{lam'} is an injective *-homomorphism N_lam -> N_{lam'}."""
    bad = []
    for lam, big in _pairs(amb):
        p = unit_of(amb, big)
        src = label_algebra(lam)
        ls = _labels(lam)

        def image(i, r, s, lam=lam, ls=ls, p=p):
            return multiply(_f_unit(amb, lam, ls[r], ls[s]), p)

        name = f"{subset_name(lam)} -> {subset_name(big)}"
        res = check_unit_map(src, amb.algebra, image)
        if not res:
            bad.append(f"{name}: {res.violation}")
            continue
        imgs = [image(0, r, s) for r in range(len(ls)) for s in range(len(ls))]
        if rank(imgs) != len(imgs):
            bad.append(f"{name}: not injective")
        host = _n_span(amb, big)
        if not all(host.contains(x.entries) for x in imgs):
            bad.append(f"{name}: image leaves N[{subset_name(big)}]")
    return bad


# ---------------------------------------------------------------------------
# ideals


@dataclass
class LocateResult:
    minimal: Subset  # lambda_0
    target: Subset  # lambda_0' = lambda_0 + fresh point
    fresh: str
    stage: Subset  # the larger stage where the ideal was computed


def decompose_components(amb: PrimeAmbient, mu, a: Element) -> dict[Subset, Element]:
    """The unique a = sum a_lam with a_lam in N_lam, lam contained in mu."""
    st = stage_algebra(amb, mu)
    owners = []
    sp = Span(track=True)
    for lam in st.parts:
        for f in n_units(amb, lam):
            if sp.insert(f.entries) is not None:
                raise ValueError("the N_lam are not independent")
            owners.append((lam, f))
    coords = sp.coordinates(a.entries)
    if coords is None:
        raise ValueError("element is not in the stage")
    out: dict[Subset, Element] = {}
    for idx, v in sorted(coords.items()):
        lam, f = owners[idx]
        out[lam] = out.get(lam, amb.algebra.zero()) + v * f
    return {lam: x for lam, x in out.items() if x}


def locate_summand_ideal(amb: PrimeAmbient, mu, a: Element) -> LocateResult:
    """Find lam' with N_{lam'} inside the ideal generated by a in a larger stage."""
    mu = amb.normalize(mu)
    if not a:
        raise ValueError("element is zero")
    fresh = [x for x in amb.points if x not in mu]
    if not fresh:
        raise CapacityError(f"no point of the ground set lies outside {subset_name(mu)}")
    x0 = fresh[0]
    comps = decompose_components(amb, mu, a)
    lam0 = next(lam for lam in amb.blocks if lam in comps)
    if any(set(lam) < set(lam0) for lam in comps):
        raise AssertionError("component order is not inclusion-minimal")
    target = amb.normalize(set(lam0) | {x0})
    p = unit_of(amb, target)
    cut = multiply(a, p)
    if cut != multiply(comps[lam0], p) or not cut:
        raise AssertionError(f"a p_{subset_name(target)} is not the nonzero cut of the minimal component")
    big = stage_algebra(amb, set(mu) | {x0})
    if not big.contains_n(big.ideal_of([a]), target):
        raise AssertionError(f"ideal of a misses N[{subset_name(target)}]")
    return LocateResult(lam0, target, x0, big.mu)


def hereditary_check(amb: PrimeAmbient, mu, lam0, lam) -> bool:
    """The ideal of A_mu generated by N_{lam0} contains N_lam."""
    mu, lam0, lam = amb.normalize(mu), amb.normalize(lam0), amb.normalize(lam)
    if not set(lam0) <= set(lam) <= set(mu):
        raise ValueError("need lam0 within lam within mu")
    st = stage_algebra(amb, mu)
    return st.contains_n(st.support_of_n(lam0), lam)


def ideal_intersection_check(amb: PrimeAmbient, lam1, lam2, mu=None) -> bool:
    """Ideals generated by N_{lam1} and N_{lam2} both contain N_{lam1 + lam2}."""
    join = amb.normalize(set(lam1) | set(lam2))
    mu = join if mu is None else amb.normalize(mu)
    st = stage_algebra(amb, mu)
    return all(st.contains_n(st.support_of_n(lam), join) for lam in (lam1, lam2))
