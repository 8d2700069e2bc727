import random
import time

import pytest

from bratteli.diagrams import (
    InvalidDiagramError,
    builtin_diagram,
    parse_diagram,
    realize_chain,
)
from bratteli.exactalg import Element
from bratteli.homs import apply_hom
from bratteli.search import BUDGET, NO_REALIZATION, WITNESS, _Realizer, search_realization

from gen import MEDIUM_NEGATIVE, SMALL_NEGATIVE, bowtie_corpus, random_chain
from oracles import brute_realizable


def pointwise_functorial(system) -> bool:
    """Re-check exact functoriality on matrix units, without compose_homs."""
    P = system.poset
    for lam in P.vertices:
        A = system.algebras[lam]
        units = [Element(A, {(i, r, s): 1}) for i, n in enumerate(A.sizes) for r in range(n) for s in range(n)]
        for mu in P.above(lam):
            for nu in P.above(mu):
                for e in units:
                    two_step = apply_hom(system.map(nu, mu), apply_hom(system.map(mu, lam), e))
                    if two_step != apply_hom(system.map(nu, lam), e):
                        return False
    return True


def test_example_has_no_wiring_realization():
    d = builtin_diagram("example-nonrealizable")
    t0 = time.perf_counter()
    res = search_realization(d)
    elapsed = time.perf_counter() - t0
    assert res.verdict == NO_REALIZATION
    assert res.system is None and not res.found
    assert elapsed < 60


def test_budget_exhaustion_is_distinguished():
    res = search_realization(builtin_diagram("example-nonrealizable"), budget=50)
    assert res.verdict == BUDGET
    assert res.nodes >= 50


def test_invalid_diagram_rejected():
    d = parse_diagram("vertex a : 1\nvertex b : 1\nedge a -> b : 2\n")
    with pytest.raises(InvalidDiagramError):
        search_realization(d)


def test_v_shape_without_top_is_realizable():
    d = parse_diagram(
        "vertex d : 1 2\nvertex b : 5\nvertex c : 3 2\n"
        "edge d -> b : 1 2\nedge d -> c : 1 1 ; 0 1\n"
    )
    res = search_realization(d)
    assert res.verdict == WITNESS
    assert res.system.diagram() == d


@pytest.mark.parametrize("seed", range(25))
def test_random_chains_realized(seed):
    d = random_chain(random.Random(1000 + seed), max_stages=4, max_size=8)
    res = search_realization(d)
    assert res.found
    assert res.system.diagram() == d
    assert res.system.functoriality_violations() == []
    assert pointwise_functorial(res.system)
    # on a chain the gauge forces every edge, so the witness is the standard one
    assert res.system.maps == realize_chain(d).maps


def test_finite_subsets_realized():
    d = builtin_diagram("finite-subsets", 3)
    res = search_realization(d)
    assert res.found
    assert res.system.diagram() == d
    assert pointwise_functorial(res.system)


def test_small_negative_agrees_with_brute_force():
    d = parse_diagram(SMALL_NEGATIVE)
    assert brute_realizable(d) is False
    assert search_realization(d).verdict == NO_REALIZATION


def test_medium_negative_without_pruning():
    d = parse_diagram(MEDIUM_NEGATIVE)
    assert search_realization(d).verdict == NO_REALIZATION
    assert _Realizer(d, 10**7, census=False, symmetry=False).run().verdict == NO_REALIZATION


BOWTIES = bowtie_corpus(seed=7, count=60, max_cost=3000)


@pytest.mark.parametrize("idx", range(len(BOWTIES)))
def test_search_matches_brute_force(idx):
    d = BOWTIES[idx]
    res = search_realization(d)
    assert res.verdict != BUDGET
    assert res.found == brute_realizable(d)
    if res.found:
        assert res.system.diagram() == d
        assert pointwise_functorial(res.system)


def test_brute_corpus_contains_negatives():
    assert any(not brute_realizable(d) for d in BOWTIES)


LARGER = bowtie_corpus(seed=11, count=80, max_top=12)


@pytest.mark.parametrize("idx", range(len(LARGER)))
def test_pruning_does_not_change_verdict(idx):
    d = LARGER[idx]
    pruned = _Realizer(d, 2 * 10**4).run()
    plain = _Realizer(d, 2 * 10**4, census=False, symmetry=False).run()
    if BUDGET in (pruned.verdict, plain.verdict):
        pytest.skip("search too large for this instance at the test budget")
    assert pruned.verdict == plain.verdict
    if pruned.found:
        assert pointwise_functorial(pruned.system)


def test_search_is_deterministic():
    for d in BOWTIES[:10]:
        a, b = search_realization(d), search_realization(d)
        assert a.verdict == b.verdict and a.nodes == b.nodes
        if a.found:
            assert a.system.maps == b.system.maps
