from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bratteli.diagrams import builtin_diagram, point_names
from bratteli.exactalg import Element, make_algebra
from bratteli.homs import compose_homs, identity_wiring, standard_wiring
from bratteli.kzero import (
    ColimitClass,
    K0Stage,
    block_classes,
    class_of_projection,
    colimit_equal,
    connect,
    connect_is_functorial,
    connect_is_positive,
    positive_and_scale,
    push,
    stage_k0,
    unit_class,
)
from bratteli.prime import PrimeAmbient, stage_algebra, stage_inclusion
from bratteli.twin import GroundSet, TwinAmbient, build_twin_stage, inclusion_wiring, twin_bratteli_data, twin_generator

from oracles import matrix_product

TWIN4 = TwinAmbient(GroundSet(point_names(4)))
NONEMPTY4 = [s for k in range(1, 5) for s in combinations(point_names(4), k)]


def test_stage_k0_examples():
    assert stage_k0(make_algebra((2, 1, 1))) == K0Stage((2, 1, 1))
    assert stage_k0(make_algebra((24,))).rank == 1
    assert stage_k0(make_algebra(())).rank == 0


def test_scale_is_order_interval():
    g = K0Stage((2, 1))
    assert g.in_scale((2, 0)) and g.in_scale((0, 1))
    assert not g.in_scale((3, 0)) and not g.in_scale((-1, 0))
    assert g.is_positive((5, 0)) and not g.is_positive((0, -1))
    with pytest.raises(ValueError):
        g.is_positive((1,))


def test_connect_identity():
    alg = make_algebra((2, 3))
    assert connect(identity_wiring(alg)) == ((1, 0), (0, 1))


def test_connect_twin_point_into_pair():
    w = inclusion_wiring(build_twin_stage(TWIN4, "A", ["x1"]), build_twin_stage(TWIN4, "A", ["x1", "x2"]))
    assert connect(w) == ((1,), (1,), (0,))
    assert connect_is_positive(w)


def corpus_triples():
    """Composable stage inclusions from the twin (4 points) and prime (3 points) constructions."""
    out = []
    for variant in ("A", "B"):
        stages = {s: build_twin_stage(TWIN4, variant, s) for s in NONEMPTY4}
        for a, b, c in combinations(NONEMPTY4, 3):
            if set(a) < set(b) < set(c):
                f = inclusion_wiring(stages[a], stages[b])
                g = inclusion_wiring(stages[b], stages[c])
                out.append((g, f))
    amb = PrimeAmbient(point_names(3))
    subs = [s for k in range(4) for s in combinations(amb.points, k)]
    for a, b, c in combinations(subs, 3):
        if set(a) < set(b) < set(c):
            sa, sb, sc = (stage_algebra(amb, x) for x in (a, b, c))
            out.append((stage_inclusion(sb, sc), stage_inclusion(sa, sb)))
    return out


def test_connect_functorial_on_corpus():
    triples = corpus_triples()
    assert len(triples) > 100
    for g, f in triples:
        assert connect_is_functorial(g, f)
        expect = matrix_product([list(r) for r in connect(g)], [list(r) for r in connect(f)])
        assert [list(r) for r in connect(compose_homs(g, f))] == expect


def test_connect_positive_for_non_unital_map():
    src, dst = make_algebra((1,)), make_algebra((3,))
    assert connect_is_positive(standard_wiring(src, dst, [[2]]))


# -- classes of projections --------------------------------------------------


def test_class_of_zero_and_unit():
    alg = make_algebra((2, 1))
    assert class_of_projection(alg.zero()) == (0, 0)
    assert class_of_projection(alg.unit()) == (2, 1)
    with pytest.raises(ValueError):
        class_of_projection(Element(alg, {(0, 0, 1): 1}))


@pytest.mark.parametrize("lam", NONEMPTY4, ids=lambda s: "_".join(s))
@pytest.mark.parametrize("variant", ["A", "B"])
def test_generator_class_matches_g_pattern(variant, lam):
    st_ = build_twin_stage(TWIN4, variant, lam)
    for x in lam:
        cls = class_of_projection(twin_generator(TWIN4, variant, x), st_.units)
        expect = [1 if x in z else 0 for z in st_.pairs] + [1 if y == x else 0 for y in lam]
        assert list(cls) == expect
        # consistent with 0 <= g_x(z) <= 2 on the M_z coordinates
        assert all(0 <= cls[i] <= 2 for i in range(len(st_.pairs)))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2)), max_size=5, unique=True))
def test_class_additive_on_orthogonal_projections(cells):
    alg = make_algebra((3, 3, 1))
    cells = [(b, r) for b, r in cells if r < alg.sizes[b]]
    total = alg.zero()
    acc = [0, 0, 0]
    for b, r in cells:
        e = Element(alg, {(b, r, r): 1})
        total = total + e
        cls = class_of_projection(e)
        acc = [a + c for a, c in zip(acc, cls)]
    assert list(class_of_projection(total)) == acc


# -- colimit ------------------------------------------------------------------


def test_push_and_equality_along_order():
    d = builtin_diagram("example-nonrealizable")
    c = ColimitClass("d", (1, 0))
    assert push(d, c, "a") == (6,)
    assert colimit_equal(d, c, ColimitClass("b", push(d, c, "b")))
    with pytest.raises(ValueError):
        push(d, ColimitClass("a", (1,)), "d")


def test_distinct_vectors_with_injective_maps_differ():
    d = twin_bratteli_data(TWIN4, "A")
    a = ColimitClass("x1_x2", (1, 0, 0))
    b = ColimitClass("x1_x2", (0, 1, 0))
    assert not colimit_equal(d, a, b)


def test_twin_unit_class_persists():
    d = twin_bratteli_data(TWIN4, "A")
    e11 = block_classes(d, "x1_x2")[0]
    for nu in d.poset.above("x1_x2"):
        assert colimit_equal(d, e11, ColimitClass(nu, push(d, e11, nu)))


def all_classes(d):
    out = []
    for v in d.vertices:
        out.extend(block_classes(d, v))
        out.append(unit_class(d, v))
    return out


@pytest.mark.parametrize("name", ["twin", "prime"])
def test_colimit_equality_is_equivalence(name):
    d = builtin_diagram(name, 4)
    cls = all_classes(d)
    eq = [{j for j, c2 in enumerate(cls) if colimit_equal(d, c1, c2)} for c1 in cls]
    for i in range(len(cls)):
        assert i in eq[i]
        for j in eq[i]:
            assert i in eq[j]
            assert eq[j] <= eq[i]


def test_negated_unit_and_projection_classes():
    d = twin_bratteli_data(TWIN4, "A")
    u = unit_class(d, "x1_x2")
    assert positive_and_scale(d, u) == (True, True)
    neg = ColimitClass(u.vertex, tuple(-x for x in u.vector))
    assert positive_and_scale(d, neg) == (False, False)


@pytest.mark.parametrize("lam", NONEMPTY4, ids=lambda s: "_".join(s))
def test_a_and_b_classes_agree(lam):
    dA, dB = twin_bratteli_data(TWIN4, "A"), twin_bratteli_data(TWIN4, "B")
    assert dA == dB  # the identification is the identity on vertices and blocks
    v = "_".join(lam)
    sA, sB = build_twin_stage(TWIN4, "A", lam), build_twin_stage(TWIN4, "B", lam)
    for x in lam:
        ca = ColimitClass(v, class_of_projection(twin_generator(TWIN4, "A", x), sA.units))
        cb = ColimitClass(v, class_of_projection(twin_generator(TWIN4, "B", x), sB.units))
        assert ca == cb
        assert positive_and_scale(dA, ca) == positive_and_scale(dB, cb) == (True, True)
    for c in block_classes(dA, v) + [unit_class(dA, v)]:
        assert positive_and_scale(dA, c) == positive_and_scale(dB, c)
