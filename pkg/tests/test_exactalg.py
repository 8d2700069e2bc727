from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bratteli.exactalg import (
    Element,
    I,
    MatrixUnitIndex,
    MatrixUnitSystem,
    MultiMatrixAlgebra,
    NonSplitCenterError,
    NotClosedError,
    Scalar,
    Span,
    adjoint,
    block_ranks,
    center,
    commutator,
    decompose,
    div,
    ideal_generated_by,
    in_ideal,
    is_projection,
    make_algebra,
    matrix_unit,
    minimal_central_idempotents,
    multiply,
    scalar,
    solve,
)

from oracles import dense, dense_rank


# -- scalars ----------------------------------------------------------------


def test_scalar_collapses_to_rational():
    assert scalar(3, 0) == 3 and isinstance(scalar(3, 0), int)
    assert I * I == -1
    assert isinstance(I * I, int)


def test_scalar_arithmetic_exact():
    z = Scalar(1, 2)
    w = Scalar(Fraction(1, 3), -1)
    assert z * w == Scalar(Fraction(1, 3) + 2, Fraction(2, 3) - 1)
    assert div(z, z) == 1
    assert div(1, 3) == Fraction(1, 3)
    assert z.conjugate() == Scalar(1, -2)
    assert z - z == 0 and not (z - z)


def test_floats_rejected():
    with pytest.raises(TypeError):
        Scalar(0.5, 0)
    with pytest.raises(TypeError):
        div(1.0, 2)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        div(I, 0)


# -- algebras ---------------------------------------------------------------


@pytest.mark.parametrize("sizes,dim", [((24,), 576), ((1, 3), 10), ((4, 4), 32), ((), 0)])
def test_algebra_dimension(sizes, dim):
    assert make_algebra(sizes).dimension == dim


@pytest.mark.parametrize("bad", [(0,), (2, -1)])
def test_algebra_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        make_algebra(bad)


def test_matrix_unit_relations():
    m2 = make_algebra((2,))
    e11, e12, e21, e22 = (matrix_unit(m2, 0, r, c) for r, c in [(0, 0), (0, 1), (1, 0), (1, 1)])
    assert multiply(e11, e11) == e11
    assert multiply(e12, e21) == e11
    assert adjoint(e12) == e21
    assert commutator(e11, e11) == m2.zero()
    assert commutator(e12, e21) == e11 - e22
    assert is_projection(e11) and not is_projection(e12)
    assert MatrixUnitIndex(0, 0, 0).block == 0


def test_matrix_unit_bounds():
    with pytest.raises(IndexError):
        matrix_unit(make_algebra((2,)), 0, 2, 0)
    with pytest.raises(IndexError):
        matrix_unit(make_algebra((2,)), 1, 0, 0)


def test_commutator_in_one_dimensional_block_vanishes():
    alg = make_algebra((1, 2))
    a = Element(alg, {(0, 0, 0): Scalar(2, 1), (1, 0, 1): 1})
    b = Element(alg, {(0, 0, 0): 5})
    assert commutator(a, b) == alg.zero()


def test_algebra_mismatch():
    with pytest.raises(ValueError):
        multiply(make_algebra((2,)).unit(), make_algebra((1, 1)).unit())


def test_block_ranks():
    alg = make_algebra((3, 1))
    a = Element(alg, {(0, 0, 0): 1, (0, 1, 1): 1, (0, 0, 1): 2})
    assert block_ranks(a) == (2, 0)


# -- hypothesis properties --------------------------------------------------

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4)
scalars = st.builds(lambda a, b: scalar(a, b), rationals, rationals)
ALG = make_algebra((2, 1, 3))


@st.composite
def elements(draw):
    entries = {}
    for b, n in enumerate(ALG.sizes):
        for r in range(n):
            for c in range(n):
                if draw(st.booleans()):
                    entries[(b, r, c)] = draw(scalars)
    return Element(ALG, entries)


@settings(max_examples=60, deadline=None)
@given(elements(), elements(), elements())
def test_multiply_associative(a, b, c):
    assert multiply(multiply(a, b), c) == multiply(a, multiply(b, c))


@settings(max_examples=60, deadline=None)
@given(elements(), elements())
def test_adjoint_laws(a, b):
    assert a.adjoint().adjoint() == a
    assert multiply(a, b).adjoint() == multiply(b.adjoint(), a.adjoint())


@settings(max_examples=60, deadline=None)
@given(elements(), elements(), st.lists(elements(), max_size=3))
def test_commutator_lies_in_commutator_ideal(a, b, more):
    gens = [commutator(x, y) for x in [a, b] + more for y in [a, b] + more]
    blocks = ideal_generated_by(ALG, gens)
    assert in_ideal(blocks, commutator(a, b))
    # the ideal is the smallest block set containing every support
    for blk in blocks:
        assert any(blk in g.support_blocks() for g in gens)


# -- linear algebra ---------------------------------------------------------


def test_span_coordinates_and_solve():
    sp = Span(track=True)
    assert sp.insert({0: 1, 1: 2}) is None
    assert sp.insert({1: 1}) is None
    # a dependent vector comes back as the relation it satisfies
    assert sp.insert({0: 2, 1: 5}) == {0: -2, 1: -1, 2: 1}
    assert sp.coordinates({0: 1, 1: 3}) == {0: 1, 1: 1}
    assert solve([{0: 1}, {1: 1}], {0: 3, 1: Fraction(1, 2)}) == [3, Fraction(1, 2)]
    assert solve([{0: 1}], {1: 1}) is None


@settings(max_examples=40, deadline=None)
@given(st.lists(elements(), min_size=1, max_size=6))
def test_span_rank_matches_dense_oracle(xs):
    real = [x for x in xs if all(not isinstance(v, Scalar) for v in x.entries.values())]
    if not real:
        return
    sp = Span()
    for x in real:
        sp.insert(x.entries)
    assert sp.rank == dense_rank([dense(x) for x in real])


# -- centers and idempotents -----------------------------------------------


def test_full_matrix_algebra_has_one_idempotent():
    m2 = make_algebra((2,))
    idems = minimal_central_idempotents(m2.units())
    assert idems == [m2.unit()]


def test_decompose_direct_sum():
    alg = make_algebra((2, 1))
    sizes = sorted(n for _, n in decompose(alg.units()))
    assert sizes == [1, 2]


def test_idempotents_properties():
    # diagonally embedded M2 inside M2 + M2 plus the scalars of a third block
    alg = make_algebra((2, 2, 1))
    span = []
    for r in range(2):
        for c in range(2):
            span.append(Element(alg, {(0, r, c): 1, (1, r, c): 1}))
    span.append(Element(alg, {(2, 0, 0): 1}))
    idems = minimal_central_idempotents(span)
    assert len(idems) == 2
    total = alg.zero()
    for e in idems:
        assert is_projection(e)
        for s in span:
            assert commutator(e, s) == alg.zero()
        total = total + e
    for e in idems:
        for f in idems:
            if e is not f:
                assert multiply(e, f) == alg.zero()
    assert total == alg.unit()


def test_not_closed_rejected():
    m2 = make_algebra((2,))
    with pytest.raises(NotClosedError):
        minimal_central_idempotents([matrix_unit(m2, 0, 0, 1)])


def test_irrational_spectrum_reported():
    # span{1, h} with h^2 = h + 1 is a closed commutative algebra, but its
    # idempotents need sqrt(5)
    m2 = make_algebra((2,))
    h = Element(m2, {(0, 0, 1): 1, (0, 1, 0): 1, (0, 1, 1): 1})
    with pytest.raises(NonSplitCenterError):
        minimal_central_idempotents([m2.unit(), h])


def test_complex_center_splits():
    # span{1, k} with k = i(e11 - e22) is a closed *-algebra; it splits along the imaginary part
    m2 = make_algebra((2,))
    k = Element(m2, {(0, 0, 0): I, (0, 1, 1): -I})
    idems = minimal_central_idempotents([m2.unit(), k])
    assert sorted(idems, key=repr) == sorted([matrix_unit(m2, 0, 0, 0), matrix_unit(m2, 0, 1, 1)], key=repr)


def test_center_dimension():
    alg = make_algebra((2, 1))
    assert len(center(alg.units())) == 2


def test_ideal_examples():
    alg = make_algebra((2, 1))
    assert ideal_generated_by(alg, [alg.zero()]) == frozenset()
    assert ideal_generated_by(alg, [matrix_unit(alg, 0, 0, 1)]) == frozenset({0})


# -- explicit matrix units ---------------------------------------------------


def test_matrix_unit_system_coordinates():
    amb = make_algebra((2, 2))
    # one copy of M2 placed diagonally
    units = tuple(
        tuple(Element(amb, {(0, r, c): 1, (1, r, c): 1}) for c in range(2)) for r in range(2)
    )
    mus = MatrixUnitSystem(amb, (units,))
    assert mus.verify() == []
    x = Element(amb, {(0, 0, 1): 3, (1, 0, 1): 3})
    assert mus.coordinates(x) == Element(mus.algebra, {(0, 0, 1): 3})
    with pytest.raises(ValueError):
        mus.coordinates(Element(amb, {(0, 0, 1): 1}))


def test_matrix_unit_system_verify_detects_errors():
    amb = make_algebra((2,))
    bad = ((matrix_unit(amb, 0, 0, 0), matrix_unit(amb, 0, 0, 1)), (matrix_unit(amb, 0, 0, 1), matrix_unit(amb, 0, 1, 1)))
    assert MatrixUnitSystem(amb, (bad,)).verify()
