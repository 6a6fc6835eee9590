import pytest

from shiftlab import fixtures
from shiftlab.codes import (
    SlidingBlockCode,
    code_equal,
    compose,
    count_preimages_of_periodic,
    cover_code,
    degree,
    fiber_product,
    identity_code,
    image_presentation,
    is_bi_closing,
    is_cover_map,
    is_finite_to_one,
    is_left_closing,
    is_right_closing,
    is_surjective_onto,
    lift_code,
)
from shiftlab.errors import DomainMismatch, NotFiniteToOne
from shiftlab.shifts import full_shift, shift_equal


def test_table_must_cover_admissible_windows():
    x = fixtures.golden_shift()
    with pytest.raises(DomainMismatch):
        SlidingBlockCode.make(x, 0, 0, {("0",): "a"})
    with pytest.raises(DomainMismatch):
        # "11" is not admissible, so the key is rejected
        SlidingBlockCode.make(x, 0, 1, {
            ("0", "0"): "a", ("0", "1"): "b", ("1", "0"): "c",
            ("1", "1"): "d"})


def test_identity_and_composition():
    x = fixtures.golden_shift()
    ident = identity_code(x)
    assert code_equal(compose(ident, ident), ident)
    f = fixtures.fig1_code()
    assert code_equal(compose(identity_code(image_presentation(f)), f), f)


def test_composition_window_adds():
    x = full_shift(["0", "1"])
    # xor with the next symbol, applied twice
    table = {("0", "0"): "0", ("0", "1"): "1",
             ("1", "0"): "1", ("1", "1"): "0"}
    f = SlidingBlockCode.make(x, 0, 1, table)
    ff = compose(f, f)
    assert (ff.memory, ff.anticipation) == (0, 2)


def test_image_presentation_collapses_fig1():
    f = fixtures.fig1_code()
    img = image_presentation(f)
    assert shift_equal(img, fixtures.golden_shift())
    assert is_surjective_onto(f, fixtures.golden_shift())
    assert not is_surjective_onto(f, full_shift(["0", "1"]))


def test_cover_codes():
    g = fixtures.even_graph()
    c = cover_code(g)
    assert is_cover_map(c)
    assert shift_equal(image_presentation(c), fixtures.even_shift())
    assert not is_cover_map(fixtures.fig1_code())


def test_degree_fixtures():
    assert degree(fixtures.even_cover()).degree == 1
    assert degree(fixtures.phase_doubling_code()).degree == 2
    assert degree(fixtures.golden_cover()).degree == 1


def test_infinite_to_one_counterexample():
    code = fixtures.right_closing_counterexample_code()
    assert is_finite_to_one(code).is_refuted
    with pytest.raises(NotFiniteToOne):
        degree(code)
    assert is_right_closing(code).is_refuted
    assert is_left_closing(code).is_refuted


def test_closing_fixtures():
    even = fixtures.even_cover()
    assert is_right_closing(even).is_proved
    assert is_left_closing(even).is_proved
    assert is_bi_closing(even).is_proved
    # the doubling map identifies the two loops only after one step
    pd = fixtures.phase_doubling_code()
    assert is_right_closing(pd).is_proved


def test_periodic_preimage_counts():
    g = fixtures.even_graph()
    assert count_preimages_of_periodic(g, ("0",)) == 2
    assert count_preimages_of_periodic(g, ("1",)) == 1
    assert count_preimages_of_periodic(g, ("0", "0")) == 2


def test_fiber_product_diagonal():
    cover = fixtures.golden_cover()
    product = fiber_product(cover, cover)
    sigma = product.sigma
    # live pair symbols only: trimming must not leave dead alphabet
    assert set(sigma.alphabet) == {e.label for e in sigma.presentation.edges}
    assert is_surjective_onto(product.psi1, cover.domain)
    assert is_surjective_onto(product.psi2, cover.domain)
    # projections then original maps commute on the product
    left = compose(cover, product.psi1)
    right = compose(cover, product.psi2)
    assert code_equal(left, right)


def test_fiber_product_mixed_covers():
    product = fiber_product(fixtures.even_cover(), fixtures.golden_cover())
    assert not product.sigma.is_empty
    assert code_equal(compose(fixtures.even_cover(), product.psi1),
                      compose(fixtures.golden_cover(), product.psi2))


def test_lift_identity_to_covers():
    x = fixtures.golden_shift()
    f = identity_code(x)
    lifted = lift_code(f, x, x)
    assert lifted is not None
    # the lift's codomain alphabet is the cover's edge set
    assert all(len(s) > 0 for s in lifted.codomain_alphabet)
