"""Acceptance gate.

One test per pinned behavioral criterion, each asserting its own runtime
budget. These facts are the library's contract: a change that breaks one
of them is a behavior change, never a flake to be patched around.
"""

import math
import random
import time

from shiftlab import fixtures
from shiftlab.codes import count_preimages_of_periodic, cover_code, degree
from shiftlab.errors import ConsistencyFault
from shiftlab.graph import find_magic_word, is_irreducible
from shiftlab.openness import (
    check_open,
    check_right_continuing_retract,
    check_semi_open,
    witness_from_magic,
)
from shiftlab.pointed import (
    CenteredWord,
    contains_cylinder,
    contains_periodic_point,
    cylinder_image,
    window_language,
)
from shiftlab.properties import (
    PROPERTIES,
    TrialConfig,
    gen_right_resolving_graph,
    proptest,
)
from shiftlab.shifts import SoficShift, entropy, full_shift
from shiftlab.theorems import certificates

from test_pointed import _oracle_contains, _random_instance


def test_criterion_1_collapsed_loop_refutes_semi_openness():
    start = time.perf_counter()
    code = fixtures.fig1_code()
    dec, _ = check_semi_open(code)
    assert dec.is_refuted
    assert dec.payload["zone"] == ["2"]
    # the refuting cylinder maps onto the single constant point: the
    # all-zero sequence is in the image and nothing else is
    a = cylinder_image(code, ("2",))
    assert contains_periodic_point(a, ("0",))
    assert not contains_periodic_point(a, ("1",))
    assert not contains_periodic_point(a, ("0", "1"))
    for k in (1, 2, 3):
        assert window_language(a, k) == [("0",) * (2 * k + 1)]
    assert time.perf_counter() - start < 1.0


def test_criterion_2_even_cover_degree_and_preimage_profile():
    start = time.perf_counter()
    g = fixtures.even_graph()
    code = fixtures.even_cover()
    assert degree(code).degree == 1
    zero_fiber = count_preimages_of_periodic(g, ("0",))
    one_fiber = count_preimages_of_periodic(g, ("1",))
    assert zero_fiber == 2
    assert one_fiber == 1
    dec, _ = check_semi_open(code)
    assert dec.is_proved
    # two periodic fibers of different size: not constant-to-one
    assert zero_fiber != one_fiber
    assert time.perf_counter() - start < 1.0


def test_criterion_3_entropy_against_closed_forms():
    golden = fixtures.golden_shift()
    full3 = full_shift(["0", "1", "2"])
    start = time.perf_counter()
    assert abs(entropy(golden) - math.log((1 + math.sqrt(5)) / 2)) < 1e-9
    assert abs(entropy(full3) - math.log(3)) < 1e-12
    assert time.perf_counter() - start < 0.1


def test_criterion_4_property_suite_is_forbidden_free():
    start = time.perf_counter()
    for prop in sorted(PROPERTIES):
        report = proptest(TrialConfig(prop))
        assert report["counts"]["forbidden"] == 0, prop
        assert report["inconclusive_rate"] < 0.20, prop
    assert time.perf_counter() - start < 300.0


def test_criterion_5_containment_agrees_with_brute_force():
    start = time.perf_counter()
    rng = random.Random(505)
    agreements = 0
    for _ in range(500):
        a, y, w = _random_instance(rng)
        assert contains_cylinder(a, y, w) == _oracle_contains(a, y, w)
        agreements += 1
    assert agreements == 500
    assert time.perf_counter() - start < 120.0


def test_criterion_6_magic_witnesses_reverify_on_200_covers():
    def has_magic(g):
        return is_irreducible(g) and find_magic_word(g) is not None

    start = time.perf_counter()
    rng = random.Random(606)
    for _ in range(200):
        g = gen_right_resolving_graph(rng, 6, 3, has_magic)
        alpha = find_magic_word(g)
        edges = sorted(g.edges, key=lambda e: e.id)
        path = [rng.choice(edges)]
        for _ in range(rng.randint(0, 3)):
            path.append(rng.choice([e for e in edges
                                    if e.src == path[-1].dst]))
        pi = tuple(e.id for e in path)
        witness = witness_from_magic(g, alpha, pi)
        a = cylinder_image(cover_code(g),
                           CenteredWord(pi, (len(pi) - 1) // 2))
        assert contains_cylinder(a, SoficShift.from_graph(g), witness)
    assert time.perf_counter() - start < 120.0


def test_criterion_7_open_check_separates_the_two_covers():
    start = time.perf_counter()
    refutation, _ = check_open(fixtures.even_cover(), l_max=4, k_max=6)
    proof, _ = check_open(fixtures.golden_cover(), l_max=4, k_max=6)
    assert refutation.is_refuted
    assert proof.is_proved
    assert time.perf_counter() - start < 10.0


def test_criterion_8_retract_monotone_and_certificates_consistent():
    rng = random.Random(808)
    codes = [fixtures.golden_cover(), fixtures.even_cover(),
             fixtures.phase_doubling_code()]
    for _ in range(15):
        codes.append(cover_code(gen_right_resolving_graph(
            rng, 4, 3, is_irreducible)))
    faults = 0
    proved_instances = 0
    for code in codes:
        semi, _ = check_semi_open(code)
        for side in ("right", "left", "bi"):
            prior_proved = False
            for n in range(3):
                rd = check_right_continuing_retract(code, n, side)
                if prior_proved:
                    assert rd.is_proved  # retract bounds only relax upward
                prior_proved = prior_proved or rd.is_proved
                try:
                    certs = certificates(
                        code, {"semi_open": semi, "retract": rd})
                except ConsistencyFault:
                    faults += 1
                    continue
                for cert in certs:
                    if cert.tag != "ThmBallier":
                        continue
                    assert rd.is_proved and side == "right"
                    assert cert.conclusion == (
                        f"right-continuing everywhere with retract {n}")
                    proved_instances += 1
    assert faults == 0
    assert proved_instances >= 1
