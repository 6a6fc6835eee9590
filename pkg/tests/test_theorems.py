import math

import pytest

from shiftlab import fixtures
from shiftlab.codes import fiber_product
from shiftlab.decision import audit, proved, refuted
from shiftlab.errors import ConsistencyFault
from shiftlab.graph import LabeledGraph
from shiftlab.openness import check_right_continuing_retract, check_semi_open
from shiftlab.shifts import SoficShift
from shiftlab.theorems import (
    certificates,
    certify_irreducible_map,
    check_nonwandering_maximal,
)

EVEN_TAGS = {
    "CorollaryNew", "ThmFiniteCover", "ThmRRMagic", "LemmaOnto", "ThmSToS",
    "ThmSFTFiniteToOne", "ThmSemiAE", "ThmSynBiCont", "LemmaDoubly",
    "ThmFischer",
}


def test_even_cover_certificate_battery():
    code = fixtures.even_cover()
    semi, _ = check_semi_open(code)
    certs = certificates(code, {"semi_open": semi})
    assert {c.tag for c in certs} == EVEN_TAGS
    for cert in certs:
        assert cert.hypotheses
        for line in cert.hypotheses:
            assert line.endswith(": Proved")


def test_golden_cover_adds_sft_and_ballier_certificates():
    code = fixtures.golden_cover()
    semi, _ = check_semi_open(code)
    rd = check_right_continuing_retract(code, 0)
    assert rd.is_proved
    certs = certificates(code, {"semi_open": semi, "retract": rd})
    tags = {c.tag for c in certs}
    assert "ThmRightClosing" in tags  # codomain golden shift is an SFT
    assert "ThmBallier" in tags
    ballier = next(c for c in certs if c.tag == "ThmBallier")
    assert ballier.conclusion == "right-continuing everywhere with retract 0"


def test_even_cover_omits_sft_conclusion():
    # the even shift is strictly sofic, so the SFT-codomain theorem
    # cannot fire no matter how nice the map is
    code = fixtures.even_cover()
    semi, _ = check_semi_open(code)
    certs = certificates(code, {"semi_open": semi})
    assert "ThmRightClosing" not in {c.tag for c in certs}


def test_refuted_map_emits_nothing_semi_open():
    code = fixtures.fig1_code()
    semi, _ = check_semi_open(code)
    assert semi.is_refuted
    certs = certificates(code, {"semi_open": semi})
    assert not any(c.conclusion == "semi-open" for c in certs)


def test_planted_inconsistency_trips_the_audit():
    code = fixtures.even_cover()
    with pytest.raises(ConsistencyFault):
        certificates(code, {"semi_open": refuted({"zone": ["fake"]})})


def test_audit_primitive():
    with pytest.raises(ConsistencyFault):
        audit(proved({}, provenance="certificate:X"), refuted({}), "X")
    # agreeing and inconclusive pairs pass through
    audit(proved({}), proved({}), "ok")
    audit(proved({}), proved({}).__class__("Inconclusive", None, "c"), "ok")


def test_fiber_context_certificates():
    cover = fixtures.golden_cover()
    product = fiber_product(cover, cover)
    semi, _ = check_semi_open(cover)
    ctx = {"fiber": {
        "psi1_semi_open": semi,
        "phi1_semi_open": semi,
        "psi2_onto": proved({"checked": "fixture"}),
    }}
    tags = {c.tag for c in certificates(product.psi2, ctx)}
    assert "ThmFiber" in tags


def test_lift_context_certificates():
    x = fixtures.golden_shift()
    code = fixtures.golden_cover()
    cover_semi, _ = check_semi_open(code)
    certs = certificates(code, {"lift": {"cover_semi_open": cover_semi}})
    assert "ThmLiftt" in {c.tag for c in certs}


def test_composition_context_certificates():
    code = fixtures.even_cover()
    semi, _ = check_semi_open(code)
    ctx = {"composition": {"composite_semi_open": semi,
                           "inner_onto": proved({"checked": "fixture"})}}
    tags = {c.tag for c in certificates(code, ctx)}
    assert "LemmaCirc" in tags


def test_certify_irreducible_map_contract():
    dec = certify_irreducible_map(fixtures.even_cover())
    assert dec.is_proved
    assert dec.provenance == "certificate:ThmFischer"
    assert dec.payload["degree"] == 1
    two_to_one = certify_irreducible_map(fixtures.phase_doubling_code())
    assert two_to_one.is_inconclusive
    assert two_to_one.payload["degree"] == 2


def test_certify_irreducible_map_propagates_errors():
    from shiftlab.errors import NotFiniteToOne
    with pytest.raises(NotFiniteToOne):
        certify_irreducible_map(fixtures.right_closing_counterexample_code())


def test_nonwandering_report_fig1():
    report = check_nonwandering_maximal(fixtures.fig1_shift())
    assert report["nonwandering"] is True
    assert report["all_maximal"] is False
    comps = {tuple(c["vertices"]): c for c in report["components"]}
    assert comps[("v1", "v2")]["maximal"] is True
    assert abs(comps[("v1", "v2")]["entropy"] - report["entropy"]) < 1e-9
    assert comps[("w",)]["entropy"] == 0.0
    assert comps[("w",)]["maximal"] is False


def test_nonwandering_two_equal_components():
    g = LabeledGraph.make(
        ["0", "1"], ["a", "b"],
        [("e1", "a", "a", "0"), ("e2", "a", "a", "1"),
         ("e3", "b", "b", "0"), ("e4", "b", "b", "1")])
    report = check_nonwandering_maximal(SoficShift(g))
    assert report["nonwandering"] is True
    assert report["all_maximal"] is True
    assert len(report["components"]) == 2
    assert abs(report["entropy"] - math.log(2)) < 1e-12


def test_bridged_loops_wander():
    # a path between two loops is admissible only in the bridge shift,
    # so the union of components misses it
    g = LabeledGraph.make(
        ["a", "b"], ["u", "w"],
        [("e1", "u", "u", "a"), ("e2", "w", "w", "b"),
         ("e3", "u", "w", "a")])
    report = check_nonwandering_maximal(SoficShift(g))
    assert report["nonwandering"] is False


def test_irreducible_shift_is_nonwandering_and_maximal():
    report = check_nonwandering_maximal(fixtures.golden_shift())
    assert report["nonwandering"] is True
    assert report["all_maximal"] is True
    assert len(report["components"]) == 1
