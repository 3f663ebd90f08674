"""Cycle-claim certification: witnesses pass, out-of-interval prices fail."""

from fractions import Fraction

import pytest

from ncgsim.instances.catalog import (
    CATALOG_NAMES,
    catalog_instance,
    certify_cycle,
    parse_claim,
    write_claim,
)


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_certifies_at_witness(name):
    report = certify_cycle(catalog_instance(name))
    assert report.passed, "\n".join(report.summary_lines())


@pytest.mark.parametrize("name", CATALOG_NAMES)
def test_claim_file_roundtrips(name):
    claim = catalog_instance(name)
    again = parse_claim(write_claim(claim), name)
    assert again.initial == claim.initial
    assert [s.move for s in again.steps] == [s.move for s in claim.steps]
    assert certify_cycle(again).passed


# open alpha intervals: witness passes, prices at or beyond both endpoints fail
INTERVAL_CASES = [
    ("fig7", ["13/2", "7", "8", "9"]),
    ("fig7-host", ["13/2", "9"]),
    ("fig8", ["1", "2", "3"]),
    ("fig8-host", ["1", "2"]),
    ("fig11", ["9", "10", "12", "13"]),
    ("fig12", ["1", "2", "4", "5"]),
]


@pytest.mark.parametrize("name,alphas", INTERVAL_CASES)
def test_fails_outside_interval(name, alphas):
    claim = catalog_instance(name)
    for a in alphas:
        report = certify_cycle(claim, Fraction(a))
        assert not report.passed, f"{name} unexpectedly passed at alpha={a}"


def test_fig7_failure_pinpoints_delete(https=None):
    # below the interval the deletion stops improving (needs alpha > 7)
    report = certify_cycle(catalog_instance("fig7"), Fraction(13, 2))
    bad = report.failures()
    assert any(c.step == 3 for c in bad)


def test_unknown_instance_rejected():
    with pytest.raises(KeyError):
        catalog_instance("fig99")


def test_unhappy_multiswap_flags_fig3():
    claim = catalog_instance("fig3")
    kinds = {a.kind for s in claim.steps for a in s.pre_asserts}
    assert "unhappy-multiswap" in kinds and "multiswap-no-better" in kinds


def test_no_escape_flags_fig11():
    claim = catalog_instance("fig11")
    for s in claim.steps:
        assert any(a.kind == "no-escape" for a in s.pre_asserts)


def test_certifier_catches_wrong_cost():
    claim = catalog_instance("fig7")
    text = write_claim(claim).replace("assert cost g 1 21", "assert cost g 1 20")
    bad = parse_claim(text, "fig7-broken")
    assert not certify_cycle(bad).passed


def test_certifier_catches_wrong_unhappy_set():
    claim = catalog_instance("fig2")
    text = write_claim(claim).replace("assert unhappy {a1}", "assert unhappy {a1,a2}", 1)
    bad = parse_claim(text, "fig2-broken")
    assert not certify_cycle(bad).passed
