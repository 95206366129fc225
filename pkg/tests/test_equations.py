"""Equational systems: validation, benignness, coherence, negative control."""

import pytest

from structlaws.equations import (
    check_benign,
    check_bundle,
    check_coherence,
    combine,
    validate_system,
)
from structlaws.examples import build, peano_wrong_assoc


@pytest.fixture(scope="module")
def peano():
    return build("peano")


@pytest.fixture(scope="module")
def presheaf():
    return build("lambda-presheaf")


def test_all_shipped_systems_validate():
    for name in ("peano", "lambda-presheaf", "lambda-debruijn"):
        b = build(name)
        for eq in b.systems:
            assert validate_system(b.stack, eq) == [], (name, eq.name)


def test_peano_associativity_is_benign(peano):
    for eq in peano.systems:
        report = check_benign(peano.stack, eq, 6)
        assert report.passed and report.instances > 0
        # coherence passed on both sides, so the name carries the certificate
        assert report.name == "benign"


def test_presheaf_systems_are_benign(presheaf):
    for eq in presheaf.systems:
        report = check_benign(presheaf.stack, eq, 5)
        assert report.passed and report.name == "benign"


def test_coherence_both_sides(presheaf):
    for eq in presheaf.systems:
        for side in ("left", "right"):
            report = check_coherence(presheaf.stack, eq, side, 5)
            assert report.passed and report.instances > 0


def test_wrong_interpretation_fails_coherence(peano):
    wrong = peano_wrong_assoc()
    report = check_coherence(peano.stack, wrong, "right", 6)
    assert not report.passed
    assert len(report.counterexamples) >= 1


def test_wrong_interpretation_is_only_empirically_refuted(peano):
    wrong = peano_wrong_assoc()
    report = check_benign(peano.stack, wrong, 6)
    assert not report.passed
    assert report.name == "benign-empirically"


def test_benign_at_size_zero_is_vacuous(peano):
    report = check_benign(peano.stack, peano.systems[0], 0)
    assert report.passed and report.instances == 0


def test_check_bundle_reports_per_system(peano):
    reports = check_bundle(peano.stack, combine(peano.systems), 5)
    assert len(reports) == len(peano.systems)
    assert all(r.passed for r in reports)
