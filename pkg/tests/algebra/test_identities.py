import json

import pytest

from gbvlab.algebra import REGISTRY, IdentityReport, verify_all, verify_identity
from gbvlab.algebra.identities import (
    REPORTED_FAILURES,
    Instance,
    exact_instance,
    numeric_instance,
)
from gbvlab.errors import ParameterError

SMALL = {
    "kronecker-convolution": {"max_index": 5},
    "vandermonde": {"max_index": 5},
    "subset-double-counting": {"max_index": 5},
    "scaling-relations": {"low": -1, "high": 3},
    "xi-self-convolution": {"max_index": 3},
    "omega-convolution": {"max_K": 3, "max_index": 2},
    "g-product-closure": {"max_order": 2, "max_K": 2, "max_L": 1, "points": 3},
    "xi-omega-exchange": {"max_order": 2, "max_K": 2, "max_L": 1, "points": 3},
    "chi-product": {"points": 10},
    "chi-real-part": {"points": 10},
    "zero-phase-real-part": {"points": 5},
    "log-ratio-series": {"points": 10},
}


def test_small_parameters_cover_registry():
    assert set(SMALL) == set(REGISTRY)


@pytest.mark.parametrize("name", sorted(SMALL))
def test_identity_holds(name):
    report = verify_identity(name, SMALL[name])
    assert report.instances
    assert report.passed, report.failures[:5]
    assert report.exact == REGISTRY[name].exact


@pytest.mark.parametrize("name", ["g-product-closure", "xi-omega-exchange"])
def test_closure_defaults_cover_acceptance_range(name):
    defaults = REGISTRY[name].defaults
    assert defaults["points"] >= 100
    assert defaults["max_order"] == 4
    assert defaults["max_K"] == 3
    report = verify_identity(name, {"max_order": 1, "max_K": 1, "max_L": 0})
    assert report.parameters["points"] == defaults["points"]


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_identity_holds_at_defaults(name):
    report = verify_identity(name)
    assert report.passed, report.failures[:5]


@pytest.mark.slow
def test_verify_all_runs_every_identity():
    reports = verify_all({"vandermonde": {"max_index": 3}})
    assert [report.name for report in reports] == list(REGISTRY)


def test_verify_all_unknown():
    with pytest.raises(ParameterError):
        verify_all({"pythagoras": {}})


def test_unknown_identity_or_parameter():
    with pytest.raises(ParameterError):
        verify_identity("pythagoras")
    with pytest.raises(ParameterError):
        verify_identity("vandermonde", {"points": 3})


def test_seeded_points_are_reproducible():
    first = verify_identity("chi-real-part", {"points": 4}, seed=7)
    second = verify_identity("chi-real-part", {"points": 4}, seed=7)
    other = verify_identity("chi-real-part", {"points": 4}, seed=8)
    assert first.instances == second.instances
    assert first.instances != other.instances


def test_report_json():
    report = verify_identity("vandermonde", {"max_index": 2})
    payload = json.loads(json.dumps(report.to_json()))
    assert payload["name"] == "vandermonde"
    assert payload["exact"] is True
    assert payload["parameters"] == {"max_index": 2}
    assert payload["instances"] == 27
    assert payload["max_residual"] == 0
    assert payload["passed"] is True
    assert payload["failures"] == []


def test_report_caps_failures():
    failing = tuple(Instance((n, 0.5j), 1.0, False) for n in range(30))
    report = IdentityReport("broken", False, {}, failing)
    payload = report.to_json()
    assert not report.passed
    assert len(payload["failures"]) == REPORTED_FAILURES
    assert payload["failures"][0] == [0, [0.0, 0.5]]


def test_empty_report_does_not_pass():
    assert not IdentityReport("empty", True, {}, ()).passed


def test_instances():
    assert exact_instance((), 3, 3).passed
    assert not exact_instance((), 3, 4).passed
    assert numeric_instance((), 100.0 + 1e-8, 100.0).passed
    assert not numeric_instance((), 1e-6, 0.0).passed
