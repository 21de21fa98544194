import json
from pathlib import Path

import pytest

import lagrep

ROOT = Path(__file__).resolve().parents[2]


def test_fixture_and_schema():
    data = lagrep.fixture("wdvv3")
    assert data["coordinates"] == ["u1", "u2", "u3"]
    r = lagrep.transform("wdvv3", operator="A2")
    assert r.passed and r.data["schema"] == lagrep.SCHEMA
    assert r.data["leading_metric"][0][1] == "-1/(u1-u2)^2"


def test_derive_wdvv3():
    r = lagrep.derive("wdvv3")
    assert r.passed, r.summary
    assert r.data["stage"] == "certify"
    assert all(c["status"] == "pass" for c in r.data["expected"])


def test_constant_toy_from_dict():
    system = json.loads((ROOT / "data" / "toys" / "constant.json").read_text())
    r = lagrep.derive(system)
    assert r.passed and r.data["r_solver"]["method"] == "zero"


def test_failures_are_reports_not_exceptions():
    r = lagrep.check(ROOT / "tests" / "cli" / "identity_operator.json")
    assert not r and not r.data["operators"][0]["skew_adjoint"]


def test_errors_map_to_exceptions():
    with pytest.raises(lagrep.InputError):
        lagrep.derive("no-such-fixture")
    with pytest.raises(lagrep.InputError):
        lagrep.derive({"coordinates": ["u"]})
    with pytest.raises(lagrep.BoundError):
        lagrep.derive("wdvv3", jet_bound=1)


def test_jet_helpers():
    x = ["u"]
    assert lagrep.euler(lagrep.total_x("u^3*u_x", x), x) == ["0"]
    assert lagrep.is_total_divergence("u*u_x", x)
    assert not lagrep.is_total_divergence("u_x^2", x)
    assert lagrep.euler("1/2*u_x^2", x) == ["-u_xx"]
