import json

import pytest

import drlab


def test_presets_listed():
    assert "example11" in drlab.presets()


def test_phase():
    assert drlab.phase("example11", "rational")["phase"] == "critical"
    assert drlab.phase("delta0", "rational")["phase"] == "subcritical"


def test_evolve_csv_first_rows():
    rows = drlab.evolve_csv("example11", 2, "rational").splitlines()
    assert rows[0].startswith("n,survival,mean")
    assert rows[2].startswith("1,9/25,11/25,8/5")


def test_pivotal_identity_exact_at_depth_30():
    assert drlab.verify_pivotal("example11", 30)["max_abs_err"] == "0"


def test_openpath_identity():
    r = drlab.verify_openpath("example11", 10)
    assert r["weighted"]["max_abs_err"] == "0"
    assert r["pointwise"]["max_abs_err"] == "0"


def test_fixture_counts():
    counts, total, root = drlab.fixture_counts()
    assert [counts.get(i, 0) for i in range(4)] == [2, 1, 0, 3]
    assert total == 6
    assert root == 2


def test_simulate_is_seeded():
    a = drlab.simulate("example11", 4, 500, 3, 1)
    b = drlab.simulate("example11", 4, 500, 3, 2)
    assert a == b


def test_fit_exponent_exact_power():
    ns = list(range(1, 1025))
    vals = [2.0 / n**3 for n in ns]
    assert drlab.fit_exponent(ns, vals, 32, 1024)["slope"] == pytest.approx(-3.0, abs=1e-12)


def test_spec_as_json_string():
    spec = json.dumps({"m": 2, "initial": {"atoms": [{"x": 0, "p": "3/4"}, {"x": 2, "p": "1/4"}]}})
    assert drlab.phase(spec, "rational")["phase"] == "supercritical"


def test_errors_raise():
    with pytest.raises(Exception):
        drlab.phase("nosuch", "rational")


def test_run_cli():
    code, out, err = drlab.run_cli(["fixture", "figure2", "--check"])
    assert code == 0
    assert json.loads(out)["check"] is True
