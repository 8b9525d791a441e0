import json

import pytest

from glv4.catalog import save_instance
from glv4.cli import CostModelWeights, main

P1 = 2**127 - 58309


@pytest.fixture(scope="module")
def curve_file(tmp_path_factory):
    from glv4.catalog import catalog_get, make_twist

    path = tmp_path_factory.mktemp("inst") / "p1.curve"
    save_instance(make_twist(catalog_get("E2", P1)), str(path))
    return str(path)


def run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out.strip().splitlines()
    return code, [json.loads(line) for line in out]


def test_weights_identity():
    flat = CostModelWeights(s_per_m=1, a_per_m=1, i_per_m=1, M_per_m=1)
    tally = {"m": 3, "s": 2, "a": 5, "i": 1, "M": 0, "S": 0, "A": 0, "I": 0}
    assert flat.cost(tally) == 11  # raw sum when every weight is 1
    assert CostModelWeights().cost(tally) == 3 + 0.7 * 2 + 0.2 * 5 + 50


def test_catalog_lists_six_families(capsys):
    code, recs = run_json(capsys, ["catalog"])
    assert code == 0
    assert [r["family"] for r in recs] == ["E1", "E2", "E3", "E4", "E5", "E6"]


def test_constants_output(capsys):
    code, recs = run_json(capsys, ["constants", "--r", "1", "--s", "1"])
    assert code == 0
    rec = recs[0]
    assert abs(float(rec["u"]) - 0.3554157) < 5e-8
    assert abs(float(rec["theta"]) - 2.45861) < 5e-6
    assert abs(float(rec["A"]) - 16.6902) < 5e-5
    assert abs(float(rec["B"]) - 40**0.25) < 1e-9


def test_constants_domain_error():
    with pytest.raises(Exception):
        main(["constants", "--r", "2", "--s", "1"])


def test_decompose_and_mul(capsys, curve_file):
    code, recs = run_json(
        capsys, ["decompose", "--curve", curve_file, "--scalar", "0xdeadbeef"]
    )
    assert code == 0 and recs[0]["congruent"]
    assert len(recs[0]["parts"]) == 4

    code, recs = run_json(
        capsys,
        [
            "mul", "--curve", curve_file, "--scalar", "0x1234567890",
            "--mode", "glv4", "--report-ops", "--check",
        ],
    )
    assert code == 0
    rec = recs[0]
    assert rec["matches_reference"]
    assert rec["dbl"] == 64
    assert set(rec["tallies"]) == {"m", "s", "a", "i", "M", "S", "A", "I"}
    # JSON output round-trips
    assert json.loads(json.dumps(rec)) == rec


def test_verify_bounds_exit_codes(capsys, curve_file, monkeypatch):
    monkeypatch.setenv("GLV4_SEED", "12345")
    code, recs = run_json(
        capsys, ["verify-bounds", "--curve", curve_file, "--samples", "50"]
    )
    assert code == 0
    rec = recs[0]
    assert rec["violations"] == 0
    assert rec["congruence_failures"] == 0
    assert rec["seed"] == 12345

    # empty campaign still exits 0
    code, recs = run_json(
        capsys, ["verify-bounds", "--curve", curve_file, "--samples", "0"]
    )
    assert code == 0 and recs[0]["samples"] == 0


def test_verify_bounds_deterministic(capsys, curve_file, monkeypatch):
    monkeypatch.setenv("GLV4_SEED", "777")
    _, first = run_json(
        capsys, ["verify-bounds", "--curve", curve_file, "--samples", "20"]
    )
    _, second = run_json(
        capsys, ["verify-bounds", "--curve", curve_file, "--samples", "20"]
    )
    for rec in (*first, *second):
        rec.pop("basis_ms")  # wall-clock, not part of the deterministic report
    assert first == second


def test_verify_bounds_lll_method(capsys, curve_file):
    code, recs = run_json(
        capsys,
        ["verify-bounds", "--curve", curve_file, "--samples", "20", "--method", "lll"],
    )
    assert code == 0 and recs[0]["violations"] == 0


def test_cost_report(capsys, curve_file):
    code, recs = run_json(
        capsys, ["cost-report", "--curve", curve_file, "--samples", "3"]
    )
    assert code == 0
    rec = recs[0]
    costs = rec["weighted_cost_m"]
    assert costs["non-glv"] > costs["glv2"] > costs["glv4"]
    assert 0.43 <= rec["ratio_glv4_nonglv"] <= 0.53
    assert rec["dbl"] == {"non-glv": 254, "glv2": 127, "glv4": 64}
