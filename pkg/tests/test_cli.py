import inspect
import json
from pathlib import Path

import pytest

from multbound import bounds, sweep
from multbound.bounds import all_bounds
from multbound.cli import main
from multbound.structure import GroupProfile

DATA = Path(__file__).parent / "data"
SMALL = ["--families", "heisenberg,dihedral,quaternion,wreath_pp", "--max-order", "32"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_check_command(capsys):
    code, out, _ = run(capsys, "check", str(DATA / "heisenberg3.pc"))
    assert code == 0 and "consistent, order 3^3" in out
    code, out, _ = run(capsys, "check", str(DATA / "inconsistent.pc"))
    assert code == 3 and "inconsistent" in out
    code, _, err = run(capsys, "check", str(DATA / "malformed.pc"))
    assert code == 3 and "line 3" in err
    code, _, err = run(capsys, "check", str(DATA / "missing.pc"))
    assert code == 3


def test_multiplier_command(capsys):
    code, out, _ = run(capsys, "multiplier", "dihedral(8)")
    assert code == 0 and "= C2" in out
    code, out, _ = run(capsys, "multiplier", str(DATA / "heisenberg3.pc"))
    assert code == 0 and "C3 x C3" in out
    code, out, _ = run(capsys, "multiplier", str(DATA / "z9xz3.pc"))
    assert code == 0 and "= C3 " in out
    assert run(capsys, "multiplier", "dihedral(7)")[0] == 3
    assert run(capsys, "multiplier", "dihedral(64)", "--oracle-cap", "32")[0] == 3


def test_bounds_command(capsys):
    code, out, _ = run(capsys, "bounds", "heisenberg(3)")
    assert code == 0
    assert "multiplier: C3 x C3" in out and "nilpotency_class" in out
    code, out, _ = run(capsys, "bounds", "wreath_pp(3)", "--format", "json")
    rec = json.loads(out)
    assert code == 0 and rec["multiplier"] == {"type": [3], "order": 3}
    assert run(capsys, "bounds", str(DATA / "inconsistent.pc"))[0] == 3


def _sweep(capsys, *extra):
    code, out, err = run(capsys, "sweep", "--reproducible", *extra)
    return code, out, err


def test_sweep_json_schema(capsys):
    code, out, err = _sweep(capsys, *SMALL)
    report = json.loads(out)
    assert code == 0, err
    assert report["schema"] == 1 and "timestamp" not in report
    ids = [g["id"] for g in report["groups"]]
    assert ids == sorted(ids) and "heisenberg(3)" in ids
    rec = report["groups"][0]
    assert set(rec["profile"]) == {"p", "n", "k", "d", "c", "delta", "gamma", "t", "flags"}
    assert set(rec["bounds"][0]) == {"name", "exponent_num", "exponent_den", "kind", "applicable", "reason", "verdict"}
    assert set(rec["properties"][0]) == {"name", "verdict", "lhs", "rhs"}
    assert report["summary"]["fail"] == 0 and report["summary"]["pass"] > 0


def test_sweep_timestamp_without_reproducible(capsys):
    code, out, _ = run(capsys, "sweep", "--families", "heisenberg", "--max-order", "27")
    assert code == 0 and "timestamp" in json.loads(out)


def test_sweep_rejects_inconsistent_file(capsys):
    code, out, _ = _sweep(capsys, "--families", "heisenberg", "--max-order", "27",
                          "--input", str(DATA / "inconsistent.pc"), str(DATA / "heisenberg3.pc"))
    report = json.loads(out)
    status = {g["id"]: g["status"] for g in report["groups"]}
    assert status[str(DATA / "inconsistent.pc")].startswith("rejected: consistency")
    assert status[str(DATA / "heisenberg3.pc")] == "ok" and status["heisenberg(3)"] == "ok"
    assert code == 3 and report["summary"]["rejected"] == 1


def test_sweep_oracle_cap_zero(capsys):
    code, out, _ = _sweep(capsys, *SMALL, "--oracle-cap", "0")
    report = json.loads(out)
    assert code == 0
    for rec in report["groups"]:
        assert rec["multiplier"] is None
        assert all(b["verdict"] in ("skipped", "vacuous") for b in rec["bounds"])
        assert any(v == "pass" for v in rec["dominance"].values()) or rec["profile"]["c"] < 2
        for prop in rec["properties"]:
            if prop["name"].startswith(("ew_", "karpilovsky")):
                assert prop["verdict"] in ("skipped", "vacuous")
    assert report["summary"]["oracle_skipped"] > 0


def test_sweep_csv(capsys, tmp_path):
    out_file = tmp_path / "r.csv"
    code, _, _ = _sweep(capsys, "--families", "heisenberg", "--max-order", "27", "--format", "csv",
                        "--out", str(out_file))
    lines = out_file.read_text().splitlines()
    assert code == 0
    assert lines[0].startswith("id,status,p,n")
    assert len(lines) - 1 == len(all_bounds(GroupProfile(3, 3, 1, 2, 2, 2, 1, 0)))


def test_sweep_exit_code_on_violation(capsys):
    # 2^(1+4) has G^2 = gamma_2 of order 2 but |M| = 2^5, beyond the D8/Q8 dichotomy
    code, out, err = _sweep(capsys, "--families", "extraspecial", "--max-order", "32")
    report = json.loads(out)
    assert code == 2
    assert "extraspecial(2, 2, 'plus'): class2_agemo_cyclic" in report["summary"]["failures"]
    assert "FAIL extraspecial(2, 2, 'plus')" in err


def test_sweep_unknown_family(capsys):
    assert run(capsys, "sweep", "--families", "cyclic")[0] == 3


def test_sweep_duplicate_ids():
    entries = sweep.builtin_entries(["heisenberg"], 27) * 2
    report = sweep.run_sweep(entries, sweep.SweepOptions(reproducible=True))
    assert [g["status"] for g in report["groups"]] == ["ok", "rejected: duplicate id"]


def test_parallel_equals_serial():
    entries = sweep.builtin_entries(["dihedral", "heisenberg", "wreath_pp"], 81)
    serial = sweep.to_json(sweep.run_sweep(entries, sweep.SweepOptions(reproducible=True)))
    parallel = sweep.to_json(sweep.run_sweep(entries, sweep.SweepOptions(jobs=2, reproducible=True)))
    assert serial == parallel


def test_registry_completeness(group):
    # every bound function in the bounds module is run by the sweep
    producers = {
        name for name, fn in inspect.getmembers(bounds, inspect.isfunction)
        if fn.__module__ == bounds.__name__ and (name.endswith("_bound") or name.endswith("_bounds"))
        and name != "all_bounds"
    }
    assert producers == {fn.__name__ for fn in sweep.BOUND_FUNCTIONS}
    # every property checker defined in the sweep module is registered
    checkers = {
        name for name, fn in inspect.getmembers(sweep, inspect.isfunction)
        if fn.__module__ == sweep.__name__ and name.startswith("check_")
    }
    assert checkers == {fn.__name__ for fn in sweep.PROPERTY_CHECKS}
    # and a sweep record carries every bound and every property family
    rec = sweep.analyze(sweep.builtin_entries(["heisenberg"], 27)[0])
    names = {b["name"] for b in rec["bounds"]}
    assert names == {b.name for b in all_bounds(GroupProfile(3, 3, 1, 2, 2, 2, 1, 0))}
    props = {p["name"].split("[")[0] for p in rec["properties"]}
    assert props == {"psi_image_lower", "psi2_rank_lower", "ew_inequality", "ew_relaxation", "v_subgroup",
                     "karpilovsky"}
