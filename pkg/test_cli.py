#!/usr/bin/env python3
"""
Test script for the command line
Exit codes and report files for classify, member, verify, figure and config
"""

import csv
import json
import os
import tempfile

from config import Config
from main import main as cli
from run_config import RunConfig


def _run(tmp: str, plane_text: str, *args: str):
    plane = os.path.join(tmp, "plane.txt")
    out = os.path.join(tmp, "out.json")
    with open(plane, "w", encoding="utf-8") as f:
        f.write(plane_text)
    code = cli(["--config", os.path.join(tmp, "missing.json"), *args[:1], plane, *args[1:], "--out", out])
    document = None
    if os.path.exists(out):
        with open(out, "r", encoding="utf-8") as f:
            document = json.load(f)
    return code, document


def _run_plain(tmp: str, *args: str, out_name: str = "out.csv"):
    out = os.path.join(tmp, out_name)
    code = cli(["--config", os.path.join(tmp, "missing.json"), *args, "--out", out])
    return code, out


def test_classify_vertex_s01():
    print("🧪 Testing classify...")
    with tempfile.TemporaryDirectory() as tmp:
        code, report = _run(tmp, "1 0 0 0\n1 1 1 1\n", "classify")
    assert code == 0
    assert report["k"] == 2
    assert report["label"]["name"] == "S01"
    assert report["label"]["meets_s01"] is True
    print("✅ Classify passed!")


def test_parse_errors_exit_2():
    with tempfile.TemporaryDirectory() as tmp:
        assert _run(tmp, "1 2 x\n", "classify")[0] == 2
        assert _run(tmp, "1 2 3 4\n1 2 3\n", "classify")[0] == 2
        assert cli(["--config", os.path.join(tmp, "missing.json"), "classify", os.path.join(tmp, "nope.txt")]) == 2


def test_rank_deficiency_exit_3():
    with tempfile.TemporaryDirectory() as tmp:
        code, report = _run(tmp, "1 2 3 4\n2 4 6 8\n", "classify")
    assert code == 3
    assert report is None


def test_member_exit_codes():
    print("🧪 Testing member...")
    with tempfile.TemporaryDirectory() as tmp:
        code, report = _run(tmp, "2 1 3/4\n", "member")
        assert code == 0 and report["status"] == "interior"
        code, report = _run(tmp, "1 1/2 1/10\n", "member")
        assert code == 1 and report["status"] == "exterior"
        code, report = _run(tmp, "1 1/2 1/4\n", "member")
        assert code == 0 and report["status"] == "boundary"
        assert report["certificate"]["kind"] == "curve"
    print("✅ Member passed!")


def test_verify_command():
    with tempfile.TemporaryDirectory() as tmp:
        code, out = _run_plain(tmp, "verify", "residual-arrangement", "--k", "1", "--samples", "1",
                               out_name="report.json")
        assert code == 0
        with open(out, "r", encoding="utf-8") as f:
            report = json.load(f)
        assert report["suite"] == "residual-arrangement"
        assert report["requested"] == 4
        assert _run_plain(tmp, "verify", "no-such-suite", "--k", "1")[0] == 2
        assert _run_plain(tmp, "verify", "residual-arrangement", "--k", "4")[0] == 2


def test_k2_strata_counts_figure():
    print("🧪 Testing figure data...")
    with tempfile.TemporaryDirectory() as tmp:
        code, out = _run_plain(tmp, "figure", "k2-strata-counts", "--seed", "3")
        assert code == 0
        with open(out, "r", encoding="utf-8", newline="") as f:
            rows = list(csv.DictReader(f))
    assert len(rows) == 13
    assert all(row["witnessed"] == "True" for row in rows)
    assert {row["name"] for row in rows} >= {"S01", "T0", "T1"}
    print("✅ Figure data passed!")


def test_pizza_slice_grid_agrees_with_hull():
    with tempfile.TemporaryDirectory() as tmp:
        code, out = _run_plain(tmp, "figure", "pizza-slice", "--samples", "5", "--seed", "1")
        assert code == 0
        with open(out, "r", encoding="utf-8", newline="") as f:
            rows = list(csv.DictReader(f))
    assert sum(row["kind"] == "arc" for row in rows) == 5
    for row in rows:
        if row["kind"] == "grid" and row["status"] in ("interior", "exterior"):
            assert (row["status"] == "interior") == (row["oracle"] == "True"), row


def test_unknown_figure_exit_2():
    with tempfile.TemporaryDirectory() as tmp:
        assert _run_plain(tmp, "figure", "no-such-figure")[0] == 2


def test_config_command_persists_run_defaults():
    print("🧪 Testing config command...")
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "run.json")
        assert cli(["--config", path, "config", "set", "seed=17", "samples=1", "mode=float", "tol-rank=1e-7"]) == 0
        with open(path, "r", encoding="utf-8") as f:
            saved = json.load(f)
        assert saved["seed"] == 17 and saved["mode"] == "float" and saved["tol_rank"] == 1e-7

        out = os.path.join(tmp, "report.json")
        assert cli(["--config", path, "verify", "residual-arrangement", "--k", "1", "--pole-radius", "0.01",
                    "--out", out]) == 0
        with open(out, "r", encoding="utf-8") as f:
            report = json.load(f)
        assert report["seed"] == 17 and report["samples"] == 1
        assert report["settings"] == {
            "mode": "float", "tol_rank": 1e-7, "tol_root": Config.TAU_ROOT, "pole_radius": 0.01,
        }

        assert cli(["--config", path, "config", "set", "samples=0"]) == 2
        assert cli(["--config", path, "config", "set", "colour=red"]) == 2
        assert cli(["--config", path, "config", "set"]) == 2
        assert cli(["--config", path, "config", "reset"]) == 0
        with open(path, "r", encoding="utf-8") as f:
            assert json.load(f)["seed"] == RunConfig().seed
        assert cli(["--config", path, "config", "show"]) == 0
    print("✅ Config command passed!")


def main():
    """Run all tests"""
    print("🎯 Starting command line tests")
    print("=" * 50)

    tests = [
        test_classify_vertex_s01,
        test_parse_errors_exit_2,
        test_rank_deficiency_exit_3,
        test_member_exit_codes,
        test_verify_command,
        test_k2_strata_counts_figure,
        test_pizza_slice_grid_agrees_with_hull,
        test_unknown_figure_exit_2,
        test_config_command_persists_run_defaults,
    ]

    passed = 0
    for test_func in tests:
        try:
            test_func()
            passed += 1
        except Exception as e:
            print(f"❌ Test {test_func.__name__} failed with error: {e}")

    print("=" * 50)
    print(f"📊 Test Results: {passed}/{len(tests)} tests passed")
    return passed == len(tests)


if __name__ == "__main__":
    success = main()
    exit(0 if success else 1)
