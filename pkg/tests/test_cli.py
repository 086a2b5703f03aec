import json
import shutil
from pathlib import Path

import pytest

from rgforest.cli import build_bench_scripts, main, parse_mix, run_oracle, UsageError

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def run(argv, tmp_path=None, name="out.json"):
    out = None
    if tmp_path is not None:
        out = tmp_path / name
        argv = argv + ["--json", str(out)]
    code = main(argv)
    doc = json.loads(out.read_text()) if out is not None and out.exists() else None
    return code, doc


def strip_timing(doc):
    doc = dict(doc)
    doc.pop("timing")
    return doc


def test_laws_subset(tmp_path, capsys):
    code, doc = run(["laws", "--law", "reify-test", "--law", "inv-test", "--samples", "3"], tmp_path)
    assert code == 0
    assert doc["schemaVersion"] == 1 and [l["law"] for l in doc["laws"]] == ["reify-test", "inv-test"]
    assert doc["laws"][0]["negative"]["counterexampleFound"]
    assert "reify-test" in capsys.readouterr().out


def test_laws_unknown_and_bad_flags():
    assert main(["laws", "--law", "no-such-law"]) == 2
    assert main(["laws", "--states", "17"]) == 2
    assert main(["laws", "--bound", "7"]) == 2
    assert main(["laws", "--workers", "0"]) == 2
    assert main(["nonsense"]) == 2


def test_laws_json_is_deterministic(tmp_path):
    argv = ["laws", "--law", "reify-seq", "--law", "reify-spec", "--samples", "4", "--seed", "3"]
    _, a = run(argv, tmp_path, "a.json")
    _, b = run(argv, tmp_path, "b.json")
    assert strip_timing(a) == strip_timing(b)


def test_laws_workers_match_serial(tmp_path):
    argv = ["laws", "--law", "inv-distrib-par", "--law", "reify-guar", "--samples", "3"]
    _, a = run(argv, tmp_path, "a.json")
    _, b = run(argv + ["--workers", "2"], tmp_path, "b.json")
    assert strip_timing(a) == strip_timing(b)


def test_seed_environment_override(tmp_path, monkeypatch):
    monkeypatch.setenv("RG_FOREST_SEED", "9")
    _, doc = run(["oracle", "--n", "4", "--ops", "50", "--seed", "1"], tmp_path)
    assert doc["config"]["seed"] == 9
    monkeypatch.setenv("RG_FOREST_SEED", "nine")
    assert main(["oracle", "--n", "4", "--ops", "5"]) == 2


def test_explore_exit_codes(tmp_path, capsys):
    assert main(["explore", "--scenario", str(SCENARIOS / "equate_equate_test.json")]) == 0
    code, doc = run(["explore", "--scenario", str(SCENARIOS / "symmetric_unordered.json")], tmp_path)
    assert code == 1
    assert {"guarantee", "coupling-invariant"} <= set(doc["violationCounts"])
    assert main(["explore", "--scenario", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 2, "threads": [[{"op": "merge", "x": 0}]]}')
    assert main(["explore", "--scenario", str(bad)]) == 2
    bad.write_text("{not json")
    assert main(["explore", "--scenario", str(bad)]) == 2
    tight = tmp_path / "tight.json"
    tight.write_text(json.dumps({"n": 3, "threads": [[{"op": "equate", "x": 0, "y": 1}],
                                                     [{"op": "equate", "x": 1, "y": 2}]], "stepBound": 2}))
    assert main(["explore", "--scenario", str(tight)]) == 3


def test_explore_json_is_deterministic(tmp_path):
    src = SCENARIOS / "random_mix.json"
    _, a = run(["explore", "--scenario", str(src)], tmp_path, "a.json")
    _, b = run(["explore", "--scenario", str(src)], tmp_path, "b.json")
    assert strip_timing(a) == strip_timing(b) and a["schemaVersion"] == 1


def test_oracle(tmp_path, capsys):
    assert main(["oracle", "--n", "1", "--ops", "100"]) == 0
    assert main(["oracle", "--n", "8", "--ops", "500", "--seed", "4"]) == 0
    assert main(["oracle", "--n", "65"]) == 2
    code, doc = run(["oracle", "--n", "8", "--ops", "2000", "--inject-fault", "skip-cleanup-last-write"], tmp_path)
    assert code == 1 and "opIndex" in doc["result"]
    assert "MISMATCH at op" in capsys.readouterr().out
    assert main(["oracle", "--n", "8", "--ops", "2000", "--inject-fault", "cleanup-wrong-target"]) == 1


def test_oracle_function_reports_counts():
    ok, info = run_oracle(6, 300, 2)
    assert ok and sum(info["counts"].values()) == 300


def test_bench(tmp_path):
    code, doc = run(["bench", "--threads", "3", "--n", "12", "--ops", "3000", "--mix", "2:1:1"], tmp_path)
    assert code == 0 and doc["ok"] and doc["timing"]["opsPerSecond"] > 0
    assert main(["bench", "--threads", "1", "--n", "8", "--ops", "500", "--mix", "1:1:1"]) == 0
    assert main(["bench", "--mix", "1:1:2"]) == 2
    assert main(["bench", "--mix", "1:x:0"]) == 2
    assert main(["bench", "--threads", "0"]) == 2


def test_bench_scripts_keep_cleanup_on_one_thread():
    scripts = build_bench_scripts(4, 10, 400, (1, 1, 1), 0)
    assert sum(len(s) for s in scripts) == 400
    assert all(p.kind.value != "clean_up" for s in scripts[1:] for p in s)
    assert any(p.kind.value == "clean_up" for p in scripts[0])


def test_parse_mix():
    assert parse_mix("1:1:0") == (1, 1, 0)
    for bad in ("1:1", "0:0:1", "-1:1:0", "1:1:3"):
        with pytest.raises(UsageError):
            parse_mix(bad)


@pytest.mark.skipif(shutil.which("rgforest") is None, reason="console script not installed")
def test_console_script(tmp_path):
    import subprocess
    r = subprocess.run(["rgforest", "oracle", "--n", "3", "--ops", "20"], capture_output=True, text=True)
    assert r.returncode == 0
