"""CLI surface: exit codes, determinism, cache transparency."""

import json
import subprocess
import sys

import pytest

from heckecells.cli import main


def run_main(argv):
    return main(argv)


def test_usage_errors():
    assert run_main([]) == 2
    assert run_main(["cells", "--type", "Z9"]) == 2
    assert run_main(["strat"]) == 2
    assert run_main(["jring"]) == 2
    assert run_main(["strat", "verify", "--type", "A2", "--e", "0"]) == 2
    assert run_main(["strat", "verify", "--type", "A2", "--e", "3", "--format", "tsv"]) == 2
    assert run_main(["cells", "--type", "A2", "--lambda", "x9"]) == 2


def test_cells_json_and_tsv(tmp_path):
    out = tmp_path / "cells.json"
    assert run_main(["cells", "--type", "A2", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["left_cells"]) == 4
    assert doc["two_sided_count"] == 3
    assert doc["tool"]["name"] == "heckecells"
    out_tsv = tmp_path / "cells.tsv"
    assert run_main(["cells", "--type", "A1", "--format", "tsv", "--out", str(out_tsv)]) == 0
    lines = out_tsv.read_text().strip().split("\n")
    assert len(lines) == 3  # header + 2 cells


def test_cells_with_lambda(tmp_path):
    out = tmp_path / "q.json"
    assert run_main(["cells", "--type", "A2", "--lambda", "s1", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["qperm"]["dim"] == 3
    assert doc["config"]["lambda"] == ["s1"]


def test_strat_verify_exit_codes(tmp_path):
    out = tmp_path / "rep.json"
    assert run_main(["strat", "verify", "--type", "A2", "--e", "3", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["pass"] is True
    assert doc["config"] == {
        "type": "A2",
        "e": 3,
        "variant": "first",
        "section_budget": 512,
    }
    # e=2 runs observationally and exits 0
    assert run_main(["strat", "verify", "--type", "A2", "--e", "2", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["observations"] == []


def test_strat_budget_exit_code(tmp_path):
    out = tmp_path / "partial.json"
    code = run_main(
        ["strat", "verify", "--type", "A3", "--e", "3", "--section-budget", "1",
         "--out", str(out)]
    )
    assert code == 3
    doc = json.loads(out.read_text())
    assert doc["pass"] is False
    assert "budget" in doc["error"]


def test_jring_verify(tmp_path):
    out = tmp_path / "j.json"
    assert run_main(["jring", "verify", "--type", "A2", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["varpi_t1_rank"] == doc["group_order"] == 6
    assert doc["intertwining_violations"] == []


def test_cache_on_off_identical(tmp_path):
    cache = tmp_path / "cache"
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    c = tmp_path / "c.json"
    assert run_main(["cells", "--type", "B2", "--cache-dir", str(cache), "--out", str(a)]) == 0
    assert (cache / "B2.kl.json").exists()
    assert run_main(["cells", "--type", "B2", "--cache-dir", str(cache), "--out", str(b)]) == 0
    assert run_main(["cells", "--type", "B2", "--out", str(c)]) == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_cache_dir_from_environment(tmp_path, monkeypatch):
    cache = tmp_path / "envcache"
    monkeypatch.setenv("HECKECELLS_CACHE_DIR", str(cache))
    out = tmp_path / "o.json"
    assert run_main(["cells", "--type", "A2", "--out", str(out)]) == 0
    assert (cache / "A2.kl.json").exists()


def _fresh(args):
    """Run the CLI in a fresh interpreter (no warm in-process caches)."""
    return subprocess.run(
        [sys.executable, "-m", "heckecells.cli", *args],
        capture_output=True,
        timeout=600,
    )


@pytest.mark.parametrize(
    "args",
    [
        ["cells", "--type", "A3"],
        ["jring", "verify", "--type", "B2"],
        ["strat", "verify", "--type", "A2", "--e", "3"],
    ],
)
def test_fresh_process_determinism(args):
    r1 = _fresh(args)
    r2 = _fresh(args)
    assert r1.returncode == r2.returncode == 0
    assert r1.stdout == r2.stdout
    assert r1.stdout  # nonempty output


def test_version_flag():
    r = _fresh(["--version"])
    assert r.returncode == 0
    assert b"heckecells" in r.stdout
