from __future__ import annotations

import json
import subprocess
import sys

import pytest

from gsa import cli
from gsa.modular import ConsistencyError


def run(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_atlas_markdown(capsys):
    code, out, _ = run(["atlas", "--group", "D:10@aut=natural"], capsys)
    assert code == 0
    assert "| 2 | 3 | 1 | 0 | 1 | 1^1 2^1 | 0 | 5A,5B |" in out


def test_atlas_json_and_cache(tmp_path, capsys):
    args = ["atlas", "--group", "D:6", "--format", "json", "--cache", str(tmp_path)]
    code, first, _ = run(args, capsys)
    assert code == 0 and json.loads(first)["schema_version"] == 1
    assert len(list(tmp_path.iterdir())) == 1
    code, second, _ = run(args, capsys)
    assert code == 0 and second == first


def test_atlas_config_file(tmp_path, capsys):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"format": "csv", "congruence-cap": 8}))
    out = tmp_path / "o.csv"
    code, _, _ = run(["atlas", "--group", "Sn:4", "--config", str(conf), "--out", str(out)], capsys)
    assert code == 0
    assert "skipped_cap" in out.read_text()
    code, text, _ = run(["atlas", "--group", "Sn:4", "--config", str(conf), "--format", "md"], capsys)
    assert text.startswith("## Sn:4")


def test_usage_errors(capsys):
    assert run(["atlas", "--group", "D:7"], capsys)[0] == 2
    assert run(["atlas"], capsys)[0] == 2
    assert run(["markoff", "--p", "9"], capsys)[0] == 2
    assert run(["markoff", "--p-range", "5-9"], capsys)[0] == 2
    assert run(["atlas", "--group", "perm:/nonexistent/file"], capsys)[0] == 2


def test_cap_exit(capsys):
    code, _, err = run(["atlas", "--group", "SL2:7", "--max-order", "100"], capsys)
    assert code == 3 and "cap" in err


def test_consistency_exit(monkeypatch, capsys):
    def boom(*a, **k):
        raise ConsistencyError("non-integral genus")

    monkeypatch.setattr("gsa.atlas.run_atlas", boom)
    code, _, err = run(["atlas", "--group", "D:6"], capsys)
    assert code == 4 and "consistency" in err


def test_markoff(capsys):
    code, out, _ = run(["markoff", "--p", "7", "--crosscheck"], capsys)
    assert code == 0
    assert "points: 28" in out and "markoff_count=28 epi_trace_count=28" in out
    code, out, _ = run(["markoff", "--p-range", "5..13"], capsys)
    assert code == 0 and len(out.splitlines()) == 1 + 4


def test_epi_list(capsys):
    code, out, _ = run(["epi", "--group", "D:6", "--list"], capsys)
    assert code == 0
    assert "|Epi^ext| = 3" in out and len(out.splitlines()) == 4


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "gsa.cli", "markoff", "--p", "5"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0 and "points: 40" in r.stdout
