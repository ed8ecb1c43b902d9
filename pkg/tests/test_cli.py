import hashlib
import json
import shutil
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from qardl import __version__
from qardl.cli import main

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


def tree_hash(root: Path) -> str:
    h = hashlib.sha256()
    for p in sorted(root.rglob("*")):
        if p.is_file():
            h.update(p.relative_to(root).as_posix().encode())
            h.update(p.read_bytes())
    return h.hexdigest()


def errors(stderr: str) -> list[dict]:
    return [json.loads(line) for line in stderr.splitlines() if line.strip()]


@pytest.fixture
def small_config(tmp_path):
    """A 250-day synthetic panel with two regressors and a pinned lag spec."""
    rng = np.random.default_rng(0)
    n = 250
    x = np.cumsum(rng.standard_normal(n)) * 0.05
    z = np.cumsum(rng.standard_normal(n)) * 0.05
    y = np.zeros(n)
    for t in range(1, n):
        y[t] = y[t - 1] - 0.3 * (y[t - 1] - 0.8 * x[t - 1]) + 0.02 * rng.standard_normal()
    dates = np.datetime64("2021-01-04") + np.arange(n)
    lines = ["date,OIL,EPU,VIX"] + [f"{d},{float(np.exp(a))!r},{float(np.exp(b))!r},{float(np.exp(c))!r}"
                                     for d, a, b, c in zip(dates, y + 4, x + 5, z + 3)]
    (tmp_path / "panel.csv").write_text("\n".join(lines) + "\n")
    cfg = {
        "input": "panel.csv",
        "variables": {"OIL": "dependent", "EPU": "epu", "VIX": "panic"},
        "log": ["OIL", "EPU", "VIX"],
        "lags": {"pinned": {"p": 2, "q": {"epu": 1, "panic": 0}}},
        "quantiles": [0.25, 0.5, 0.75],
        "out": "unused",
        "seed": 3,
    }
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    return p


class TestCommands:
    def test_describe(self, small_config, tmp_path, capsys):
        assert main(["describe", "--config", str(small_config), "--out", str(tmp_path / "d")]) == 0
        out = capsys.readouterr().out
        assert "Descriptive statistics" in out and "OIL" in out
        assert sorted(p.name for p in (tmp_path / "d").iterdir()) == ["describe.csv", "describe.json", "describe.txt"]

    def test_unitroot_trend_flag(self, small_config, tmp_path, capsys):
        assert main(["unitroot", "--config", str(small_config), "--out", str(tmp_path / "u"), "--trend"]) == 0
        doc = json.loads((tmp_path / "u" / "unitroot.json").read_text())
        assert doc["deterministic"] == "constant+trend"
        assert [r["variable"] for r in doc["rows"]] == ["OIL", "EPU", "VIX"]

    @pytest.mark.parametrize("cmd, linear, nq", [("fit-ardl", True, 0), ("fit-qardl", False, 3), ("fit", True, 3)])
    def test_fit_modes(self, cmd, linear, nq, small_config, tmp_path, capsys):
        assert main([cmd, "--config", str(small_config), "--out", str(tmp_path / "f")]) == 0
        doc = json.loads((tmp_path / "f" / "fit.json").read_text())
        assert (doc["linear"] is not None) == linear
        assert len(doc["quantiles"]) == nq
        assert doc["meta"]["lag_spec"] == "pinned" and doc["meta"]["panel_length"] == 250
        assert (tmp_path / "f" / "bands.csv").exists() == (nq > 0)
        assert "Error-correction estimates" in capsys.readouterr().out

    def test_flag_overrides(self, small_config, tmp_path):
        args = ["fit-qardl", "--config", str(small_config), "--out", str(tmp_path / "f"),
                "--quantiles", "0.1,0.9", "--se", "bootstrap", "--seed", "5"]
        assert main(args) == 0
        doc = json.loads((tmp_path / "f" / "fit.json").read_text())
        assert [r["gamma"] for r in doc["quantiles"]] == [0.1, 0.9]
        assert doc["se_method"] == "bootstrap" and doc["meta"]["seed"] == 5

    def test_selected_lags_and_stationarity_check(self, small_config, tmp_path, capsys):
        cfg = json.loads(small_config.read_text())
        cfg["lags"] = {"select": {"max_p": 2, "max_q": 1}}
        small_config.write_text(json.dumps(cfg))
        assert main(["fit-ardl", "--config", str(small_config), "--out", str(tmp_path / "f"),
                     "--check-stationarity"]) == 0
        doc = json.loads((tmp_path / "f" / "fit.json").read_text())
        assert doc["meta"]["lag_spec"] == "selected by bic"
        assert 1 <= doc["spec"]["p"] <= 2

    def test_simulate(self, tmp_path, capsys):
        cfg = {"seed": 1, "simulation": {"dgp": {"rho": -0.3, "long_run": {"epu": 1.0}, "n": 200},
                                         "replications": 10}}
        p = tmp_path / "sim.json"
        p.write_text(json.dumps(cfg))
        assert main(["simulate", "--config", str(p), "--out", str(tmp_path / "s")]) == 0
        captured = capsys.readouterr()
        assert "Recovery study: 10 replications" in captured.out
        (warning,) = errors(captured.err)
        assert warning["level"] == "warning" and "unreliable" in warning["message"]

    def test_report_regenerates_artifacts(self, small_config, tmp_path, capsys):
        first = tmp_path / "a"
        assert main(["fit", "--config", str(small_config), "--out", str(first)]) == 0
        capsys.readouterr()
        second = tmp_path / "b"
        assert main(["report", str(first / "fit.json"), "--out", str(second)]) == 0
        assert "Error-correction estimates" in capsys.readouterr().out
        assert tree_hash(first) == tree_hash(second)

    def test_runs_are_byte_identical(self, small_config, tmp_path):
        for d in ("r1", "r2"):
            assert main(["fit", "--config", str(small_config), "--out", str(tmp_path / d)]) == 0
        assert tree_hash(tmp_path / "r1") == tree_hash(tmp_path / "r2")

    def test_demo_config(self, tmp_path, capsys):
        assert main(["fit-ardl", "--config", str(CONFIGS / "demo.json"), "--out", str(tmp_path)]) == 0
        doc = json.loads((tmp_path / "fit.json").read_text())
        assert doc["names"]["dependent"] == "WTI"


class TestErrors:
    def run(self, argv, capsys):
        code = main(argv)
        (rec,) = errors(capsys.readouterr().err)
        assert rec["level"] == "error" and rec["exit_code"] == code
        return code, rec

    def test_missing_config_flag(self, capsys):
        code, rec = self.run(["describe"], capsys)
        assert code == 2 and "--config" in rec["message"]

    def test_unreadable_config(self, tmp_path, capsys):
        code, rec = self.run(["fit", "--config", str(tmp_path / "nope.json")], capsys)
        assert code == 2 and rec["error"] == "ConfigError"

    def test_invalid_override(self, small_config, capsys):
        code, _ = self.run(["fit", "--config", str(small_config), "--quantiles", "0.5,1.5"], capsys)
        assert code == 2

    def test_simulate_without_section(self, small_config, tmp_path, capsys):
        code, _ = self.run(["simulate", "--config", str(small_config), "--out", str(tmp_path)], capsys)
        assert code == 2

    def test_duplicate_date_reports_path_and_line(self, small_config, tmp_path, capsys):
        csv_path = tmp_path / "panel.csv"
        lines = csv_path.read_text().splitlines()
        lines.insert(5, lines[2])
        csv_path.write_text("\n".join(lines) + "\n")
        code, rec = self.run(["describe", "--config", str(small_config), "--out", str(tmp_path / "o")], capsys)
        assert code == 3 and rec["error"] == "DataError"
        assert rec["line"] == 6 and rec["path"].endswith("panel.csv")

    def test_empty_panel(self, small_config, tmp_path, capsys):
        (tmp_path / "panel.csv").write_text("date,OIL,EPU,VIX\n")
        code, rec = self.run(["fit", "--config", str(small_config), "--out", str(tmp_path / "o")], capsys)
        assert code == 3

    def test_missing_input_file(self, small_config, tmp_path, capsys):
        (tmp_path / "panel.csv").unlink()
        code, _ = self.run(["describe", "--config", str(small_config), "--out", str(tmp_path / "o")], capsys)
        assert code == 3

    def test_estimation_failure(self, small_config, tmp_path, capsys):
        # two identical regressors make every design singular
        csv_path = tmp_path / "panel.csv"
        rows = [line.split(",") for line in csv_path.read_text().splitlines()]
        body = [",".join(r[:3] + [r[2]]) for r in rows[1:]]
        csv_path.write_text("\n".join([",".join(rows[0])] + body) + "\n")
        code, rec = self.run(["fit-qardl", "--config", str(small_config), "--out", str(tmp_path / "o")], capsys)
        assert code == 4 and "every quantile" in rec["message"]
        code, rec = self.run(["fit-ardl", "--config", str(small_config), "--out", str(tmp_path / "o")], capsys)
        assert code == 4 and rec["error"] == "RankDeficiencyError"

    def test_report_bad_documents(self, tmp_path, capsys):
        p = tmp_path / "x.json"
        p.write_text("{not json")
        code, _ = self.run(["report", str(p)], capsys)
        assert code == 3
        p.write_text(json.dumps({"schema": "other/1", "kind": "fit"}))
        code, _ = self.run(["report", str(p)], capsys)
        assert code == 2

    def test_argparse_usage_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["fit", "--se", "iid"])
        assert info.value.code == 2


def test_module_and_console_entry_points(tmp_path):
    r = subprocess.run([sys.executable, "-m", "qardl", "--version"], capture_output=True, text=True, check=True)
    assert r.stdout.strip() == f"qardl {__version__}"
    exe = shutil.which("qardl")
    if exe is None:
        pytest.skip("console script not installed")
    r = subprocess.run([exe, "describe"], capture_output=True, text=True)
    assert r.returncode == 2
    assert json.loads(r.stderr)["exit_code"] == 2
