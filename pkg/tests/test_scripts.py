"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
"""

import csv
import json
import os

from click.testing import CliRunner  # type: ignore

from midparent.config import Config, DiscretizationConfig
from midparent.limit import ConvergenceReport
from midparent.scripts import mp_converge
from midparent.scripts.midparent import main
from midparent.verify import check_moments

FAST = """
[model]
preset = "quadratic"

[discretization]
half_width = 4.0
sample_count = 129
density_half_width = 3.0
density_count = 2048

[solver]
eps = {eps}
"""


def write_config(folder: str, text: str) -> str:
    path = os.path.join(folder, "run.toml")
    with open(path, "w") as OH:
        OH.write(text)
    return path


def test_stationary(tmp_path):
    path = write_config(tmp_path, FAST.format(eps=0.1))
    out = os.path.join(tmp_path, "out")
    result = CliRunner().invoke(main, ["stationary", "-c", path, "-o", out])
    assert result.exit_code == 0, result.output
    for name in ("solution.json", "U.csv", "F.csv"):
        assert os.path.isfile(os.path.join(out, name))

    with open(os.path.join(out, "solution.json")) as IH:
        bundle = json.load(IH)
    assert bundle["eps"] == 0.1
    assert abs(bundle["lambda"] - 1) <= 0.1
    assert bundle["diagnostics"]["certificate"] < 1e-4

    with open(os.path.join(out, "U.csv")) as IH:
        header = next(csv.reader(IH))
    assert header == ["z", "value", "d1", "d2"]


def test_stationary_failures(tmp_path):
    path = write_config(tmp_path, FAST.format(eps=0.9))
    result = CliRunner().invoke(main, ["stationary", "-c", path, "-o", str(tmp_path)])
    assert result.exit_code == 1

    path = write_config(tmp_path, "[solver]\neps = 0.1\n")
    result = CliRunner().invoke(main, ["stationary", "-c", path, "-o", str(tmp_path)])
    assert result.exit_code == 1
    assert not os.path.isfile(os.path.join(tmp_path, "solution.json"))


def test_march_dt_bound(tmp_path):
    text = FAST.format(eps=0.1) + "\n[march]\ndt = 1.0\n"
    path = write_config(tmp_path, text)
    result = CliRunner().invoke(main, ["march", "-c", path, "-o", str(tmp_path)])
    assert result.exit_code == 1
    assert not os.path.isfile(os.path.join(tmp_path, "march.json"))


def test_verify(tmp_path):
    path = write_config(tmp_path, '[model]\npreset = "quadratic"\n')
    result = CliRunner().invoke(main, ["verify", "-c", path, "-o", str(tmp_path)])
    assert result.exit_code == 0, result.output
    with open(os.path.join(tmp_path, "verify.json")) as IH:
        report = json.load(IH)
    assert report["passed"]
    assert len(report["items"]) == 9


def fixed_report(growth: float) -> ConvergenceReport:
    report = ConvergenceReport()
    for eps, error in ((0.1, 1e-2), (0.05, 1e-2 * growth)):
        report.rows.append({column: error for column in report.columns})
        report.rows[-1]["eps"] = eps
    return report


def test_converge_exit_code(tmp_path, monkeypatch):
    path = write_config(tmp_path, FAST.format(eps=0.1))
    monkeypatch.setattr(mp_converge, "solve_sweep", lambda model, cfg, threads: [])
    for growth, code, flag in ((0.5, 0, "true"), (2.0, 1, "false")):
        monkeypatch.setattr(
            mp_converge, "convergence_report", lambda *a, g=growth, **k: fixed_report(g)
        )
        out = os.path.join(tmp_path, f"out_{code}")
        result = CliRunner().invoke(main, ["converge", "-c", path, "-o", out])
        assert result.exit_code == code, result.output
        with open(os.path.join(out, "converge.csv")) as IH:
            rows = list(csv.reader(IH))
        assert rows[0][0] == "eps"
        assert len(rows) == 5
        assert rows[-1] == ["pass", flag]


def test_check_moments_coarse_rule():
    passed, detail = check_moments(Config(discretization=DiscretizationConfig(quad_order=2)))
    assert not passed
    assert "degree 9" in detail
