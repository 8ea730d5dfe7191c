"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
"""

import json
import multiprocessing as mp
import os

import numpy as np  # type: ignore

from midparent.config import Config, DiscretizationConfig, MarchConfig, ModelConfig
from midparent.density import DensityGrid, DensityState
from midparent.errors import ConfigurationError
from midparent.io import march_bundle, write_json, write_trace
from midparent.march import MarchResult
from midparent.runner import Runner, march_all


def test_Runner_threads():
    assert Runner(0).threads == 1
    assert Runner(-3).threads == 1
    assert Runner(10 ** 6).threads == mp.cpu_count()


def test_Runner_map():
    jobs = [-3, 1, -2, 5]
    assert Runner(1).map(abs, jobs) == [3, 1, 2, 5]
    assert Runner(2).map(abs, jobs) == [3, 1, 2, 5]


def test_march_all_dt_bound():
    cfg = Config(
        model=ModelConfig(preset="quadratic"),
        discretization=DiscretizationConfig(density_count=1024),
        march=MarchConfig(dt=1.0),
    )
    try:
        march_all(cfg.build_model(), cfg)
    except ConfigurationError as e:
        assert "stability bound" in str(e)
    else:
        raise AssertionError("dt above dt_max must be rejected")


def test_march_bundle(tmp_path):
    grid = DensityGrid(3.0, 1024)
    runs = [
        MarchResult(DensityState.gaussian(grid, 0.1, center=c), 1.0, center=c)
        for c in (-1.0, 1.0)
    ]
    bundle = march_bundle(runs, [1e-9, float("nan")])
    assert len(bundle["runs"]) == 2
    assert bundle["runs"][1]["center"] == 1.0
    assert np.isclose(bundle["distances"][0]["l1"], 2)
    assert "distances" not in march_bundle(runs[:1], [1e-9])

    path = os.path.join(tmp_path, "march.json")
    write_json(path, bundle)
    with open(path) as IH:
        assert json.load(IH)["runs"][1]["certificate"] is None

    path = os.path.join(tmp_path, "trace.csv")
    write_trace(path, [(0.1, 1.0, 1e-3), (0.2, 1.0, 1e-4)])
    table = np.loadtxt(path, delimiter=",", skiprows=1)
    assert table.shape == (2, 3)
