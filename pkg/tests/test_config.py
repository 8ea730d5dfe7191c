"""
@author: Gabriele Girelli
@contact: gigi.ga90@gmail.com
"""

import os

import numpy as np  # type: ignore

from midparent.config import Config, ModelConfig, load_config, parse_config
from midparent.errors import ConfigurationError, MortalityError
from midparent.mortality import MortalityModel


def assert_config_error(raw, message):
    try:
        parse_config(raw)
    except ConfigurationError as e:
        assert message in str(e), str(e)
    else:
        raise AssertionError(f"expected a configuration error for {raw}")


def test_parse_config_defaults():
    config = parse_config({"model": {"preset": "quadratic"}})
    assert config.model.preset == "quadratic"
    assert config.solver.eps == 0.1
    assert config.solver.alpha == 0.4
    assert config.discretization.sample_count == 513
    assert config.discretization.quad_order == 24
    assert config.march.dt is None
    assert config.sweep.eps == (0.2, 0.1, 0.05, 0.025)
    assert config.half_width(config.build_model()) == 6


def test_parse_config_errors():
    assert_config_error({"model": {"preset": "quadratic", "color": 1}}, "model.color")
    assert_config_error({"model": {"preset": "quadratic"}, "plot": {}}, "plot")
    assert_config_error({"solver": {"eps": 0.1}}, "missing key: model.preset")
    assert_config_error({"model": {}}, "missing key: model.preset")


def test_parse_config_coercion():
    config = parse_config(
        {
            "model": {"coefficients": [0, 0, 1]},
            "solver": {"eps": 1, "max_iter": 50},
            "sweep": {"eps": [0.2, 0.1]},
            "march": {"centers": [-1, 1]},
        }
    )
    assert config.model.coefficients == (0.0, 0.0, 1.0)
    assert isinstance(config.solver.eps, float)
    assert config.solver.max_iter == 50
    assert config.sweep.eps == (0.2, 0.1)
    assert config.march.centers == (-1.0, 1.0)


def test_Config_with_eps():
    config = Config(model=ModelConfig(preset="cubic_perturbed"))
    other = config.with_eps(0.05)
    assert other.solver.eps == 0.05
    assert config.solver.eps == 0.1
    assert other.model == config.model


def test_load_config(tmp_path):
    path = os.path.join(tmp_path, "run.toml")
    with open(path, "w") as OH:
        OH.write('[model]\npreset = "double_well"\nminimum = "right"\n')
        OH.write("[solver]\neps = 0.05\n")
    config = load_config(path)
    assert config.solver.eps == 0.05
    model = config.build_model()
    assert abs(model.critical_point - 0.967) < 1e-3

    with open(path, "w") as OH:
        OH.write("[model\npreset = quadratic\n")
    try:
        load_config(path)
    except ConfigurationError as e:
        assert "malformed" in str(e)
    else:
        raise AssertionError("malformed files must be rejected")

    try:
        load_config(os.path.join(tmp_path, "missing.toml"))
    except ConfigurationError as e:
        assert "not found" in str(e)
    else:
        raise AssertionError("missing files must be rejected")


def test_ModelConfig_build():
    try:
        ModelConfig(preset="double_well", minimum="middle").build()
    except ConfigurationError as e:
        assert "left or right" in str(e)
    else:
        raise AssertionError("unknown minimum must be rejected")

    try:
        ModelConfig(preset="quadratic", critical_point=0.5).build()
    except ConfigurationError:
        pass
    else:
        raise AssertionError("presets fix their own critical point")

    model = ModelConfig(coefficients=(1.0, 0.25, -2.0, 0.0, 1.0), minimum="right").build()
    assert abs(model.critical_point - 0.967) < 1e-3
    assert model.window == MortalityModel.DEFAULT_WINDOW

    model = ModelConfig(coefficients=(0.0, 0.0, 0.5), critical_point=0.0).build(2.0)
    assert model.window == 2
    assert np.isclose(model.mu0, 1)

    try:
        ModelConfig(coefficients=(0.0, 1.0)).build()
    except MortalityError:
        pass
    else:
        raise AssertionError("a linear model has no minimum")
