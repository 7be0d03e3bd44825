"""Config ingestion tests: strict schema, round trips, bundled files."""

import numpy as np
import pytest
import yaml

from mfes import (
    CampaignConfig,
    ConfigError,
    PenaltyParams,
    config_from_dict,
    config_to_dict,
    load_config,
    make_objective,
    shipped_configs,
)

from conftest import tiny_bench_config


MINIMAL = {
    "scenario": "bench1d",
    "model": {
        "k_sim": {"variance": 4.0, "alpha": 0.25, "lengthscales": [0.125]},
        "k_eps": {"variance": 4.0, "alpha": 0.25, "lengthscales": [0.25]},
    },
}


def deep(d):
    return yaml.safe_load(yaml.safe_dump(d))


def test_minimal_config_defaults():
    cfg = config_from_dict(deep(MINIMAL))
    assert cfg.scenario == "bench1d"
    assert cfg.master_seed == 0
    assert cfg.plane == "summed"
    assert cfg.objective_transform == "identity"
    assert cfg.penalty is None
    assert cfg.termination.velocity == 0.9


def test_round_trip_preserves_everything():
    cfg = tiny_bench_config(seed=17)
    assert config_from_dict(deep(config_to_dict(cfg))) == cfg


def test_round_trip_with_penalty_and_transform():
    base = tiny_bench_config()
    cfg = CampaignConfig(
        scenario=base.scenario,
        model=base.model,
        acquisition=base.acquisition,
        termination=base.termination,
        penalty=PenaltyParams(x_max=np.array([1.0]), s=5.0, gamma=3.0, lam=0.5),
        plane="alpha",
        objective_transform="log",
        master_seed=3,
    )
    back = config_from_dict(deep(config_to_dict(cfg)))
    assert back.plane == "alpha"
    assert back.objective_transform == "log"
    assert back.master_seed == 3
    assert np.array_equal(back.penalty.x_max, cfg.penalty.x_max)
    assert back.penalty.s == 5.0


def test_unknown_keys_rejected_everywhere():
    for mutate in (
        lambda d: d.update(frobnicate=1),
        lambda d: d["model"].update(bias=1),
        lambda d: d["model"]["k_sim"].update(nu=1.5),
        lambda d: d.update(acquisition={"beam_width": 2}),
        lambda d: d.update(termination={"patience": 3}),
        lambda d: d.update(penalty={"x_max": [1.0], "weight": 2}),
    ):
        d = deep(MINIMAL)
        mutate(d)
        with pytest.raises(ConfigError):
            config_from_dict(d)


def test_missing_required_keys():
    with pytest.raises(ConfigError):
        config_from_dict({"model": deep(MINIMAL)["model"]})  # no scenario
    with pytest.raises(ConfigError):
        config_from_dict({"scenario": "bench1d"})  # no model
    d = deep(MINIMAL)
    del d["model"]["k_eps"]
    with pytest.raises(ConfigError):
        config_from_dict(d)
    d = deep(MINIMAL)
    del d["model"]["k_sim"]["alpha"]
    with pytest.raises(ConfigError):
        config_from_dict(d)


def test_type_errors_rejected():
    d = deep(MINIMAL)
    d["model"]["noise_sim"] = "loud"
    with pytest.raises(ConfigError):
        config_from_dict(d)
    d = deep(MINIMAL)
    d["acquisition"] = {"grid_size": 8.5}
    with pytest.raises(ConfigError):
        config_from_dict(d)
    d = deep(MINIMAL)
    d["model"]["k_sim"]["lengthscales"] = "wide"
    with pytest.raises(ConfigError):
        config_from_dict(d)
    d = deep(MINIMAL)
    d["scenario"] = 7
    with pytest.raises(ConfigError):
        config_from_dict(d)


def test_bad_enum_values_rejected():
    d = deep(MINIMAL)
    d["plane"] = "diagonal"
    with pytest.raises(ConfigError):
        config_from_dict(d)
    d = deep(MINIMAL)
    d["objective_transform"] = "exp"
    with pytest.raises(ConfigError):
        config_from_dict(d)


def test_invalid_domain_values_surface_as_config_errors():
    d = deep(MINIMAL)
    d["model"]["k_sim"]["variance"] = -2.0
    with pytest.raises(ConfigError):
        config_from_dict(d)
    d = deep(MINIMAL)
    d["termination"] = {"velocity": 2.0}
    with pytest.raises(ConfigError):
        config_from_dict(d)


def test_load_config_from_file(tmp_path):
    path = tmp_path / "c.yaml"
    path.write_text(yaml.safe_dump(deep(MINIMAL)))
    cfg = load_config(path)
    assert cfg.scenario == "bench1d"


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.yaml")
    bad = tmp_path / "bad.yaml"
    bad.write_text("scenario: [unclosed")
    with pytest.raises(ConfigError):
        load_config(bad)
    empty = tmp_path / "empty.yaml"
    empty.write_text("")
    with pytest.raises(ConfigError):
        load_config(empty)


def test_shipped_configs_load_and_resolve():
    names = shipped_configs()
    assert set(names) == {"ankle2d", "arm_ankle4d", "bench1d"}
    for name in names:
        cfg = load_config(name)  # by bundled name
        obj = make_objective(cfg)
        assert obj.bounds.dim == len(cfg.model.k_sim.lengthscales)


def test_shipped_golden_configs_carry_expected_scenarios():
    assert load_config("ankle2d").scenario == "ankle2d"
    assert load_config("ankle2d").objective_transform == "log"
    assert load_config("bench1d").objective_transform == "identity"
    assert load_config("arm_ankle4d").termination.max_iterations == 310
