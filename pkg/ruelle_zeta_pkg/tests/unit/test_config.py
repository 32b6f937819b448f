import json

import pytest

from ruelle_zeta.config import RunConfig, config_to_json, load_config, merge_configs
from ruelle_zeta.errors import ConfigError


def test_load_default_config():
    config = load_config()
    assert config.system.d_over_r == 6.0
    assert config.expansion.n_max == 8
    assert config.expansion.domain == "fundamental"
    assert config.scan.rectangle == (-1.0, 0.5, 0.0, 20.0)


def test_round_trip_through_dict():
    config = load_config()
    assert RunConfig.from_dict(config.to_dict()) == config
    assert json.loads(config_to_json(config))["distribution"]["grid"] == [400, 200]


def test_invalid_separation():
    with pytest.raises(ConfigError):
        load_config(overrides={"system": {"d_over_r": 1.5}})


def test_custom_config(tmp_path):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("project_name: test\nexpansion:\n  n_max: 4\n")
    config = load_config(cfg)
    assert config.project_name == "test"
    assert config.expansion.n_max == 4
    assert config.expansion.k_max == 2


def test_overrides_beat_file(tmp_path):
    cfg = tmp_path / "cfg.yaml"
    cfg.write_text("expansion:\n  n_max: 4\n")
    config = load_config(cfg, {"expansion": {"n_max": 6}})
    assert config.expansion.n_max == 6


def test_json_is_valid_yaml(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"scan": {"cell": 0.5, "rectangle": [-2, 0, 0, 4]}}))
    config = load_config(cfg)
    assert config.scan.rectangle == (-2.0, 0.0, 0.0, 4.0)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.yaml")


@pytest.mark.parametrize(
    "overrides",
    [
        {"unknown": {}},
        {"system": {"colour": "red"}},
        {"expansion": {"domain": "half"}},
        {"expansion": {"k_max": 5}},
        {"scan": {"cell": 0.75}},
        {"scan": {"rectangle": [1, 0, 0, 1]}},
        {"distribution": {"sigmas": [0.0]}},
        {"compute": {"workers": 0}},
    ],
)
def test_invalid_inputs(overrides):
    with pytest.raises(ConfigError):
        load_config(overrides=overrides)


def test_merge_is_recursive():
    merged = merge_configs({"a": {"x": 1, "y": 2}}, {"a": {"y": 3}})
    assert merged == {"a": {"x": 1, "y": 3}}
