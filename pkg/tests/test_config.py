import pytest

import config
from vehicle.errors import ConfigError


def _write(tmp_path, text, name="settings.cfg"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


def test_read_key_values_skips_comments_and_blank_lines(tmp_path):
    path = _write(tmp_path, "# header\n\nmass = 2.0  # kg\narm_length=0.3\n")
    assert config.read_key_values(path) == {"mass": "2.0", "arm_length": "0.3"}


def test_read_key_values_rejects_duplicates(tmp_path):
    path = _write(tmp_path, "mass = 1\nmass = 2\n")
    with pytest.raises(ConfigError, match=":2: duplicate key"):
        config.read_key_values(path)


def test_read_key_values_rejects_lines_without_equals(tmp_path):
    path = _write(tmp_path, "mass 1\n")
    with pytest.raises(ConfigError, match=":1:"):
        config.read_key_values(path)


def test_merge_defaults_parses_by_default_type():
    defaults = {"rate": 1.0, "flag": False, "vec": (0.0, 0.0, 0.0), "count": 3}
    merged = config.merge_defaults(defaults, {"rate": "2.5", "flag": "yes", "vec": "1, 2, 3", "count": "7"})
    assert merged == {"rate": 2.5, "flag": True, "vec": (1.0, 2.0, 3.0), "count": 7}


def test_merge_defaults_rejects_unknown_keys():
    with pytest.raises(ConfigError, match="unknown configuration keys: bogus"):
        config.merge_defaults({"rate": 1.0}, {"bogus": "1"})


@pytest.mark.parametrize("value", ["abc", "nan", "inf"])
def test_parse_float_rejects_non_numbers(value):
    with pytest.raises(ConfigError):
        config.parse_float(value, "rate")


def test_parse_vector_checks_length():
    with pytest.raises(ConfigError):
        config.parse_vector("1,2", "vec", 3)


def test_parse_bool_rejects_other_words():
    with pytest.raises(ConfigError):
        config.parse_bool("maybe", "flag")


def test_default_output_dir_follows_environment(monkeypatch, tmp_path):
    monkeypatch.setenv(config.OUTPUT_DIR_ENV, str(tmp_path))
    assert config.default_output_dir() == tmp_path
    monkeypatch.delenv(config.OUTPUT_DIR_ENV)
    assert str(config.default_output_dir()) == config.DEFAULT_OUTPUT_DIR


def test_default_platform_has_two_to_one_thrust():
    defaults = config.MULTIROTOR_DEFAULTS
    total = 4 * defaults["max_thrust_per_motor"]
    assert total == pytest.approx(2 * defaults["mass"] * defaults["gravity"])
