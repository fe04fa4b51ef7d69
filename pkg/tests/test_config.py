import pytest

from config.settings import Config
from src.cli.app import load_config
from src.helpers.errors import ConfigurationError


def test_builtin_defaults():
    settings = Config(defaults_file=None, environ={})
    assert settings.sieve.global_bound == 2 ** 31
    assert settings.sieve.segment_length == 2 ** 18
    assert settings.report.tier == "quick"
    assert settings.sieve.threads >= 1


def test_yaml_then_environment(tmp_path):
    path = tmp_path / "defaults.yaml"
    path.write_text("sieve:\n  global_bound: 1000000\n  segment_length: 4096\nreport:\n  tier: standard\n")
    settings = Config(defaults_file=path, environ={"PRL_SEGMENT_LENGTH": "8192", "PRL_VERIFY_CHECKPOINTS": "yes"})
    assert settings.sieve.global_bound == 10 ** 6
    assert settings.sieve.segment_length == 8192
    assert settings.sieve.verify_checkpoints is True
    assert settings.report.tier == "standard"
    assert settings.to_dict()['sieve']['segment_length'] == 8192


def test_unparseable_environment():
    with pytest.raises(ValueError):
        Config(environ={"PRL_BOUND": "lots"})


def test_flags_beat_environment():
    cli = load_config({'bound': 10 ** 6, 'format': 'json'}, {"PRL_BOUND": "2000000", "PRL_FORMAT": "csv"})
    assert cli.global_bound == 10 ** 6
    assert cli.output_format == "json"


def test_extended_flag():
    cli = load_config({'extended': True}, {})
    assert cli.global_bound == 2 ** 37


@pytest.mark.parametrize("flags, environ", [
    ({'threads': 0}, {}),
    ({'segment_length': 3000}, {}),
    ({'segment_length': 2 ** 25}, {}),
    ({'bound': 100}, {}),
    ({'checkpoint_stride': 0}, {}),
    ({}, {"PRL_TIER": "heroic"}),
    ({}, {"PRL_FORMAT": "yaml"}),
    ({}, {"PRL_THREADS": "two"}),
])
def test_invalid_settings(flags, environ):
    with pytest.raises(ConfigurationError):
        load_config(flags, environ)
