import pytest

from spatial_iv.exceptions import ConfigError
from spatial_iv.model.run_config import RunConfig
from spatial_iv.repositories.config_repository import ConfigRepositoryImpl, \
    parse_config


def test_no_path_gives_defaults():
    assert ConfigRepositoryImpl().load(None) == RunConfig()


def test_load_config_file(tmp_path):
    # Given
    path = tmp_path / 'run.json'
    path.write_text(
        '{"threads": 2, "scenario": {"n": 60, "mechanism": "M2"}}',
        encoding='utf-8',
    )

    # When
    config = ConfigRepositoryImpl().load(path)

    # Then
    assert config.threads == 2
    assert config.scenario.n == 60
    assert config.scenario.theta_uc == 0.05


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        ConfigRepositoryImpl().load(tmp_path / 'missing.json')


def test_invalid_json():
    with pytest.raises(ConfigError) as e:
        parse_config('{"threads": ', 'run.json')

    assert 'run.json' in str(e.value)


def test_unknown_key_names_the_location():
    with pytest.raises(ConfigError) as e:
        parse_config('{"estimation": {"strategy": "2sri", "bogus": 1}}')

    assert 'estimation.bogus' in str(e.value)


def test_config_error_exit_code():
    with pytest.raises(ConfigError) as e:
        parse_config('[]')

    assert e.value.exit_code == 2
