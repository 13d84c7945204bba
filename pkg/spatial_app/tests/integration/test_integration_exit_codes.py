import pytest

from tests.integration.test_helpers import run_command


def test_unknown_config_key_exits_with_two(tmp_path, write_config):
    config = write_config({'scenario': {'n': 30, 'size': 3}})

    assert run_command('simulate', '--config', config,
                       '--out', tmp_path) == 2


def test_unreadable_config_exits_with_two(tmp_path):
    assert run_command('simulate', '--config', tmp_path / 'missing.json',
                       '--out', tmp_path) == 2


def test_missing_data_exits_with_three(tmp_path, write_config,
                                       small_config):
    config = write_config(small_config)

    assert run_command('estimate', '--config', config,
                       '--data', tmp_path / 'missing.csv',
                       '--out', tmp_path / 'out') == 3
    assert not (tmp_path / 'out').exists()


def test_missing_column_exits_with_three(tmp_path, write_config,
                                         small_config):
    data = tmp_path / 'd.csv'
    data.write_text("x,y,exposure\n0,0,1\n1,1,2\n2,2,3\n", encoding='utf-8')

    assert run_command('decompose', '--config', write_config(small_config),
                       '--data', data, '--out', tmp_path / 'out') == 3


def test_bad_arguments_exit_with_two(tmp_path):
    with pytest.raises(SystemExit) as e:
        run_command('simulate', '--threads', '0', '--out', tmp_path)

    assert e.value.code == 2
