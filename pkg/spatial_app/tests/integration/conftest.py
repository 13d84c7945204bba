import json

import pytest

from tests.integration.test_helpers import run_command


@pytest.fixture
def write_config(tmp_path):
    def write(config: dict, name: str = 'run.json'):
        path = tmp_path / name
        path.write_text(json.dumps(config), encoding='utf-8')
        return path

    return write


@pytest.fixture
def small_config():
    return {
        'scenario': {'n': 60, 'seed': 11},
        'replications': {'m': 2},
        'estimation': {'bandwidths': [0.3, 0.6, 1.2]},
    }


@pytest.fixture
def simulated_data(tmp_path, write_config, small_config):
    """One simulated replicate on disk, plus a config that reads it."""
    out = tmp_path / 'sim'
    exit_code = run_command('simulate', '--config',
                            write_config(small_config, 'sim.json'),
                            '--out', out)
    assert exit_code == 0
    return out / 'replicate_0000.csv', {
        **small_config,
        'dataset': {'columns': {'outcome': 'outcome', 'id': 'id',
                                'region': 'region'}},
    }
