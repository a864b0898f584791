"""
Tests for the environment configuration.
"""

import pytest

from src.config import Config


@pytest.fixture
def restore_config(monkeypatch):
    yield monkeypatch
    monkeypatch.undo()
    Config.reload()


class TestConfig:
    def test_threads_from_environment(self, restore_config):
        restore_config.setenv('SELDA_SIM_THREADS', '3')
        Config.reload()
        assert Config.SIM_THREADS == 3
        assert Config.validate() == (True, None)

    def test_invalid_threads(self, restore_config):
        restore_config.setenv('SELDA_SIM_THREADS', 'many')
        Config.reload()
        is_valid, error = Config.validate()
        assert not is_valid
        assert 'SELDA_SIM_THREADS' in error

    def test_max_workers_capped(self, restore_config):
        restore_config.setenv('SELDA_SIM_THREADS', '2')
        Config.reload()
        assert Config.max_workers() == 2
        assert Config.max_workers(8) == 2
        assert Config.max_workers(1) == 1

    def test_debug_flag(self, restore_config):
        restore_config.setenv('SELDA_SIM_DEBUG', 'true')
        Config.reload()
        assert Config.DEBUG_MODE
        assert Config.get_debug_info()['debug_mode'] is True
