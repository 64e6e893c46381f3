import pytest

from config import RTOL_ENV_VAR, Config
from errors import DomainError
from quad import QuadConfig


def test_defaults():
    config = Config(use_env=False)
    assert config['rel_tol'] == 1e-10
    assert config['abs_tol'] == 1e-300
    assert config['max_refinements'] == 60
    assert config.quad_config() == QuadConfig()


def test_environment_overrides_default(monkeypatch):
    monkeypatch.setenv(RTOL_ENV_VAR, '1e-8')
    assert Config()['rel_tol'] == 1e-8
    assert Config().quad_config().rel_tol == 1e-8


def test_flag_overrides_environment(monkeypatch):
    monkeypatch.setenv(RTOL_ENV_VAR, '1e-8')
    assert Config({'rel_tol': 1e-12})['rel_tol'] == 1e-12


def test_unset_override_is_ignored():
    assert Config({'rel_tol': None}, use_env=False)['rel_tol'] == 1e-10


def test_blank_environment_value_is_ignored(monkeypatch):
    monkeypatch.setenv(RTOL_ENV_VAR, '  ')
    assert Config()['rel_tol'] == 1e-10


@pytest.mark.parametrize("raw", ['abc', '0', '-1e-8'])
def test_bad_environment_value(monkeypatch, raw):
    monkeypatch.setenv(RTOL_ENV_VAR, raw)
    with pytest.raises(DomainError, match=RTOL_ENV_VAR):
        Config()


def test_bad_override_is_rejected_by_quad_config():
    with pytest.raises(DomainError, match="rel_tol must be positive"):
        Config({'rel_tol': -1.0}, use_env=False).quad_config()
