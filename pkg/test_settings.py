import os
import pytest
from termcolor import cprint
import settings

ENV_KEYS = list(settings.ENV_DEFAULTS)


@pytest.fixture(autouse=True)
def setup_test_environment():
    """Save and restore the PROISO_* variables around each test"""
    original_env = {key: os.environ.get(key) for key in ENV_KEYS}
    try:
        for key in ENV_KEYS:
            os.environ.pop(key, None)
        settings.reset()
        yield
    finally:
        settings.reset()
        for key, value in original_env.items():
            if value is None:
                os.environ.pop(key, None)
            else:
                os.environ[key] = value


def test_constants():
    """Every environment variable has a default and a Settings field"""
    assert set(settings.ENV_DEFAULTS) == set(settings.ENV_FIELDS)
    for field in settings.ENV_FIELDS.values():
        assert field in settings.Settings.model_fields


def test_defaults():
    current = settings.current()
    assert current.verbose is False
    assert current.term_budget == 2000000
    assert current.max_weyl_rank == 9
    assert current.workers == 0
    assert current.default_depth == 10
    assert current.decimal_digits == 12
    assert current.server_port == 8000


def test_environment_is_read_at_call_time():
    os.environ["PROISO_TERM_BUDGET"] = "17"
    os.environ["PROISO_VERBOSE"] = "TRUE"
    current = settings.current()
    assert current.term_budget == 17
    assert current.verbose is True


def test_configure_overrides_environment():
    os.environ["PROISO_WORKERS"] = "3"
    assert settings.configure(workers=0).workers == 0
    settings.reset()
    assert settings.current().workers == 3


def test_configure_rejects_unknown_fields():
    with pytest.raises(ValueError) as exc_info:
        settings.configure(colour="red")
    assert "colour" in str(exc_info.value)


def test_report_is_silent_unless_verbose(capsys):
    settings.report("hidden")
    assert capsys.readouterr().err == ""
    settings.configure(verbose=True)
    settings.report("shown", "green")
    captured = capsys.readouterr()
    assert "shown" in captured.err
    assert captured.out == ""


def test_print_config_lists_every_field(capsys):
    settings.configure(workers=3)
    settings.print_config()
    captured = capsys.readouterr()
    assert "Configuration" in captured.err
    assert "workers: 3" in captured.err
    for field in settings.ENV_FIELDS.values():
        assert f"{field}:" in captured.err
    assert captured.out == ""


def test_settings_are_frozen():
    with pytest.raises(Exception):
        settings.current().workers = 4


if __name__ == "__main__":
    cprint("Running settings tests...", "yellow")
    pytest.main([__file__, "-v"])
