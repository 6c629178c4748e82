"""
Settings, logging and error-handler tests.
"""
import json

import pytest
from loguru import logger
from pydantic import ValidationError

from symcomplex.config import Settings, settings
from symcomplex.config.logging_config import get_logger, setup_logging
from symcomplex.exceptions import (
    InvalidInputError,
    PartialResultError,
    PreconditionError,
    ReducibleChainError,
    ResourceBudgetError,
)
from symcomplex.middleware.error_handler import EXIT_INVALID_INPUT, EXIT_UNEXPECTED, handle_exception
from symcomplex.schemas.run import InputSource
from symcomplex.services import intricacy
from symcomplex.services.subshift import named


@pytest.fixture(autouse=True)
def reset_logging():
    yield
    logger.remove()


def last_error(err: str) -> dict:
    return json.loads([line for line in err.splitlines() if line.startswith('{"error"')][-1])["error"]


class TestSettings:
    """Environment overrides and defaults."""

    def test_defaults(self):
        """Shipped budgets and output precision."""
        fresh = Settings(_env_file=None)
        assert fresh.brute_force_max_n == 22
        assert fresh.markov_brute_max_n == 18
        assert fresh.json_significant_digits == 12
        assert fresh.csv_significant_digits == 6

    def test_environment_override(self, monkeypatch):
        """SYMC_* variables override the defaults."""
        monkeypatch.setenv("SYMC_BRUTE_FORCE_MAX_N", "5")
        monkeypatch.setenv("SYMC_OPTIMIZER_GRID", "0.05")
        monkeypatch.setenv("LOG_LEVEL", "DEBUG")
        fresh = Settings(_env_file=None)
        assert fresh.brute_force_max_n == 5
        assert fresh.optimizer_grid == 0.05
        assert fresh.log_level == "DEBUG"

    def test_budget_is_read_at_call_time(self, monkeypatch):
        """Services consult the shared settings object."""
        monkeypatch.setattr(settings, "brute_force_max_n", 5)
        with pytest.raises(ResourceBudgetError):
            intricacy.pattern_counts_all_subsets(named("figI"), 6)


class TestLogging:
    """Loguru sinks."""

    def test_text_logs_go_to_stderr(self, capsys):
        """stdout stays clean for command output."""
        setup_logging(level="INFO", log_format="text")
        logger.info("probe message")
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "probe message" in captured.err

    def test_json_logs(self, capsys):
        """Serialized records carry the message text."""
        setup_logging(level="DEBUG", log_format="json")
        logger.warning("structured probe")
        lines = [line for line in capsys.readouterr().err.splitlines() if "structured probe" in line]
        record = json.loads(lines[-1])
        assert record["record"]["level"]["name"] == "WARNING"

    def test_level_filters(self, capsys):
        """DEBUG is dropped at WARNING level."""
        setup_logging(level="WARNING")
        logger.debug("hidden")
        get_logger("symcomplex.test").warning("shown")
        err = capsys.readouterr().err
        assert "hidden" not in err
        assert "shown" in err


class TestErrorHandler:
    """Exception to exit-code mapping."""

    @pytest.mark.parametrize("exc,code", [
        (InvalidInputError("bad word"), 2),
        (ResourceBudgetError("too big", budget=10), 3),
        (PartialResultError("short prefix", partial=7), 3),
        (PreconditionError("needs M^2 > 0"), 4),
        (ReducibleChainError("two classes"), 4),
    ])
    def test_domain_errors(self, capsys, exc, code):
        """Each error class has its exit code and a JSON document."""
        assert handle_exception(exc) == code
        error = last_error(capsys.readouterr().err)
        assert error["status"] == code
        assert error["type"] == type(exc).__name__
        assert error["message"] == exc.message

    def test_partial_result_carries_bound(self, capsys):
        """The partial lower bound is reported."""
        handle_exception(PartialResultError("short prefix", partial=7, n=4))
        error = last_error(capsys.readouterr().err)
        assert error["partial"] == 7
        assert error["details"] == {"n": 4}

    def test_validation_error(self, capsys):
        """Schema failures map to invalid input."""
        with pytest.raises(ValidationError) as info:
            InputSource()
        assert handle_exception(info.value) == EXIT_INVALID_INPUT
        assert last_error(capsys.readouterr().err)["type"] == "ValidationError"

    def test_unexpected_error(self, capsys):
        """Anything else is an internal error."""
        assert handle_exception(RuntimeError("boom")) == EXIT_UNEXPECTED
        error = last_error(capsys.readouterr().err)
        assert error == {"status": 1, "message": "Internal error", "type": "RuntimeError"}
