"""
Error handling for CLI commands.

Every failure ends as an exit code plus a JSON error document on stderr.
"""
import json
import sys
from typing import Any, Dict

from loguru import logger
from pydantic import ValidationError

from symcomplex.exceptions import PartialResultError, SymbolicComplexityError

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_INVALID_INPUT = 2


def error_document(status: int, message: str, error_type: str, **extra: Any) -> Dict[str, Any]:
    return {"error": {"status": status, "message": message, "type": error_type, **extra}}


def _emit(document: Dict[str, Any]) -> None:
    sys.stderr.write(json.dumps(document, default=str) + "\n")


def workbench_exception_handler(exc: SymbolicComplexityError) -> int:
    """Handle domain errors."""
    logger.error(f"{type(exc).__name__}: {exc.message}")
    extra: Dict[str, Any] = {}
    if exc.details:
        extra["details"] = exc.details
    if isinstance(exc, PartialResultError) and exc.partial is not None:
        extra["partial"] = exc.partial
    _emit(error_document(exc.exit_code, exc.message, type(exc).__name__, **extra))
    return exc.exit_code


def validation_exception_handler(exc: ValidationError) -> int:
    """Handle schema validation errors."""
    logger.error(f"Validation error: {exc.errors()}")
    details = [{"loc": list(e["loc"]), "msg": e["msg"]} for e in exc.errors()]
    _emit(error_document(EXIT_INVALID_INPUT, "Validation error", "ValidationError", details=details))
    return EXIT_INVALID_INPUT


def general_exception_handler(exc: Exception) -> int:
    """Handle everything else."""
    logger.exception(f"Unhandled exception: {exc}")
    _emit(error_document(EXIT_UNEXPECTED, "Internal error", type(exc).__name__))
    return EXIT_UNEXPECTED


def handle_exception(exc: BaseException) -> int:
    """Exit code for ``exc`` after reporting it."""
    if isinstance(exc, SymbolicComplexityError):
        return workbench_exception_handler(exc)
    if isinstance(exc, ValidationError):
        return validation_exception_handler(exc)
    return general_exception_handler(exc)
