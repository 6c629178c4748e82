"""
Configuration management for the symcomplex workbench.

Every numeric budget and tolerance used by the services lives here so that
the CLI, the tests and library callers share one source of truth. Values can
be overridden through environment variables or a local ``.env`` file.
"""
from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field


class Settings(BaseSettings):
    """Workbench settings with environment variable support."""

    # Logging
    log_level: str = Field(default="INFO", alias="LOG_LEVEL")
    log_format: str = Field(default="text", alias="LOG_FORMAT")
    log_file: str = Field(default="", alias="LOG_FILE")

    # Enumeration budgets
    enumeration_budget: int = Field(default=100_000_000, alias="SYMC_ENUMERATION_BUDGET")
    brute_force_max_n: int = Field(default=22, alias="SYMC_BRUTE_FORCE_MAX_N")
    markov_brute_max_n: int = Field(default=18, alias="SYMC_MARKOV_BRUTE_MAX_N")

    # Series truncation
    series_tail_tol: float = Field(default=1e-10, alias="SYMC_SERIES_TAIL_TOL")
    markov_series_tol: float = Field(default=1e-12, alias="SYMC_MARKOV_SERIES_TOL")

    # Linear algebra
    stationary_direct_max_dim: int = Field(default=64, alias="SYMC_STATIONARY_DIRECT_MAX_DIM")
    power_iteration_tol: float = Field(default=1e-12, alias="SYMC_POWER_ITERATION_TOL")
    power_iteration_max_iter: int = Field(default=100_000, alias="SYMC_POWER_ITERATION_MAX_ITER")

    # Optimizer
    optimizer_grid: float = Field(default=0.02, alias="SYMC_OPTIMIZER_GRID")
    optimizer_eps: float = Field(default=1e-9, alias="SYMC_OPTIMIZER_EPS")
    optimizer_xatol: float = Field(default=1e-8, alias="SYMC_OPTIMIZER_XATOL")
    maxima_separation: float = Field(default=1e-3, alias="SYMC_MAXIMA_SEPARATION")
    optimizer_max_probes: int = Field(default=20_000, alias="SYMC_OPTIMIZER_MAX_PROBES")

    # Output
    json_significant_digits: int = Field(default=12, alias="SYMC_JSON_DIGITS")
    csv_significant_digits: int = Field(default=6, alias="SYMC_CSV_DIGITS")

    # Runtime
    threads: int = Field(default=1, alias="SYMC_THREADS")
    seed: int = Field(default=0, alias="SYMC_SEED")

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        populate_by_name=True,
        extra="ignore",
    )


# Global settings instance
settings = Settings()
