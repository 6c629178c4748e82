"""Complexity workbench for sequences and subshifts of finite type."""

__version__ = "0.1.0"
