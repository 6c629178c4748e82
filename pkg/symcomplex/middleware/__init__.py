"""CLI error handling."""
