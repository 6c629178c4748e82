"""Pydantic schemas for the JSON interfaces (inputs and reports)."""
