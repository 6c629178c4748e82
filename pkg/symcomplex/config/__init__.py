"""Config package - exports settings."""
from symcomplex.config.settings import settings, Settings

__all__ = ["settings", "Settings"]
