"""Pipeline adapter: dataset conversion and scoring through the spanmark CLI."""

__version__ = "0.1.0"

from .session import DIRECTIONS, AdapterError, AdapterSession

__all__ = ["DIRECTIONS", "AdapterError", "AdapterSession", "__version__"]
