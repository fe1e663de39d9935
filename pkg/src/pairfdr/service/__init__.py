"""HTTP service wrapping the pairfdr library."""

from .app import app

__all__ = ["app"]
