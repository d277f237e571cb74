"""HTTP service over the verification library."""

from .app import create_app

__all__ = ["create_app"]
