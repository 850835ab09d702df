"""HTTP service exposing circuit generation, execution, and benchmarks."""

from .app import app

__all__ = ["app"]
