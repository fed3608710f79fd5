"""Core subpackage: configuration, error types and shared constants."""

from .config import *
from .errors import *

__all__ = [name for name in globals() if not name.startswith("_")]
