"""Scattering by penetrable obstacles with a delaminated boundary layer."""

__version__ = "0.1.0"
