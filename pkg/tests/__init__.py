"""Tests for the delaminated scattering package."""
