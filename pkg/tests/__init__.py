"""Test package for schmidtbec."""
