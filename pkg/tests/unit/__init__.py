"""Unit tests for schmidtbec."""
