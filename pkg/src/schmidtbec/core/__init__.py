"""Configuration, logging, timing and the error hierarchy."""
