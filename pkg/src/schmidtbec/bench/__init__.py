"""Sweeps and command-line subcommands."""
