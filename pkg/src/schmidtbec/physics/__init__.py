"""Analytic model: units, special functions, Schmidt formulas and the variational benchmark."""
