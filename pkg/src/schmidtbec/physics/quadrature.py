"""Radial integrals for radially symmetric profiles in one or two dimensions."""

import math
from typing import Callable, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate


def unit_ball_volume(dims: int) -> float:
    """Volume of the unit ball: 2 for a segment, pi for a disc."""
    return 2.0 * math.pi ** (dims - 1) / dims


def radial_weight(dims: int, r: np.ndarray) -> np.ndarray:
    """Measure factor of d^dims r for radial integrands on r >= 0."""
    if dims == 1:
        return 2.0 * np.ones_like(r)
    return 2.0 * math.pi * r


def radial_quad(func: Callable[[float], float], dims: int, upper: float,
                epsabs: float = 0.0, epsrel: float = 1e-12) -> float:
    """Integrate a radial function over the ball of radius ``upper``."""
    def integrand(r: float) -> float:
        return float(radial_weight(dims, np.asarray(r))) * func(r)

    value, _ = integrate.quad(integrand, 0.0, upper, epsabs=epsabs, epsrel=epsrel, limit=200)
    return value


def radial_nodes(dims: int, radius: float, n_points: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes on [0, radius] with weights including the radial measure."""
    x, w = leggauss(n_points)
    r = 0.5 * radius * (x + 1.0)
    weights = 0.5 * radius * w * radial_weight(dims, r)
    return r, weights
