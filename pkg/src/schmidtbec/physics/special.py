"""Series evaluation of the polylogarithm and generalized hypergeometric functions.

Only real arguments with geometric convergence are supported; every call
reports how many terms it used and an estimate of the relative tail.
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..core.errors import DomainError, SeriesDivergenceError

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-13
MAX_TERMS = 1_000_000
# consecutive small terms required before a series is accepted
SMALL_TERM_RUN = 3


@dataclass(frozen=True)
class SeriesResult:
    """Value of a truncated series.

    ``truncation_bound`` estimates the neglected tail relative to ``value``.
    """
    value: float
    terms_used: int
    truncation_bound: float

    def __float__(self) -> float:
        return self.value


def _tail_bound(last_term: float, ratio: float, partial: float) -> float:
    if ratio >= 1.0:
        return math.inf
    tail = abs(last_term) * ratio / (1.0 - ratio)
    return tail / abs(partial) if partial else (0.0 if tail == 0 else math.inf)


def polylog(s: float, z: float, tol: float = DEFAULT_TOL) -> SeriesResult:
    """Li_s(z) = sum_{n>=1} z^n / n^s for real s >= 1 and |z| < 1.

    Raises:
        DomainError: If |z| >= 1 or s < 1.
        SeriesDivergenceError: If the term guard is reached.
    """
    if abs(z) >= 1:
        raise DomainError(f"polylog needs |z| < 1, got z={z}")
    if s < 1:
        raise DomainError(f"polylog order must be >= 1, got s={s}")
    if z == 0:
        return SeriesResult(0.0, 0, 0.0)

    term = z
    total = term
    run = 0
    n = 1
    while n < MAX_TERMS:
        # t_{n+1} = t_n * z * (n / (n + 1))^s
        term *= z * (n / (n + 1.0)) ** s
        n += 1
        total += term
        run = run + 1 if abs(term) < tol * abs(total) else 0
        if run >= SMALL_TERM_RUN:
            bound = _tail_bound(term, abs(z), total)
            if bound <= tol:
                return SeriesResult(total, n, bound)
    raise SeriesDivergenceError(f"polylog({s}, {z}) did not converge in {MAX_TERMS} terms")


def pochhammer(alpha: float, n: int) -> float:
    """Rising factorial (alpha)_n = alpha (alpha + 1) ... (alpha + n - 1)."""
    if n < 0:
        raise DomainError(f"pochhammer needs n >= 0, got {n}")
    result = 1.0
    for i in range(n):
        result *= alpha + i
    return result


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


def _check_parameters(upper: Sequence[float], lower: Sequence[float], z: float) -> bool:
    """Validate a pFq call; returns True when the series terminates."""
    for b in lower:
        if _is_nonpositive_integer(b):
            raise DomainError(f"lower parameter {b} is a nonpositive integer")
    terminating = any(_is_nonpositive_integer(a) for a in upper)
    p, q = len(upper), len(lower)
    if not terminating:
        if p > q + 1 and z != 0:
            raise DomainError(f"{p}F{q} series diverges for z != 0")
        if p == q + 1 and abs(z) >= 1:
            raise DomainError(f"{p}F{q} series needs |z| < 1, got z={z}")
    return terminating


def _term_ratio(upper: Sequence[float], lower: Sequence[float], z: float, n: int) -> float:
    """t_{n+1} / t_n of the pFq series."""
    ratio = z / (n + 1.0)
    for a in upper:
        ratio *= a + n
    for b in lower:
        ratio /= b + n
    return ratio


def hypergeometric_pFq(upper: Sequence[float], lower: Sequence[float], z: float,
                       tol: float = DEFAULT_TOL) -> SeriesResult:
    """Generalized hypergeometric series pFq(upper; lower; z).

    Terms follow the ratio recurrence; summation stops once three consecutive
    terms fall below ``tol`` relative to the partial sum.

    Raises:
        DomainError: For nonpositive-integer lower parameters or |z| >= 1 when p = q + 1.
        SeriesDivergenceError: If the term guard is reached.
    """
    terminating = _check_parameters(upper, lower, z)
    term = 1.0
    total = 1.0
    run = 0
    n = 0
    while n < MAX_TERMS:
        ratio = _term_ratio(upper, lower, z, n)
        term *= ratio
        n += 1
        total += term
        if term == 0.0 and terminating:
            return SeriesResult(total, n, 0.0)
        run = run + 1 if abs(term) < tol * abs(total) else 0
        if run >= SMALL_TERM_RUN:
            if len(upper) <= len(lower):
                # ratios shrink like z/n; the next term bounds the tail
                bound = _tail_bound(term, min(abs(_term_ratio(upper, lower, z, n)), 0.5), total)
            else:
                bound = _tail_bound(term, abs(z), total)
            if bound <= tol:
                return SeriesResult(total, n + 1, bound)
    raise SeriesDivergenceError(
        f"{len(upper)}F{len(lower)}({list(upper)}; {list(lower)}; {z}) did not converge "
        f"in {MAX_TERMS} terms"
    )


def hypergeometric_terms(upper: Sequence[float], lower: Sequence[float], z: float,
                         n_terms: int) -> np.ndarray:
    """First ``n_terms`` terms of the pFq series (term 0 is 1)."""
    _check_parameters(upper, lower, z)
    terms = np.empty(n_terms)
    term = 1.0
    for n in range(n_terms):
        terms[n] = term
        term *= _term_ratio(upper, lower, z, n)
    return terms


def polylog_terms(s: float, z: float, n_terms: int) -> np.ndarray:
    """First ``n_terms`` terms z^n / n^s, n = 1 .. n_terms."""
    if abs(z) >= 1:
        raise DomainError(f"polylog needs |z| < 1, got z={z}")
    n = np.arange(1, n_terms + 1, dtype=float)
    return z ** n / n ** s
