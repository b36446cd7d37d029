"""Lifetime marginal distributions.

Every distribution here lives on a subset of [0, inf) and exposes the same
surface: ``cdf``, ``sf``, ``quantile``, ``pdf`` (when a density exists),
``mean``, ``median`` and the quantile density used by the marginal-quantile
integration substitution.  All evaluation methods accept scalars or numpy
arrays and return the matching kind.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "MarginalDistribution",
    "Uniform",
    "Exponential",
    "TabulatedQuantile",
    "UnsupportedOperationError",
]


class UnsupportedOperationError(RuntimeError):
    """The requested quantity is not defined for this distribution."""


def _match(reference, values):
    """Return a float when the caller passed a scalar, else the array."""
    if np.ndim(reference) == 0:
        return float(values)
    return values


class MarginalDistribution:
    """Base class for nonnegative random lifetimes."""

    has_density: bool = False

    def cdf(self, t):
        raise NotImplementedError

    def sf(self, t):
        raise NotImplementedError

    def quantile(self, p):
        raise NotImplementedError

    def pdf(self, t):
        raise UnsupportedOperationError(
            f"{type(self).__name__} does not provide a density"
        )

    def quantile_density(self, p):
        raise UnsupportedOperationError(
            f"{type(self).__name__} does not provide a quantile density"
        )

    def mean(self) -> float:
        raise NotImplementedError

    def median(self) -> float:
        return float(self.quantile(0.5))

    @property
    def support_upper(self) -> float:
        """Right endpoint of the support (may be inf)."""
        raise NotImplementedError


def _check_probability(p):
    arr = np.asarray(p, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("probability arguments must lie in [0, 1]")
    return arr


@dataclass(frozen=True)
class Uniform(MarginalDistribution):
    """Uniform law on [lower, upper] with 0 <= lower < upper."""

    lower: float
    upper: float

    has_density = True

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ValueError("uniform endpoints must be finite")
        if self.lower < 0.0:
            raise ValueError("lifetimes need nonnegative support; lower < 0")
        if not self.upper > self.lower:
            raise ValueError("uniform needs upper > lower")

    def cdf(self, t):
        arr = np.asarray(t, dtype=float)
        width = self.upper - self.lower
        return _match(t, np.clip((arr - self.lower) / width, 0.0, 1.0))

    def sf(self, t):
        arr = np.asarray(t, dtype=float)
        width = self.upper - self.lower
        return _match(t, np.clip((self.upper - arr) / width, 0.0, 1.0))

    def quantile(self, p):
        arr = _check_probability(p)
        return _match(p, self.lower + (self.upper - self.lower) * arr)

    def pdf(self, t):
        arr = np.asarray(t, dtype=float)
        inside = (arr >= self.lower) & (arr <= self.upper)
        return _match(t, np.where(inside, 1.0 / (self.upper - self.lower), 0.0))

    def quantile_density(self, p):
        arr = _check_probability(p)
        return _match(p, np.full_like(arr, self.upper - self.lower))

    def mean(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def support_upper(self) -> float:
        return self.upper


@dataclass(frozen=True)
class Exponential(MarginalDistribution):
    """Exponential law with the given rate (mean 1/rate)."""

    rate: float

    has_density = True

    def __post_init__(self):
        if not (math.isfinite(self.rate) and self.rate > 0.0):
            raise ValueError("exponential rate must be positive and finite")

    def cdf(self, t):
        arr = np.asarray(t, dtype=float)
        return _match(t, np.where(arr > 0.0, -np.expm1(-self.rate * np.maximum(arr, 0.0)), 0.0))

    def sf(self, t):
        arr = np.asarray(t, dtype=float)
        return _match(t, np.where(arr > 0.0, np.exp(-self.rate * np.maximum(arr, 0.0)), 1.0))

    def quantile(self, p):
        arr = _check_probability(p)
        with np.errstate(divide="ignore"):
            out = -np.log1p(-arr) / self.rate
        return _match(p, out)

    def pdf(self, t):
        arr = np.asarray(t, dtype=float)
        return _match(
            t,
            np.where(arr >= 0.0, self.rate * np.exp(-self.rate * np.maximum(arr, 0.0)), 0.0),
        )

    def quantile_density(self, p):
        arr = _check_probability(p)
        with np.errstate(divide="ignore"):
            out = 1.0 / (self.rate * (1.0 - arr))
        return _match(p, out)

    def mean(self) -> float:
        return 1.0 / self.rate

    @property
    def support_upper(self) -> float:
        return math.inf


class TabulatedQuantile(MarginalDistribution):
    """Distribution given by a piecewise-linear quantile grid.

    The grid lists (p_i, x_i) pairs with p strictly increasing from 0 to 1 and
    x nondecreasing and nonnegative.  Linear interpolation between grid points
    defines the quantile function; flat stretches in x are atoms, and the cdf
    is right-continuous across them.  No density is available.
    """

    has_density = False

    def __init__(self, probabilities, values):
        ps = np.asarray(probabilities, dtype=float)
        xs = np.asarray(values, dtype=float)
        if ps.ndim != 1 or xs.ndim != 1 or ps.size != xs.size:
            raise ValueError("probabilities and values must be 1-d of equal length")
        if ps.size < 2:
            raise ValueError("need at least two grid points")
        if not (np.all(np.isfinite(ps)) and np.all(np.isfinite(xs))):
            raise ValueError("grid entries must be finite")
        if not np.all(np.diff(ps) > 0.0):
            raise ValueError("probabilities must be strictly increasing")
        if ps[0] != 0.0 or ps[-1] != 1.0:
            raise ValueError("the grid must cover the full unit interval (p from 0 to 1)")
        if np.any(np.diff(xs) < 0.0):
            raise ValueError("quantile values must be nondecreasing")
        if xs[0] < 0.0:
            raise ValueError("lifetimes need nonnegative support")
        self._ps = ps
        self._xs = xs

    @classmethod
    def from_csv(cls, path) -> "TabulatedQuantile":
        """Read a two-column CSV with header ``p,x``."""
        with open(path, newline="") as handle:
            reader = csv.reader(handle)
            try:
                header = next(reader)
            except StopIteration:
                raise ValueError(f"{path}: empty file") from None
            if [column.strip() for column in header] != ["p", "x"]:
                raise ValueError(f"{path}: expected header 'p,x', got {header!r}")
            ps, xs = [], []
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 2:
                    raise ValueError(f"{path}:{lineno}: expected two columns")
                try:
                    ps.append(float(row[0]))
                    xs.append(float(row[1]))
                except ValueError:
                    raise ValueError(f"{path}:{lineno}: non-numeric entry") from None
        return cls(ps, xs)

    def __eq__(self, other):
        return (
            isinstance(other, TabulatedQuantile)
            and np.array_equal(self._ps, other._ps)
            and np.array_equal(self._xs, other._xs)
        )

    def __repr__(self):
        return f"TabulatedQuantile({len(self._ps)} grid points on [{self._xs[0]}, {self._xs[-1]}])"

    def quantile(self, p):
        arr = _check_probability(p)
        return _match(p, np.interp(arr, self._ps, self._xs))

    def cdf(self, t):
        arr = np.asarray(t, dtype=float)
        xs, ps = self._xs, self._ps
        idx = np.searchsorted(xs, arr, side="right")
        idx = np.clip(idx, 1, xs.size - 1)
        x_lo = xs[idx - 1]
        x_hi = xs[idx]
        p_lo = ps[idx - 1]
        p_hi = ps[idx]
        gap = x_hi - x_lo
        with np.errstate(invalid="ignore", divide="ignore"):
            frac = np.where(gap > 0.0, (arr - x_lo) / np.where(gap > 0.0, gap, 1.0), 1.0)
        interior = p_lo + np.clip(frac, 0.0, 1.0) * (p_hi - p_lo)
        out = np.where(arr < xs[0], 0.0, np.where(arr >= xs[-1], 1.0, interior))
        return _match(t, out)

    def sf(self, t):
        arr = np.asarray(t, dtype=float)
        return _match(t, 1.0 - self.cdf(arr))

    def quantile_density(self, p):
        arr = _check_probability(p)
        slopes = np.diff(self._xs) / np.diff(self._ps)
        idx = np.clip(np.searchsorted(self._ps, arr, side="right") - 1, 0, slopes.size - 1)
        return _match(p, slopes[idx])

    def mean(self) -> float:
        # exact for the piecewise-linear quantile function
        return float(np.sum(np.diff(self._ps) * 0.5 * (self._xs[:-1] + self._xs[1:])))

    @property
    def support_upper(self) -> float:
        return float(self._xs[-1])
