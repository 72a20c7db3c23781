"""Quadrature rules and special functions used throughout the package.

Two kinds of integrals appear: smooth 2*pi-periodic integrands, for which the
trapezoid rule converges geometrically, and integrands with algebraic endpoint
singularities |theta - theta*|**alpha (conformal weights of polygons), which are
handled by Gauss-Jacobi panels whose endpoints sit on the singular points.
"""
from __future__ import annotations

import math
import warnings
from functools import lru_cache
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import special

from .errors import DivergentIntegral, DomainError, PossiblyDivergent

TWO_PI = 2.0 * np.pi

DEFAULT_NODES = 2048
MAX_NODES = 2**20


@dataclass(frozen=True)
class PeriodicSamples:
    """Values of a 2*pi-periodic function at theta_k = 2*pi*k/n."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 8:
            raise ValueError(f"need a 1-d array of at least 8 samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("samples must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def nodes(self) -> np.ndarray:
        return TWO_PI * np.arange(self.n) / self.n

    @classmethod
    def from_function(cls, f: Callable[[np.ndarray], np.ndarray], n: int) -> "PeriodicSamples":
        return cls(f(TWO_PI * np.arange(n) / n))


@dataclass(frozen=True)
class SingularityTag:
    """Integrand behaves like |theta - theta*|**exponent near each location."""

    locations: tuple[float, ...]
    exponent: float

    def __post_init__(self):
        object.__setattr__(self, "locations", tuple(float(t) for t in np.atleast_1d(self.locations)))

    @property
    def integrable(self) -> bool:
        return self.exponent > -1.0

    def scaled(self, power: float) -> "SingularityTag":
        """Tag of the integrand raised to ``power``."""
        return SingularityTag(self.locations, self.exponent * power)


def periodic_trapezoid(f: PeriodicSamples) -> float:
    return float(TWO_PI / f.n * np.sum(f.values))


def _trap(func, n):
    v = np.asarray(func(TWO_PI * np.arange(n) / n), dtype=float)
    return TWO_PI / n * np.sum(v), TWO_PI / n * np.sum(np.abs(v))


def integrate_periodic(func: Callable[[np.ndarray], np.ndarray], n: int = DEFAULT_NODES,
                       rtol: float = 1e-11, n_max: int = MAX_NODES) -> float:
    """Trapezoid rule with node doubling until two successive values agree.

    Raises PossiblyDivergent when five doublings never bring the relative change
    below 1e-3 while the value ends up higher than where it started.
    """
    prev, _ = _trap(func, n)
    history = [prev]
    changes = []
    while n < n_max:
        n *= 2
        cur, scale = _trap(func, n)
        if not np.isfinite(cur):
            raise PossiblyDivergent("integrand evaluates to a non-finite value")
        history.append(cur)
        # relative to int |f| so that integrals that cancel to ~0 still settle
        change = abs(cur - prev) / max(scale, 1e-300)
        changes.append(change)
        if change < rtol:
            return cur
        # sampling a singularity at shifting distances makes the sequence jitter, so
        # "growing" means up over the window of the last five doublings
        if len(changes) >= 5 and min(changes[-5:]) >= 1e-3 and history[-1] > history[-6]:
            raise PossiblyDivergent(f"refinements do not settle and trend upward: "
                                    f"{history[-6]:.6g} -> {history[-1]:.6g}")
        prev = cur
    warnings.warn(f"periodic quadrature not converged at {n} nodes (last change {changes[-1]:.2e})",
                  RuntimeWarning, stacklevel=2)
    return cur


def panel_rule(a: float, b: float, n: int, left_exp: float = 0.0, right_exp: float = 0.0):
    """Nodes and weights on [a, b] exact for (theta-a)**left_exp (b-theta)**right_exp * poly.

    The returned weights already divide out the Jacobi weight, so ``sum(w * f(theta))``
    approximates the plain integral of ``f``.
    """
    x, w = _reference_rule(n, float(left_exp), float(right_exp))
    h = 0.5 * (b - a)
    return 0.5 * (a + b) + h * x, h * w


@lru_cache(maxsize=256)
def _reference_rule(n: int, left_exp: float, right_exp: float):
    if left_exp == 0.0 and right_exp == 0.0:
        x, w = leggauss(n)
    else:
        x, w = special.roots_jacobi(n, right_exp, left_exp)
        w = w / ((1.0 - x) ** right_exp * (1.0 + x) ** left_exp)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def periodic_panel_rule(breaks: Iterable[float], n: int, exponents: dict[float, float] | None = None):
    """Composite panel rule over one period with panel ends at ``breaks``.

    ``exponents`` maps a break angle to the algebraic exponent of the integrand there.
    """
    exponents = exponents or {}
    pts = sorted({float(np.mod(b, TWO_PI)) for b in breaks} | {float(np.mod(b, TWO_PI)) for b in exponents})
    if not pts:
        raise ValueError("need at least one break point")

    def exp_at(t):
        for loc, e in exponents.items():
            d = abs(np.mod(t - loc + np.pi, TWO_PI) - np.pi)
            if d < 1e-12:
                return e
        return 0.0

    ends = pts + [pts[0] + TWO_PI]
    thetas, weights = [], []
    for a, b in zip(ends[:-1], ends[1:]):
        t, w = panel_rule(a, b, n, exp_at(a), exp_at(b))
        thetas.append(t)
        weights.append(w)
    return np.concatenate(thetas), np.concatenate(weights)


def integrate_piecewise(f: Callable[[np.ndarray], np.ndarray], breaks: Iterable[float] = (),
                        tags: SingularityTag | Sequence[SingularityTag] | dict[float, float] | None = None,
                        n: int = 64, rtol: float = 1e-12, n_max: int = 4096) -> float:
    """Integrate a 2*pi-periodic ``f`` that is smooth except at ``breaks`` and tagged points.

    Without breaks or tags this is the adaptive trapezoid rule. Otherwise panels end at
    every break and singular point and ``n`` nodes per panel are doubled to ``rtol``.
    """
    sing = dict(tags) if isinstance(tags, dict) else _collect(tags)
    if sing and min(sing.values()) <= -1.0:
        raise DivergentIntegral(f"non-integrable singularity, exponent {min(sing.values())}")
    breaks = list(breaks) + [e for e, v in sing.items() if v == 0.0]
    sing = {e: v for e, v in sing.items() if v != 0.0}
    if not breaks and not sing:
        return integrate_periodic(f, rtol=max(rtol, 1e-11))

    def once(m):
        t, w = periodic_panel_rule(breaks, m, sing)
        v = w * f(np.mod(t, TWO_PI))
        return float(np.sum(v)), float(np.sum(np.abs(v)))

    prev, _ = once(n)
    last = math.inf
    while n < n_max:
        n *= 2
        cur, scale = once(n)
        change = abs(cur - prev) / max(scale, 1e-300)
        if change <= rtol:
            return cur
        if _at_roundoff_floor(change, last):
            return prev
        prev, last = cur, change
    warnings.warn("piecewise quadrature did not settle; returning finest value", RuntimeWarning, stacklevel=2)
    return prev


def _collect(tags) -> dict[float, float]:
    if tags is None:
        return {}
    if isinstance(tags, SingularityTag):
        tags = [tags]
    out: dict[float, float] = {}
    for tag in tags:
        for loc in tag.locations:
            out[loc] = min(out.get(loc, math.inf), tag.exponent)
    return out


def graded_quadrature(f: Callable[[np.ndarray], np.ndarray],
                      tags: SingularityTag | Sequence[SingularityTag] | None = None,
                      n: int = 16, interval: tuple[float, float] = (0.0, TWO_PI),
                      rtol: float = 1e-12, n_max: int = 4096) -> float:
    """Integrate ``f`` over ``interval`` with algebraic endpoint singularities.

    A full period is treated periodically: panels run between consecutive singular
    points. Each panel uses Gauss-Jacobi nodes matched to the tagged exponents, and
    ``n`` is doubled until two passes agree to ``rtol``.
    """
    sing = _collect(tags)
    if sing and min(sing.values()) <= -1.0:
        raise DivergentIntegral(f"non-integrable singularity, exponent {min(sing.values())}")
    a, b = interval
    periodic = math.isclose(b - a, TWO_PI, rel_tol=0, abs_tol=1e-14)

    if periodic:
        shifted = {float(np.mod(k - a, TWO_PI)): v for k, v in sing.items()}
        return integrate_piecewise(lambda t: f(np.mod(a + t, TWO_PI)), tags=shifted, n=n, rtol=rtol, n_max=n_max)

    def once(m):
        inner = sorted(t for t in sing if a < t < b)
        ends = [a] + inner + [b]
        total = 0.0
        for lo, hi in zip(ends[:-1], ends[1:]):
            t, w = panel_rule(lo, hi, m, _near(sing, lo), _near(sing, hi))
            total += float(np.sum(w * f(t)))
        return total

    prev = once(n)
    last = math.inf
    while n < n_max:
        n *= 2
        cur = once(n)
        change = abs(cur - prev) / max(abs(cur), 1e-300)
        if change <= rtol:
            return cur
        if _at_roundoff_floor(change, last):
            return prev
        prev, last = cur, change
    warnings.warn("graded quadrature did not settle; returning finest value", RuntimeWarning, stacklevel=2)
    return prev


def _at_roundoff_floor(change: float, last: float) -> bool:
    # Jacobi nodes crowd the endpoints, so rounding grows with n; once successive
    # differences stop shrinking at a tiny level the coarser value is the better one
    return change < 1e-9 and change >= last


def _near(sing: dict[float, float], t: float) -> float:
    for loc, e in sing.items():
        if abs(loc - t) < 1e-12:
            return e
    return 0.0


def gamma_fn(x: float) -> float:
    if not x > 0:
        raise DomainError(f"gamma_fn expects x > 0, got {x}")
    return math.gamma(x)


def beta_fn(a: float, b: float) -> float:
    if not (a > 0 and b > 0):
        raise DomainError(f"beta_fn expects a, b > 0, got {a}, {b}")
    return float(special.beta(a, b))


def elliptic_E(eps: float) -> float:
    """Complete elliptic integral of the second kind with modulus ``eps``."""
    if not 0.0 <= eps < 1.0:
        raise DomainError(f"elliptic_E expects modulus in [0, 1), got {eps}")
    return float(special.ellipe(eps * eps))
