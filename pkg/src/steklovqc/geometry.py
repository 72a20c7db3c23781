"""Planar domains in polar (starlike) form and boundary weights on the circle.

A starlike domain is stored through its radius function R(theta) about a polar
origin. The boundary point at angle theta is ``origin + R(theta) e^{i theta}`` and
the arclength density is sqrt(R^2 + R'^2).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable

import numpy as np

from .errors import InfeasibleOrigin, UnsupportedFamily
from .numerics import (TWO_PI, SingularityTag, beta_fn, integrate_piecewise,
                       periodic_panel_rule)

FAMILIES = ("disk", "polygon", "ellipse", "hippopede", "custom")


@dataclass(frozen=True)
class StarlikeDomain:
    radius: Callable[[np.ndarray], np.ndarray]
    radius_deriv: Callable[[np.ndarray], np.ndarray]
    origin: tuple[float, float] = (0.0, 0.0)
    family: str = "custom"
    param: float | None = None
    # angles where R' jumps (polygon vertices); quadrature panels end there
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "origin", (float(self.origin[0]), float(self.origin[1])))
        object.__setattr__(self, "breakpoints", tuple(sorted(float(np.mod(b, TWO_PI)) for b in self.breakpoints)))
        t = TWO_PI * np.arange(512) / 512
        r = self.R(t)
        if not np.all(np.isfinite(r)) or np.min(r) <= 0:
            raise ValueError("radius function must be finite and strictly positive")

    def R(self, theta):
        return self.radius(np.asarray(theta, dtype=float))

    def dR(self, theta):
        return self.radius_deriv(np.asarray(theta, dtype=float))

    @property
    def center(self) -> complex:
        return complex(*self.origin)

    def point(self, theta):
        theta = np.asarray(theta, dtype=float)
        return self.center + self.R(theta) * np.exp(1j * theta)

    def tangent(self, theta):
        """d/dtheta of the boundary point."""
        theta = np.asarray(theta, dtype=float)
        return (self.dR(theta) + 1j * self.R(theta)) * np.exp(1j * theta)

    def speed(self, theta):
        return np.hypot(self.R(theta), self.dR(theta))

    def quadrature(self, n: int):
        """``n``-point rule in theta: trapezoid if smooth, Gauss panels between breakpoints."""
        if not self.breakpoints:
            t = TWO_PI * np.arange(n) / n
            return t, np.full(n, TWO_PI / n)
        per_panel = max(16, -(-n // len(self.breakpoints)))
        return periodic_panel_rule(self.breakpoints, per_panel)

    def integrate(self, f: Callable[[np.ndarray], np.ndarray], tags=None) -> float:
        """Integral over theta in [0, 2*pi) of a function smooth between breakpoints."""
        return integrate_piecewise(f, breaks=self.breakpoints, tags=tags)

    def area(self) -> float:
        return 0.5 * self.integrate(lambda t: self.R(t) ** 2)

    def centroid(self) -> complex:
        a = self.area()
        m = self.integrate(lambda t: self.R(t) ** 3 * np.cos(t)) + 1j * self.integrate(lambda t: self.R(t) ** 3 * np.sin(t))
        return self.center + m / (3.0 * a)

    def kernel_margin(self, omega, n: int = 2048) -> float:
        """min over boundary samples of (x - omega).N(x) ds/dtheta; positive inside the kernel."""
        t, _ = self.quadrature(n)
        x = self.point(t)
        nds = -1j * self.tangent(t)
        w = complex(*omega) if not isinstance(omega, complex) else omega
        return float(np.min(np.real(np.conj(x - w) * nds) / np.abs(nds)))

    def scaled(self, c: float) -> "StarlikeDomain":
        r, dr = self.radius, self.radius_deriv
        return replace(self, radius=lambda t: c * r(t), radius_deriv=lambda t: c * dr(t), family="custom")

    def rotated(self, phi: float) -> "StarlikeDomain":
        r, dr = self.radius, self.radius_deriv
        return replace(self, radius=lambda t: r(np.mod(t - phi, TWO_PI)), radius_deriv=lambda t: dr(np.mod(t - phi, TWO_PI)),
                       breakpoints=tuple(b + phi for b in self.breakpoints), family="custom")


@dataclass(frozen=True)
class BoundaryWeight:
    """Positive 2*pi-periodic density in theta (q on the boundary, or p on the circle)."""

    density: Callable[[np.ndarray], np.ndarray]
    l2_flag: bool = True
    singularity: SingularityTag | None = None
    constant: float | None = None

    def __call__(self, theta):
        return self.density(np.asarray(theta, dtype=float))

    @classmethod
    def uniform(cls, c: float = 1.0) -> "BoundaryWeight":
        if c <= 0:
            raise ValueError("weight must be positive")
        return cls(lambda t: np.full(np.shape(t), float(c)), constant=float(c))

    def integral(self, power: float = 1.0, factor: Callable | None = None, breaks=()) -> float:
        """Integral of density**power * factor over one period (complex factor allowed)."""
        tags = self.singularity.scaled(power) if self.singularity is not None else None
        fn = (lambda t: self(t) ** power) if factor is None else (lambda t: self(t) ** power * factor(t))
        if factor is not None and np.iscomplexobj(factor(np.array([0.1]))):
            re = integrate_piecewise(lambda t: np.real(fn(t)), breaks, tags)
            im = integrate_piecewise(lambda t: np.imag(fn(t)), breaks, tags)
            return complex(re, im)
        return integrate_piecewise(fn, breaks, tags)

    def mass(self) -> float:
        return self.integral(1.0)


@dataclass(frozen=True)
class AngularDilatation:
    mu: Callable[[np.ndarray], np.ndarray]
    sup_norm: float = field(default=float("nan"))

    def __post_init__(self):
        if np.isnan(self.sup_norm):
            t = TWO_PI * np.arange(4096) / 4096
            object.__setattr__(self, "sup_norm", float(np.max(np.abs(self.mu(t)))))
        if not self.sup_norm < 1.0:
            raise ValueError(f"dilatation must satisfy sup|mu| < 1, got {self.sup_norm}")

    def __call__(self, theta):
        return self.mu(np.asarray(theta, dtype=float))


def make_disk(radius: float = 1.0, center: tuple[float, float] = (0.0, 0.0)) -> StarlikeDomain:
    """Disk of given radius whose center sits at ``center`` relative to the polar origin."""
    cx, cy = center
    if cx * cx + cy * cy >= radius * radius:
        raise InfeasibleOrigin("polar origin must lie inside the disk")
    if cx == 0 and cy == 0:
        return StarlikeDomain(lambda t: np.full(np.shape(t), float(radius)), lambda t: np.zeros(np.shape(t)),
                              family="disk", param=float(radius))

    def r(t):
        ce = cx * np.cos(t) + cy * np.sin(t)
        return ce + np.sqrt(radius**2 - cx**2 - cy**2 + ce**2)

    def dr(t):
        ce = cx * np.cos(t) + cy * np.sin(t)
        dce = -cx * np.sin(t) + cy * np.cos(t)
        return dce + ce * dce / np.sqrt(radius**2 - cx**2 - cy**2 + ce**2)

    return StarlikeDomain(r, dr, family="custom")


def _fold(theta, N):
    s = np.mod(theta, TWO_PI / N)
    upper = s > np.pi / N
    return np.where(upper, TWO_PI / N - s, s), np.where(upper, -1.0, 1.0)


def make_polygon(N: int) -> StarlikeDomain:
    """Regular N-gon with inscribed radius 1; an edge midpoint sits at theta = 0."""
    if N < 3 or int(N) != N:
        raise ValueError("polygon needs an integer N >= 3")
    N = int(N)

    def r(t):
        s, _ = _fold(t, N)
        return 1.0 / np.cos(s)

    def dr(t):
        s, sign = _fold(t, N)
        return sign * np.tan(s) / np.cos(s)

    vertices = tuple(np.pi / N + TWO_PI * k / N for k in range(N))
    return StarlikeDomain(r, dr, family="polygon", param=N, breakpoints=vertices)


def make_ellipse(eps: float) -> StarlikeDomain:
    """Ellipse with semiaxis 1 along x and eccentricity ``eps``."""
    if not 0.0 <= eps < 1.0:
        raise ValueError("eccentricity must lie in [0, 1)")
    e2 = eps * eps
    b = np.sqrt(1.0 - e2)

    def r(t):
        return b / np.sqrt(1.0 - e2 * np.cos(t) ** 2)

    def dr(t):
        return -b * e2 * np.cos(t) * np.sin(t) / (1.0 - e2 * np.cos(t) ** 2) ** 1.5

    return StarlikeDomain(r, dr, family="ellipse", param=float(eps))


def make_hippopede(delta: float) -> StarlikeDomain:
    """Inversion of a centered ellipse: R = sqrt(sin^2 + delta^2 cos^2)."""
    if not 0.0 < delta <= 1.0:
        raise ValueError("hippopede parameter must lie in (0, 1]")
    d2 = delta * delta

    def r(t):
        return np.sqrt(np.sin(t) ** 2 + d2 * np.cos(t) ** 2)

    def dr(t):
        return (1.0 - d2) * np.sin(t) * np.cos(t) / r(t)

    return StarlikeDomain(r, dr, family="hippopede", param=float(delta))


def make_convex_polygon(vertices, origin=(0.0, 0.0)) -> StarlikeDomain:
    """Convex polygon (vertices counterclockwise) in polar form about ``origin``."""
    v = np.asarray(vertices, dtype=float) - np.asarray(origin, dtype=float)
    edge = np.roll(v, -1, axis=0) - v
    normal = np.stack([edge[:, 1], -edge[:, 0]], axis=1)
    normal /= np.linalg.norm(normal, axis=1)[:, None]
    dist = np.sum(v * normal, axis=1)
    if np.any(dist <= 0):
        raise InfeasibleOrigin("origin must be interior and vertices counterclockwise")

    def pick(t):
        t = np.asarray(t, dtype=float)
        e = np.stack([np.cos(t), np.sin(t)], axis=-1)
        en = e @ normal.T
        with np.errstate(divide="ignore"):
            cand = np.where(en > 0, dist / np.where(en > 0, en, 1.0), np.inf)
        k = np.argmin(cand, axis=-1)
        return t, k, np.take_along_axis(cand, k[..., None], axis=-1)[..., 0]

    def r(t):
        return pick(t)[2]

    def dr(t):
        t, k, rr = pick(t)
        n = normal[k]
        en = np.cos(t) * n[..., 0] + np.sin(t) * n[..., 1]
        den = -np.sin(t) * n[..., 0] + np.cos(t) * n[..., 1]
        return -rr * den / en

    breaks = tuple(np.arctan2(v[:, 1], v[:, 0]))
    return StarlikeDomain(r, dr, origin=tuple(origin), family="custom", breakpoints=breaks)


def _trig_interpolant(values: np.ndarray) -> Callable[[np.ndarray], np.ndarray]:
    n = values.size
    c = np.fft.rfft(values) / n
    k = np.arange(c.size)
    wts = np.full(c.size, 2.0)
    wts[0] = 1.0
    if n % 2 == 0:
        wts[-1] = 1.0
    c = c * wts

    def f(t):
        t = np.asarray(t, dtype=float)
        return np.real(np.exp(1j * np.multiply.outer(t, k)) @ c)

    return f


def from_samples(samples, origin=(0.0, 0.0)) -> StarlikeDomain:
    """Custom domain from radius samples at theta_k = 2*pi*k/n.

    R' comes from 4th-order central differences on the sample grid; both R and R'
    are evaluated off-grid by trigonometric interpolation.
    """
    r = np.asarray(samples, dtype=float)
    if r.size < 8:
        raise ValueError("need at least 8 radius samples")
    h = TWO_PI / r.size
    dr = (-np.roll(r, -2) + 8 * np.roll(r, -1) - 8 * np.roll(r, 1) + np.roll(r, 2)) / (12 * h)
    return StarlikeDomain(_trig_interpolant(r), _trig_interpolant(dr), origin=tuple(origin), family="custom")


def recentered(d: StarlikeDomain, omega) -> StarlikeDomain:
    """Same boundary curve, polar form about the absolute point ``omega``."""
    w = complex(*omega) if not isinstance(omega, complex) else omega
    if d.kernel_margin(w) <= 0:
        raise InfeasibleOrigin(f"{omega} is outside the star-shaped kernel")
    m = 8192
    t0 = np.sort(np.concatenate([TWO_PI * np.arange(m) / m, np.asarray(d.breakpoints)]))
    phi0 = np.unwrap(np.angle(d.point(t0) - w))
    base = phi0[0]

    def solve(phi):
        phi = np.asarray(phi, dtype=float)
        target = base + np.mod(phi - base, TWO_PI)
        t = np.interp(target, np.append(phi0, phi0[0] + TWO_PI), np.append(t0, t0[0] + TWO_PI))
        for _ in range(30):
            z = d.point(t) - w
            resid = np.angle(np.exp(1j * (np.angle(z) - target)))
            rate = np.imag(d.tangent(t) / z)
            step = resid / rate
            t = t - step
            if np.max(np.abs(step)) < 1e-15:
                break
        return t

    def r(phi):
        return np.abs(d.point(solve(phi)) - w)

    def dr(phi):
        t = solve(phi)
        z = d.point(t) - w
        x1 = d.tangent(t)
        return np.real(np.conj(z) * x1) / np.abs(z) / np.imag(x1 / z)

    breaks = tuple(np.angle(d.point(np.asarray(d.breakpoints)) - w)) if d.breakpoints else ()
    return StarlikeDomain(r, dr, origin=(w.real, w.imag), family="custom", breakpoints=breaks)


def weighted_perimeter(d: StarlikeDomain, q: BoundaryWeight | None = None) -> float:
    if q is None or q.constant is not None:
        c = 1.0 if q is None else q.constant
        return c * d.integrate(d.speed)
    tags = q.singularity
    return d.integrate(lambda t: d.speed(t) * q(t), tags=tags)


def conformal_weight(family: str, param: float | None = None) -> BoundaryWeight:
    """Boundary weight p = |f'(e^{i theta})| of a conformal map from the unit disk.

    Polygon: Schwarz-Christoffel map, rescaled so the image has inscribed radius 1
    (matching :func:`make_polygon`); singular like |theta - 2*pi*k/N|**(-2/N).
    Hippopede: reciprocal of a Zhukovsky map onto the exterior of the inverted ellipse.
    """
    family = family.lower()
    if family == "disk":
        c = 1.0 if param is None else float(param)
        return BoundaryWeight.uniform(c)
    if family == "polygon":
        N = int(param)
        if N < 3:
            raise ValueError("polygon needs N >= 3")
        scale = N * np.tan(np.pi / N) / beta_fn(0.5 - 1.0 / N, 0.5)

        def p(t):
            return scale * np.abs(np.sin(0.5 * N * np.asarray(t))) ** (-2.0 / N)

        tag = SingularityTag(tuple(TWO_PI * k / N for k in range(N)), -2.0 / N)
        return BoundaryWeight(p, l2_flag=N > 4, singularity=tag)
    if family == "hippopede":
        d2 = float(param) ** 2

        def p(t):
            c2, s2 = np.cos(t) ** 2, np.sin(t) ** 2
            return np.sqrt(d2 * (d2 * c2 + s2)) / (c2 + d2 * s2)

        return BoundaryWeight(p)
    if family == "ellipse":
        raise UnsupportedFamily("no closed-form conformal map onto the ellipse")
    raise UnsupportedFamily(f"no conformal weight for family {family!r}")


def starlike_dilatation(d: StarlikeDomain) -> AngularDilatation:
    """Complex dilatation of the radial stretch z -> R(theta) z."""

    def mu(t):
        t = np.asarray(t, dtype=float)
        r, dr = d.R(t), d.dR(t)
        return np.exp(2j * t) * 1j * dr / (2 * r - 1j * dr)

    return AngularDilatation(mu)


def make_domain(family: str, param: float | None = None) -> StarlikeDomain:
    family = family.lower()
    if family == "disk":
        return make_disk(1.0 if param is None else float(param))
    if family == "polygon":
        return make_polygon(int(param))
    if family == "ellipse":
        return make_ellipse(float(param))
    if family == "hippopede":
        return make_hippopede(float(param))
    raise UnsupportedFamily(f"unknown family {family!r}")


def domain_from_config(cfg: dict) -> StarlikeDomain:
    """Build a domain from ``{"family", "param", "samples", "origin"}``.

    ``origin`` is the polar origin in plane coordinates; family shapes are centered at
    (0, 0), so a nonzero origin re-expresses the same curve about that point.
    """
    family = cfg.get("family")
    if family not in FAMILIES:
        raise ValueError(f"family must be one of {FAMILIES}, got {family!r}")
    origin = tuple(cfg.get("origin", (0.0, 0.0)))
    if len(origin) != 2:
        raise ValueError("origin must be [x, y]")
    if family == "custom":
        if cfg.get("samples") is None:
            raise ValueError("custom domains need 'samples'")
        return from_samples(cfg["samples"], origin=origin)
    if family != "disk" and cfg.get("param") is None:
        raise ValueError(f"family {family!r} needs 'param'")
    d = make_domain(family, cfg.get("param"))
    if origin != (0.0, 0.0):
        d = recentered(d, origin)
    return d


def load_domain(path) -> StarlikeDomain:
    return domain_from_config(json.loads(Path(path).read_text()))
