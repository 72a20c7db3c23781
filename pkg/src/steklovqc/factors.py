"""Geometric distortion factors of a domain: quasiconformal (g0, g1, g) and conformal (gamma1, gamma).

Starlike domains use the radial stretch z -> R(theta) z of the unit disk, for which
a0 = 1 + (log R)'^2, a1 = 1 and p = q * sqrt(R^2 + R'^2).  The conformal route works
directly with a boundary weight p on the circle.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from scipy import optimize, special

from .errors import DegenerateDilatation, DivergentIntegral, InfeasibleOrigin, NotInL2
from .geometry import (AngularDilatation, BoundaryWeight, StarlikeDomain, conformal_weight,
                       starlike_dilatation, weighted_perimeter)
from .numerics import TWO_PI, SingularityTag, elliptic_E, gamma_fn, integrate_piecewise

INF = math.inf


@dataclass(frozen=True)
class GeometricFactors:
    """Factor bundle. ``None`` marks a factor that was not computed for this input."""

    g0: float | None = None
    g1: float | None = None
    gamma1: float | None = None
    gamma: float | None = None

    @property
    def g(self) -> float | None:
        if self.g0 is None or self.g1 is None:
            return None
        return math.sqrt(self.g0 * self.g1)

    @property
    def finite(self) -> dict[str, bool]:
        vals = {"g0": self.g0, "g1": self.g1, "g": self.g, "gamma1": self.gamma1, "gamma": self.gamma}
        return {k: v is not None and math.isfinite(v) for k, v in vals.items()}

    def as_dict(self) -> dict:
        out = asdict(self)
        out["g"] = self.g
        return out


@dataclass(frozen=True)
class MobiusResult:
    zeta_min: complex
    A: float
    B: complex
    gamma_star: float


def dilatation_coeffs(mu: AngularDilatation | Callable, theta):
    """(a0, a1, a2) of an angular dilatation at ``theta``."""
    m = mu(np.asarray(theta, dtype=float))
    if np.any(np.abs(m) >= 1.0):
        raise DegenerateDilatation("|mu| >= 1")
    e2 = np.exp(2j * np.asarray(theta, dtype=float))
    den = 1.0 - np.abs(m) ** 2
    a0 = np.abs(e2 - m) ** 2 / den
    a1 = np.abs(e2 + m) ** 2 / den
    a2 = 2.0 * np.imag(np.conj(e2 + m) * (e2 - m)) / den
    return a0, a1, a2


def _mean(f, breaks=(), tags=None) -> float:
    return integrate_piecewise(f, breaks, tags) / TWO_PI


def g0_starlike(d: StarlikeDomain) -> float:
    return 1.0 + _mean(lambda t: (d.dR(t) / d.R(t)) ** 2, d.breakpoints)


def g1_starlike(d: StarlikeDomain, q: BoundaryWeight | None = None) -> float:
    qf = (lambda t: 1.0) if q is None else q
    num = _mean(lambda t: (d.R(t) ** 2 + d.dR(t) ** 2) * qf(t) ** 2, d.breakpoints)
    den = _mean(lambda t: d.speed(t) * qf(t), d.breakpoints)
    return num / den**2


def gamma1(p: BoundaryWeight) -> float:
    if not p.l2_flag:
        return INF
    try:
        m2 = p.integral(2.0)
    except DivergentIntegral:
        return INF
    return (m2 / TWO_PI) / (p.mass() / TWO_PI) ** 2


def _moments(p: BoundaryWeight):
    """(A, B, mass) with A = int p^2, B = int p^2 e^{i theta}."""
    A = p.integral(2.0)
    B = p.integral(2.0, factor=lambda t: np.exp(1j * t))
    return A, complex(B), p.mass()


def gamma(p: BoundaryWeight) -> float:
    if not p.l2_flag:
        return INF
    try:
        A, B, mass = _moments(p)
    except DivergentIntegral:
        return INF
    # (A/2pi)^2 - |B/2pi|^2 written as a product to avoid cancellation
    s = (A - abs(B)) * (A + abs(B)) / TWO_PI**2
    return s**0.25 / (mass / TWO_PI)


def mobius_optimize(p: BoundaryWeight) -> MobiusResult:
    """Mobius reparametrization of the circle minimizing int p~^2, in closed form."""
    if not p.l2_flag:
        raise NotInL2("weight is not square integrable")
    try:
        A, B, mass = _moments(p)
    except DivergentIntegral as exc:
        raise NotInL2(str(exc)) from exc
    c = B / A
    zeta = -c / (1.0 + math.sqrt(max(0.0, 1.0 - abs(c) ** 2)))
    gstar = math.sqrt((A - abs(B)) * (A + abs(B))) / (TWO_PI * (mass / TWO_PI) ** 2)
    return MobiusResult(complex(zeta), float(A), complex(B), float(gstar))


def mobius_pushforward(p: BoundaryWeight, zeta: complex, phi: float = 0.0) -> BoundaryWeight:
    """Weight p~(psi) = p(arg z) |dz/du| with u = e^{i(psi - phi)}, z = (u - zeta)/(1 - conj(zeta) u)."""
    zeta = complex(zeta)
    if abs(zeta) >= 1:
        raise ValueError("need |zeta| < 1")
    if zeta == 0 and phi == 0:
        return p
    s = 1.0 - abs(zeta) ** 2

    def dens(psi):
        u = np.exp(1j * (np.asarray(psi, dtype=float) - phi))
        den = 1.0 - np.conj(zeta) * u
        z = (u - zeta) / den
        return p(np.mod(np.angle(z), TWO_PI)) * s / np.abs(den) ** 2

    tag = None
    if p.singularity is not None:
        z = np.exp(1j * np.asarray(p.singularity.locations))
        u = (z + zeta) / (1.0 + np.conj(zeta) * z)
        locs = tuple(np.mod(np.angle(u) + phi, TWO_PI))
        tag = SingularityTag(locs, p.singularity.exponent)
    return BoundaryWeight(dens, l2_flag=p.l2_flag, singularity=tag)


def qc_factors(mu: AngularDilatation, p: BoundaryWeight) -> GeometricFactors:
    """g0, g1 for a general angular dilatation with circle weight p."""
    tags = p.singularity.scaled(2.0) if p.singularity is not None else None
    g0 = _mean(lambda t: dilatation_coeffs(mu, t)[0])
    try:
        num = _mean(lambda t: dilatation_coeffs(mu, t)[1] * p(t) ** 2, tags=tags)
        g1 = num / (p.mass() / TWO_PI) ** 2
    except DivergentIntegral:
        g1 = INF
    return GeometricFactors(g0=g0, g1=g1)


def g_factor(d: StarlikeDomain, q: BoundaryWeight | None = None) -> GeometricFactors:
    """Starlike factors by quadrature, plus conformal factors when the family has a known map."""
    g0 = g0_starlike(d)
    g1 = g1_starlike(d, q)
    gm1 = gm = None
    if (q is None or q.constant is not None) and d.family in ("polygon", "hippopede", "disk"):
        p = conformal_weight(d.family, d.param)
        if q is not None:
            p = BoundaryWeight(lambda t, p=p: q.constant * p(t), p.l2_flag, p.singularity)
        gm1, gm = gamma1(p), gamma(p)
    return GeometricFactors(g0=g0, g1=g1, gamma1=gm1, gamma=gm)


# --- choice of polar origin -------------------------------------------------

@dataclass(frozen=True)
class _Boundary:
    t: np.ndarray
    w: np.ndarray
    x: np.ndarray
    nds: np.ndarray  # outward normal times ds/dtheta
    q: np.ndarray

    @classmethod
    def sample(cls, d: StarlikeDomain, q: BoundaryWeight | None, n: int) -> "_Boundary":
        t, w = d.quadrature(n)
        qv = np.ones_like(t) if q is None else q(t)
        return cls(t, w, d.point(t), -1j * d.tangent(t), qv)


def origin_factors(d: StarlikeDomain, omega, q: BoundaryWeight | None = None, n: int = 4096,
                   grad: bool = False, _bd: _Boundary | None = None):
    """Starlike (g0, g1) of the same curve taken in polar form about ``omega``.

    Uses boundary integrals in the original parametrization, so the radius
    function about ``omega`` is never formed:
    2 pi g0 = int ds / ((x - w).N) and int (R^2 + R'^2) dphi = int |x - w|^2 / ((x - w).N) ds.
    """
    w = complex(*omega) if not isinstance(omega, complex) else omega
    bd = _bd or _Boundary.sample(d, q, n)
    wt, x, nds, qv = bd.w, bd.x, bd.nds, bd.q
    speed = np.abs(nds)
    y = x - w
    k = np.real(np.conj(y) * nds)  # (x - w).N ds/dtheta
    if np.min(k / speed) <= 0:
        raise InfeasibleOrigin(f"{omega} is outside the star-shaped kernel")
    I0 = np.sum(wt * speed**2 / k)
    I1 = np.sum(wt * qv**2 * np.abs(y) ** 2 * speed**2 / k)
    Lq = np.sum(wt * qv * speed)
    g0 = I0 / TWO_PI
    g1 = (I1 / TWO_PI) / (Lq / TWO_PI) ** 2
    if not grad:
        return g0, g1
    # gradients in omega, as complex numbers d/dx + i d/dy
    dI0 = np.sum(wt * speed**2 * nds / k**2)
    dI1 = np.sum(wt * qv**2 * speed**2 * (-2.0 * y / k + np.abs(y) ** 2 * nds / k**2))
    return g0, g1, dI0 / TWO_PI, (dI1 / TWO_PI) / (Lq / TWO_PI) ** 2


_OBJECTIVES = {
    "g": lambda g0, g1: math.sqrt(g0 * g1),
    "g0": lambda g0, g1: g0,
    "g1": lambda g0, g1: g1,
}


@dataclass(frozen=True)
class OriginResult:
    omega: tuple[float, float]
    factors: GeometricFactors
    objective: str
    grid_best: tuple[float, float]
    grid_value: float


def optimize_origin(d: StarlikeDomain, q: BoundaryWeight | None = None, start=None,
                    objective: str = "g", n: int = 4096, grid: int = 21) -> OriginResult:
    """Minimize g (or g0, g1) over polar origins in the kernel.

    Nelder-Mead from the centroid, then Newton polishing on the analytic gradient.
    A ``grid`` x ``grid`` scan of the bounding box is kept as a sanity reference.
    """
    fobj = _OBJECTIVES[objective]
    bd = _Boundary.sample(d, q, n)

    def value(v):
        try:
            return fobj(*origin_factors(d, complex(v[0], v[1]), _bd=bd))
        except InfeasibleOrigin:
            return INF

    def gradient(v):
        g0, g1, d0, d1 = origin_factors(d, complex(v[0], v[1]), grad=True, _bd=bd)
        if objective == "g0":
            gc = d0
        elif objective == "g1":
            gc = d1
        else:
            gc = 0.5 * (d0 * g1 + g0 * d1) / math.sqrt(g0 * g1)
        return np.array([gc.real, gc.imag])

    c0 = d.centroid() if start is None else complex(*start)
    if not math.isfinite(value((c0.real, c0.imag))):
        raise InfeasibleOrigin("starting point is outside the kernel")
    res = optimize.minimize(value, [c0.real, c0.imag], method="Nelder-Mead",
                            options={"xatol": 1e-10, "fatol": 1e-15, "maxiter": 4000,
                                     "initial_simplex": _simplex(d, c0)})
    best = res.x
    try:
        pol = optimize.root(gradient, best, method="hybr", options={"xtol": 1e-14})
        # hybr often stalls at round-off and reports failure; judge it by the gradient
        if (np.linalg.norm(gradient(pol.x)) < np.linalg.norm(gradient(best))
                and value(pol.x) <= value(best) + 1e-14):
            best = pol.x
    except InfeasibleOrigin:
        pass

    pts = d.point(TWO_PI * np.arange(512) / 512)
    xs = np.linspace(pts.real.min(), pts.real.max(), grid + 2)[1:-1]
    ys = np.linspace(pts.imag.min(), pts.imag.max(), grid + 2)[1:-1]
    scan = [(value((a, b)), a, b) for a in xs for b in ys]
    gv, gx, gy = min(scan)

    g0, g1 = origin_factors(d, complex(*best), _bd=bd)
    return OriginResult((float(best[0]), float(best[1])), GeometricFactors(g0=g0, g1=g1), objective,
                        (float(gx), float(gy)), float(gv))


def _simplex(d: StarlikeDomain, c: complex):
    h = 0.05 * float(np.min(d.R(TWO_PI * np.arange(64) / 64)))
    return np.array([[c.real, c.imag], [c.real + h, c.imag], [c.real, c.imag + h]])


# --- closed forms for the example families ----------------------------------

def polygon_factors(N: int) -> GeometricFactors:
    t = math.tan(math.pi / N)
    g0 = N / math.pi * t
    g1 = math.pi / N * (t / 3.0 + 1.0 / t)
    if N <= 4:
        gm = INF
    else:
        gm = math.sqrt(gamma_fn(1 - 4 / N)) * gamma_fn(1 - 1 / N) ** 2 / gamma_fn(1 - 2 / N) ** 2
    return GeometricFactors(g0=g0, g1=g1, gamma1=gm * gm, gamma=gm)


def ellipse_factors(eps: float) -> GeometricFactors:
    e2 = eps * eps
    root = math.sqrt(1.0 - e2)
    g0 = (1.0 - e2 / 2.0) / root
    g1 = (1.0 - e2 + e2 * e2 / 8.0) / root * (math.pi / (2.0 * elliptic_E(eps))) ** 2
    return GeometricFactors(g0=g0, g1=g1)


def hippopede_factors(delta: float, L: float | None = None) -> GeometricFactors:
    """Closed forms in delta; the perimeter L comes from quadrature unless given."""
    from .geometry import make_hippopede

    if L is None:
        L = weighted_perimeter(make_hippopede(delta))
    scale = TWO_PI / L
    g0 = (1.0 + delta**2) / (2.0 * delta)
    g1 = (1.0 - delta + delta**2) * scale**2
    gm = math.sqrt((1.0 + delta**4) / (2.0 * delta)) * scale
    return GeometricFactors(g0=g0, g1=g1, gamma1=gm * gm, gamma=gm)


def closed_form_factors(family: str, param) -> GeometricFactors:
    if family == "polygon":
        return polygon_factors(int(param))
    if family == "ellipse":
        return ellipse_factors(float(param))
    if family == "hippopede":
        return hippopede_factors(float(param))
    if family == "disk":
        return GeometricFactors(1.0, 1.0, 1.0, 1.0)
    raise ValueError(f"no closed form for {family!r}")


# --- large-N behaviour of the polygon factors --------------------------------

G_SERIES = (math.pi**2 / 6, 7 * math.pi**4 / 72)            # N^-2, N^-4
G_DROPPED = 101 * math.pi**6 / 2160                          # N^-6
GAMMA_SERIES = (math.pi**2 / 6, 6 * special.zeta(3), 103 * math.pi**4 / 360)  # N^-2, N^-3, N^-4
GAMMA_DROPPED = 90 * special.zeta(5) + math.pi**2 * special.zeta(3)          # N^-5


def g_expansion(N: float) -> float:
    return 1.0 + G_SERIES[0] / N**2 + G_SERIES[1] / N**4


def gamma_expansion(N: float) -> float:
    return 1.0 + GAMMA_SERIES[0] / N**2 + GAMMA_SERIES[1] / N**3 + GAMMA_SERIES[2] / N**4


def asymptotic_check(N: int) -> dict[str, float]:
    """Scaled remainders of the large-N expansions of the polygon g and gamma.

    ``g_scaled`` = |g - expansion| N^6 and ``gamma_scaled`` = |gamma - expansion| N^5;
    the ``*_ratio`` entries divide these by the coefficient of the first omitted term.
    """
    f = polygon_factors(N)
    gs = abs(f.g - g_expansion(N)) * N**6
    ms = abs(f.gamma - gamma_expansion(N)) * N**5
    return {"N": N, "g_scaled": gs, "gamma_scaled": ms,
            "g_ratio": gs / G_DROPPED, "gamma_ratio": ms / GAMMA_DROPPED}


# --- Dirichlet integral under the radial stretch -----------------------------

TEST_FUNCTIONS = {
    # name: (h, h_r, h_theta) in polar coordinates of the unit disk
    "r cos": (lambda r, t: r * np.cos(t), lambda r, t: np.cos(t), lambda r, t: -r * np.sin(t)),
    "r2 sin2": (lambda r, t: r**2 * np.sin(2 * t), lambda r, t: 2 * r * np.sin(2 * t),
                lambda r, t: 2 * r**2 * np.cos(2 * t)),
    "r3 cos3": (lambda r, t: r**3 * np.cos(3 * t), lambda r, t: 3 * r**2 * np.cos(3 * t),
                lambda r, t: -3 * r**3 * np.sin(3 * t)),
}


def verify_dirichlet_transform(d: StarlikeDomain, h="r cos", n_theta: int = 1024, n_r: int = 24) -> float:
    """Relative gap between the Dirichlet integral of h o f^{-1} over the domain and its
    disk expression with coefficients a0, a1, a2 of the radial stretch f.

    The domain side differentiates H(x, y) = h(|x| / R(arg x), arg x) in Cartesian
    coordinates; the disk side uses ``dilatation_coeffs`` of ``starlike_dilatation``.
    """
    _, hr, ht = TEST_FUNCTIONS[h] if isinstance(h, str) else h
    t, wt = d.quadrature(n_theta)
    xr, wr = np.polynomial.legendre.leggauss(n_r)
    s, ws = 0.5 * (xr + 1.0), 0.5 * wr

    # disk side
    a0, a1, a2 = dilatation_coeffs(starlike_dilatation(d), t)
    rr, tt = np.meshgrid(s, t)
    Hr, Ht = hr(rr, tt), ht(rr, tt)
    dens = a0[:, None] * Hr**2 + a1[:, None] * Ht**2 / rr**2 + a2[:, None] * Hr * Ht / rr
    rhs = np.sum(wt[:, None] * ws[None, :] * dens * rr)

    # domain side: Cartesian gradient at rho = s R(theta)
    R, dR = d.R(t)[:, None], d.dR(t)[:, None]
    rho = s[None, :] * R
    x, y = rho * np.cos(tt), rho * np.sin(tt)
    grad_t = np.stack([-y, x]) / rho**2
    radial = np.stack([x, y]) / rho
    grad_u = radial / R - rho * dR / R**2 * grad_t  # gradient of rho / R(theta)
    gH = hr(rr, tt) * grad_u + ht(rr, tt) * grad_t
    lhs = np.sum(wt[:, None] * (ws[None, :] * R) * np.sum(gH**2, axis=0) * rho)
    return abs(lhs - rhs) / abs(lhs)
