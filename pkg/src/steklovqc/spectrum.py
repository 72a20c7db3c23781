"""Steklov eigenvalues by Galerkin projection onto harmonic polynomials.

For harmonic trial functions Green's identity turns both the Dirichlet form and the
boundary mass form into boundary integrals,

    A_ij = int_Sigma phi_i d_n phi_j ds,    M_ij = int_Sigma phi_i phi_j q ds,

so only boundary quadrature is needed.  The trial space is spanned by the real and
imaginary parts of complex polynomials of degree <= K.  Monomials are hopeless for
elongated domains, so by default the polynomials are orthonormalized on the boundary
by an Arnoldi recurrence (Vandermonde with Arnoldi), which also yields derivatives.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientBasis, NoConvergence
from .geometry import BoundaryWeight, StarlikeDomain, conformal_weight, make_disk
from .numerics import TWO_PI, periodic_panel_rule

K_START = 16
K_MAX = 256
NODES_PER_DEGREE = 32
ASYMMETRY_LIMIT = 1e-9
MAX_QUAD_NODES = 2**17


@dataclass(frozen=True)
class HarmonicBasis:
    """Complex polynomials q_0..q_K; the real basis is Re q_0, Re q_1, Im q_1, Re q_2, ..."""

    degree: int
    kind: str = "arnoldi"
    H: np.ndarray | None = None
    q0: float = 1.0
    scale: float = 1.0

    @classmethod
    def build(cls, z: np.ndarray, ds: np.ndarray, degree: int, kind: str = "arnoldi") -> "HarmonicBasis":
        return cls.fit(z, ds, degree, kind)[0]

    @classmethod
    def fit(cls, z: np.ndarray, ds: np.ndarray, degree: int, kind: str = "arnoldi"):
        """Basis orthonormal for the inner product sum(ds * f * conj(g)) on nodes ``z``,
        returned with its values and derivatives there."""
        if degree < 1:
            raise ValueError("degree must be >= 1")
        if kind == "monomial":
            hb = cls(degree, "monomial", scale=float(np.max(np.abs(z))))
            return (hb, *hb.evaluate(z))
        if kind != "arnoldi":
            raise ValueError(f"unknown basis kind {kind!r}")
        m = z.size
        Q = np.zeros((m, degree + 1), complex, order="F")
        D = np.zeros_like(Q)
        H = np.zeros((degree + 1, degree), complex)
        q0 = 1.0 / math.sqrt(float(np.sum(ds)))
        Q[:, 0] = q0
        for k in range(degree):
            v = z * Q[:, k]
            for _ in range(2):  # classical Gram-Schmidt, twice
                h = np.conj(np.conj(ds * v) @ Q[:, : k + 1])
                v = v - Q[:, : k + 1] @ h
                H[: k + 1, k] += h
            H[k + 1, k] = math.sqrt(float(np.sum(ds * np.abs(v) ** 2)))
            Q[:, k + 1] = v / H[k + 1, k]
            D[:, k + 1] = (Q[:, k] + z * D[:, k] - D[:, : k + 1] @ H[: k + 1, k]) / H[k + 1, k]
        H.setflags(write=False)
        return cls(degree, "arnoldi", H=H, q0=q0), Q, D

    @property
    def size(self) -> int:
        return 2 * self.degree + 1

    def evaluate(self, z: np.ndarray):
        """Complex values Q and z-derivatives D, each of shape (len(z), degree + 1)."""
        z = np.asarray(z, dtype=complex)
        K = self.degree
        if self.kind == "monomial":
            k = np.arange(K + 1)
            w = z[:, None] / self.scale
            Q = w**k
            D = np.zeros_like(Q)
            D[:, 1:] = k[1:] * w ** (k[1:] - 1) / self.scale
            return Q, D
        Q = np.zeros((z.size, K + 1), complex)
        D = np.zeros_like(Q)
        Q[:, 0] = self.q0
        H = self.H
        for k in range(K):
            Q[:, k + 1] = (z * Q[:, k] - Q[:, : k + 1] @ H[: k + 1, k]) / H[k + 1, k]
            D[:, k + 1] = (Q[:, k] + z * D[:, k] - D[:, : k + 1] @ H[: k + 1, k]) / H[k + 1, k]
        return Q, D

    @staticmethod
    def realify(C: np.ndarray) -> np.ndarray:
        K = C.shape[1] - 1
        out = np.empty((C.shape[0], 2 * K + 1))
        out[:, 0] = C[:, 0].real
        out[:, 1::2] = C[:, 1:].real
        out[:, 2::2] = C[:, 1:].imag
        return out


@dataclass(frozen=True)
class GalerkinSystem:
    A: np.ndarray
    M: np.ndarray
    L: float
    basis: HarmonicBasis
    nodes: int
    asymmetry: float

    @property
    def condition(self) -> float:
        ev = np.linalg.eigvalsh(self.M)
        return float(ev[-1] / max(ev[0], 1e-300))

    @property
    def ill_conditioned(self) -> bool:
        return self.condition > 1e14


@dataclass(frozen=True)
class SteklovSpectrum:
    """Nonzero eigenvalues sigma_1 <= ... <= sigma_n with the weighted perimeter L."""

    eigenvalues: np.ndarray
    L: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def normalized(self) -> np.ndarray:
        """sigma_j * L, invariant under scaling of the domain."""
        return self.eigenvalues * self.L

    @property
    def converged(self) -> bool:
        return bool(self.diagnostics.get("converged", True))

    def settled(self, rtol: float = 1e-6) -> np.ndarray:
        """Mask of eigenvalues that moved less than ``rtol`` at the last degree doubling."""
        ch = self.diagnostics.get("changes")
        if ch is None or self.converged:
            return np.ones(len(self), bool)
        return np.asarray(ch) < rtol

    def __len__(self) -> int:
        return self.eigenvalues.size


def _nodes(d: StarlikeDomain, nq: int):
    t, w = d.quadrature(nq)
    return t, w


def assemble(d: StarlikeDomain, q: BoundaryWeight | None = None, K: int = 32, nq: int | None = None,
             basis: str = "arnoldi") -> GalerkinSystem:
    """Stiffness A and boundary mass M of the degree-``K`` harmonic polynomial space."""
    if nq is None:
        nq = max(NODES_PER_DEGREE * K, 1024)
    if nq < 8 * K:
        raise ValueError(f"need at least 8K = {8 * K} quadrature nodes, got {nq}")
    t, w = _nodes(d, nq)
    z = d.point(t) - d.center
    dz = d.tangent(t)
    speed = np.abs(dz)
    hb, Q, D = HarmonicBasis.fit(z, speed * w, K, basis)
    Phi = HarmonicBasis.realify(Q)
    # normal derivative times ds: grad(Re f).N ds = Re(f'(z) * (-i dz))
    dPhi = HarmonicBasis.realify(D * (-1j * dz)[:, None])
    A = Phi.T @ (w[:, None] * dPhi)
    nrm = np.linalg.norm(A)
    asym = float(np.linalg.norm(A - A.T) / nrm) if nrm > 0 else 0.0
    A = 0.5 * (A + A.T)

    if q is not None and q.singularity is not None:
        # separate Gauss-Jacobi nodes for a singular weight
        tm, wm = periodic_panel_rule(d.breakpoints, max(64, nq // 16), _sing_map(q))
        Qm, _ = hb.evaluate(d.point(tm) - d.center)
        Pm = HarmonicBasis.realify(Qm)
        dsm = d.speed(tm) * wm * q(tm)
        M = Pm.T @ (dsm[:, None] * Pm)
        L = float(np.sum(dsm))
    else:
        qv = 1.0 if q is None else q(t)
        dsq = speed * w * qv
        M = Phi.T @ (dsq[:, None] * Phi)
        L = float(np.sum(dsq))
    M = 0.5 * (M + M.T)
    return GalerkinSystem(A, M, L, hb, int(t.size), asym)


def _sing_map(q: BoundaryWeight) -> dict[float, float]:
    return {loc: q.singularity.exponent for loc in q.singularity.locations}


def solve(A: np.ndarray, M: np.ndarray, n: int, svd_tol: float = 1e-12, L: float = TWO_PI) -> SteklovSpectrum:
    """First ``n`` nonzero eigenvalues of A x = sigma M x on the well-resolved part of M."""
    lam, V = np.linalg.eigh(M)
    keep = lam > svd_tol * lam[-1]
    T = V[:, keep] / np.sqrt(lam[keep])
    S = T.T @ A @ T
    sig, Y = np.linalg.eigh(0.5 * (S + S.T))
    # sigma_0 = 0 belongs to the constants
    sig, Y = sig[1:], Y[:, 1:]
    if np.count_nonzero(sig > 0) < n:
        raise InsufficientBasis(f"only {np.count_nonzero(sig > 0)} positive eigenvalues survive truncation, need {n}")
    X = T @ Y[:, :n]
    res = A @ X - (M @ X) * sig[:n]
    resid = float(np.max(np.linalg.norm(res, axis=0) / np.maximum(np.linalg.norm(A @ X, axis=0), 1e-300)))
    diag = {"rank": int(np.count_nonzero(keep)), "svd_tol": svd_tol, "residual": resid}
    return SteklovSpectrum(np.array(sig[:n]), float(L), diag)


def _solve_at(d, q, K, n, nq, basis, svd_tol):
    nq = nq or max(NODES_PER_DEGREE * K, 1024)
    while True:
        sysm = assemble(d, q, K, nq, basis)
        if sysm.asymmetry <= ASYMMETRY_LIMIT or nq >= MAX_QUAD_NODES or d.breakpoints:
            break
        nq *= 2
    spec = solve(sysm.A, sysm.M, n, svd_tol, sysm.L)
    spec.diagnostics.update(degree=K, nodes=sysm.nodes, asymmetry=sysm.asymmetry,
                            ill_conditioned=sysm.ill_conditioned, basis=basis)
    return spec


def steklov_eigenvalues(d: StarlikeDomain, q: BoundaryWeight | None = None, n: int = 20, *,
                        K: int | None = None, nq: int | None = None, basis: str = "arnoldi",
                        route: str = "auto", svd_tol: float = 1e-12, rtol: float = 1e-6,
                        k_max: int = K_MAX, strict: bool = False) -> SteklovSpectrum:
    """sigma_1..sigma_n of the domain with boundary weight q (default q = 1).

    With ``K`` given, a single solve at that degree.  Otherwise K doubles from 16 until
    the eigenvalues move by less than ``rtol`` (relative) or ``k_max`` is reached;
    in the latter case the result is flagged ``converged = False`` (or NoConvergence is
    raised when ``strict``).

    ``route="conformal"`` solves the equivalent weighted problem on the unit disk with
    the boundary weight of a conformal map (available for hippopedes and disks, q = 1);
    ``"auto"`` picks it for hippopedes, whose pinched waist slows polynomial convergence.
    """
    if route == "auto":
        route = "conformal" if (d.family == "hippopede" and q is None) else "starlike"
    if route == "conformal":
        if q is not None:
            raise ValueError("the conformal route assumes q = 1")
        spec = conformal_spectrum(conformal_weight(d.family, d.param), n, K=K, nq=nq, basis=basis,
                                  svd_tol=svd_tol, rtol=rtol, k_max=k_max, strict=strict)
        spec.diagnostics["route"] = "conformal"
        return spec
    if route != "starlike":
        raise ValueError(f"unknown route {route!r}")

    if K is not None:
        spec = _solve_at(d, q, K, n, nq, basis, svd_tol)
        spec.diagnostics.update(route=route, converged=True)
        return spec

    k = K_START
    while 2 * k + 1 <= n:
        k *= 2
    prev = None
    while True:
        try:
            spec = _solve_at(d, q, k, n, nq, basis, svd_tol)
        except InsufficientBasis:
            spec = None
        if spec is not None:
            if prev is not None:
                # per-index relative movement since the previous degree
                moved = np.abs(spec.eigenvalues - prev.eigenvalues) / prev.eigenvalues
                spec.diagnostics["changes"] = moved.tolist()
                if moved.max() < rtol:
                    spec.diagnostics.update(route=route, converged=True, change=float(moved.max()))
                    return spec
            prev = spec
        if 2 * k > k_max:
            break
        k *= 2
    if prev is None:
        raise InsufficientBasis(f"no degree up to {k_max} resolves {n} eigenvalues")
    change = max(prev.diagnostics.get("changes", [math.nan]))
    msg = f"eigenvalues still moving by {change:.2e} at degree {prev.diagnostics['degree']}"
    if strict:
        raise NoConvergence(msg)
    warnings.warn(msg, RuntimeWarning, stacklevel=2)
    prev.diagnostics.update(route=route, converged=False, change=change)
    return prev


def conformal_spectrum(p: BoundaryWeight, n: int = 20, **kw) -> SteklovSpectrum:
    """Weighted Steklov problem on the unit disk, d_n u = sigma p u on the circle.

    If p = |f'| for a conformal map f of the disk onto a domain, this equals the
    unweighted spectrum of that domain, and L is the mass of p.
    """
    kw = {**kw, "route": "starlike"}
    if kw.get("K") is None:
        kw.pop("K", None)
    return steklov_eigenvalues(make_disk(1.0), p, n, **kw)
