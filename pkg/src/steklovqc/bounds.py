"""Eigenvalue-sum bounds and their comparison with computed spectra."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import BoundViolation, NonPositiveEigenvalue
from .spectrum import SteklovSpectrum

SUM_TOL = 1e-4
INDIVIDUAL_TOL = 1e-6


def disk_sum(n: int) -> int:
    """sum_{j=1}^n ceil(j/2), the normalized eigenvalue sum of the disk."""
    return (n * (n + 2)) // 4 if n % 2 == 0 else (n + 1) ** 2 // 4


def disk_values(n: int) -> np.ndarray:
    return np.ceil(np.arange(1, n + 1) / 2.0)


def theorem_sum_bound(factor: float, n: int) -> float:
    """2 pi factor sum ceil(j/2); infinite factors give an infinite bound."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not math.isfinite(factor):
        return math.inf
    return 2.0 * math.pi * factor * disk_sum(n)


def hps_bounds(n: int) -> dict:
    """Summed and individual Hersch-Payne-Schiffer bounds and Weinstock's bound."""
    return {"sum": math.pi * n * (n + 1), "individual": [2.0 * math.pi * j for j in range(1, n + 1)],
            "weinstock": 2.0 * math.pi}


def improvement_threshold(n: int) -> float:
    """Largest factor for which the sum bound beats summed HPS at this n."""
    return 2.0 * (n + 1) / (n + 2) if n % 2 == 0 else 2.0 * n / (n + 1)


@dataclass(frozen=True)
class ConcaveFunctional:
    """C in sum C(sigma_j L).  ``param`` is s for power kinds and t for neg_exp."""

    kind: str = "identity"
    param: float | None = None

    KINDS = ("identity", "power", "log", "neg_power", "neg_exp")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"kind must be one of {self.KINDS}")
        if self.kind == "power" and not (self.param is not None and 0 < self.param <= 1):
            raise ValueError("power needs 0 < s <= 1")
        if self.kind == "neg_power" and not (self.param is not None and self.param < 0):
            raise ValueError("neg_power needs s < 0")
        if self.kind == "neg_exp" and not (self.param is not None and self.param > 0):
            raise ValueError("neg_exp needs t > 0")

    @property
    def reversed(self) -> bool:
        """Decreasing kinds, for which the inequality reads as a lower bound."""
        return self.kind in ("neg_power", "neg_exp")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "identity":
            return x
        if self.kind == "power" or self.kind == "neg_power":
            return x**self.param
        if self.kind == "log":
            return np.log(x)
        return np.exp(-self.param * x)


def functional_bound(spec: SteklovSpectrum, C: ConcaveFunctional, factor: float, n: int,
                     tol: float = SUM_TOL):
    """(lhs, rhs, satisfied) for sum C over the first n normalized eigenvalues.

    Increasing kinds: sum C(sigma_j L) <= sum C(2 pi factor ceil(j/2)).
    Decreasing kinds: sum C(sigma_j L / factor) >= sum C(2 pi ceil(j/2)).
    """
    x = spec.normalized[:n]
    if x.size < n:
        raise ValueError(f"spectrum has only {x.size} eigenvalues")
    if np.any(x <= 0):
        raise NonPositiveEigenvalue("all eigenvalues must be positive")
    disk = 2.0 * math.pi * disk_values(n)
    if C.reversed:
        lhs, rhs = float(np.sum(C(x / factor))), float(np.sum(C(disk)))
        return lhs, rhs, lhs >= rhs - tol
    lhs, rhs = float(np.sum(C(x))), float(np.sum(C(factor * disk)))
    return lhs, rhs, lhs <= rhs + tol


def rho(spec: SteklovSpectrum, n: int) -> float:
    if n > len(spec):
        raise ValueError(f"only {len(spec)} eigenvalues available")
    return float(np.sum(spec.normalized[:n]) / (2.0 * math.pi * disk_sum(n)))


def rho_all(spec: SteklovSpectrum, n_max: int | None = None) -> np.ndarray:
    n_max = len(spec) if n_max is None else n_max
    sums = np.cumsum(spec.normalized[:n_max])
    return sums / (2.0 * math.pi * np.cumsum(disk_values(n_max)))


def _argmax(r: np.ndarray, rtol: float = 1e-10) -> int:
    """First index within rounding of the maximum, so that ties go to the smallest n."""
    return int(np.flatnonzero(r >= r.max() * (1.0 - rtol))[0])


def rho_max(spec: SteklovSpectrum, n_max: int | None = None) -> tuple[float, int]:
    r = rho_all(spec, n_max)
    k = _argmax(r)
    return float(r[k]), k + 1


@dataclass
class BoundRow:
    n: int
    sum: float
    bound_g: float
    bound_gamma: float
    hps: float
    rho_n: float
    tightest: str


@dataclass
class BoundReport:
    rows: list[BoundRow]
    g: float
    gamma: float
    rho_max: float
    argmax: int
    normalized: list[float] = field(default_factory=list)

    COLUMNS = ("n", "sum", "bound_g", "bound_gamma", "hps", "rho_n")

    def violations(self, tol: float = SUM_TOL, individual_tol: float = INDIVIDUAL_TOL) -> list[str]:
        out = []
        for j, x in enumerate(self.normalized, start=1):
            if x > 2 * math.pi * j + individual_tol:
                what = "Weinstock" if j == 1 else "HPS individual"
                out.append(f"{what}: sigma_{j} L = {x:.8g} > {2 * math.pi * j:.8g}")
        for r in self.rows:
            if r.sum > r.bound_g + tol:
                out.append(f"n={r.n}: sum {r.sum:.8g} exceeds g-bound {r.bound_g:.8g}")
            if r.sum > r.bound_gamma + tol:
                out.append(f"n={r.n}: sum {r.sum:.8g} exceeds gamma-bound {r.bound_gamma:.8g}")
            if r.sum > r.hps + tol:
                out.append(f"n={r.n}: sum {r.sum:.8g} exceeds summed HPS {r.hps:.8g}")
        if self.rho_max > self.g + tol:
            out.append(f"rho_max {self.rho_max:.8g} exceeds g {self.g:.8g}")
        if math.isfinite(self.gamma) and self.rho_max > self.gamma + tol:
            out.append(f"rho_max {self.rho_max:.8g} exceeds gamma {self.gamma:.8g}")
        return out

    def check(self, **kw) -> None:
        v = self.violations(**kw)
        if v:
            raise BoundViolation("; ".join(v))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.COLUMNS)
        for r in self.rows:
            w.writerow([r.n] + [_fmt(getattr(r, c)) for c in self.COLUMNS[1:]])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(_encode(asdict(self)), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "BoundReport":
        raw = _decode(json.loads(text))
        rows = [BoundRow(**r) for r in raw.pop("rows")]
        return cls(rows=rows, **raw)


def _fmt(x: float) -> str:
    return "inf" if x == math.inf else repr(float(x))


def _encode(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_encode(v) for v in obj]
    return obj


def _decode(obj):
    if obj in ("inf", "-inf", "nan"):
        return float(obj)
    if isinstance(obj, dict):
        return {k: _decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_decode(v) for v in obj]
    return obj


def report_from_spectrum(spec: SteklovSpectrum, g: float, gamma: float | None = None,
                         n_max: int | None = None) -> BoundReport:
    n_max = len(spec) if n_max is None else min(n_max, len(spec))
    gamma = math.inf if gamma is None else gamma
    x = spec.normalized[:n_max]
    r = rho_all(spec, n_max)
    rows = []
    for n in range(1, n_max + 1):
        s = float(np.sum(x[:n]))
        bg, bm, h = theorem_sum_bound(g, n), theorem_sum_bound(gamma, n), hps_bounds(n)["sum"]
        tight = min((bg, "g"), (bm, "gamma"), (h, "hps"))[1]
        rows.append(BoundRow(n, s, bg, bm, h, float(r[n - 1]), tight))
    k = _argmax(r)
    return BoundReport(rows, float(g), float(gamma), float(r[k]), k + 1, [float(v) for v in x])


def comparison_report(d, q=None, n_max: int = 20, spec: SteklovSpectrum | None = None,
                      factors=None, check: bool = True, **solver_kw) -> BoundReport:
    """Solve, evaluate the factors, tabulate every bound and (optionally) assert them."""
    from .factors import g_factor
    from .spectrum import steklov_eigenvalues

    spec = spec if spec is not None else steklov_eigenvalues(d, q, n_max, **solver_kw)
    factors = factors if factors is not None else g_factor(d, q)
    rep = report_from_spectrum(spec, factors.g, factors.gamma, n_max)
    if check:
        rep.check()
    return rep
