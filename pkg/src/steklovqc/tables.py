"""Reference tables for regular polygons, ellipses and hippopedes."""
from __future__ import annotations

import csv
import io
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .bounds import rho_max
from .factors import GeometricFactors, closed_form_factors
from .geometry import make_ellipse, make_hippopede, make_polygon
from .spectrum import steklov_eigenvalues

TABLES = {
    1: ("polygon", "N", [3, 4, 5, 6, 8, 10]),
    2: ("ellipse", "eps^2", [Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(8, 9),
                             Fraction(99, 100)]),
    3: ("hippopede", "delta^2", [Fraction(1, 100), Fraction(1, 16), Fraction(1, 9), Fraction(1, 4),
                                 Fraction(1, 2), Fraction(3, 4), Fraction(1)]),
}


@dataclass(frozen=True)
class Column:
    label: str
    rho_max: float | None
    argmax: int | None
    settled: bool
    factors: GeometricFactors


@dataclass(frozen=True)
class Table:
    number: int
    family: str
    key: str
    columns: list[Column]

    @property
    def has_gamma(self) -> bool:
        return self.family != "ellipse"

    def rows(self) -> list[tuple[str, list[str]]]:
        out = []
        if any(c.rho_max is not None for c in self.columns):
            out.append(("rho_max", [_rho_cell(c) for c in self.columns]))
        out.append(("g", [_num(c.factors.g) for c in self.columns]))
        if self.has_gamma:
            out.append(("gamma", [_num(c.factors.gamma) for c in self.columns]))
        return out

    def to_text(self) -> str:
        head = [self.key] + [c.label for c in self.columns]
        body = [[name] + cells for name, cells in self.rows()]
        widths = [max(len(r[i]) for r in [head] + body) for i in range(len(head))]
        lines = ["  ".join(s.rjust(w) for s, w in zip(r, widths)) for r in [head] + body]
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([self.key, "rho_max", "argmax_n", "settled", "g", "gamma"])
        for c in self.columns:
            w.writerow([c.label, _raw(c.rho_max), "" if c.argmax is None else c.argmax, int(c.settled),
                        _raw(c.factors.g), _raw(c.factors.gamma)])
        return buf.getvalue()


def _num(x) -> str:
    if x is None:
        return "-"
    return "inf" if math.isinf(x) else f"{x:.4f}"


def _raw(x) -> str:
    if x is None:
        return ""
    return "inf" if math.isinf(x) else repr(float(x))


def _rho_cell(c: Column) -> str:
    if c.rho_max is None:
        return "-"
    s = f"{c.rho_max:.4f} (n={c.argmax})"
    return s if c.settled else f"~{s}*"


def _domain(family: str, value):
    if family == "polygon":
        return make_polygon(int(value)), int(value)
    root = math.sqrt(float(value))
    return (make_ellipse(root) if family == "ellipse" else make_hippopede(root)), root


def build_table(which: int, n_max: int = 20, spectra: bool = True, **solver_kw) -> Table:
    """Assemble one table; ``spectra=False`` skips the eigenvalue solves (factor rows only)."""
    if which not in TABLES:
        raise ValueError("table must be 1, 2 or 3")
    family, key, values = TABLES[which]
    cols = []
    for v in values:
        d, param = _domain(family, v)
        f = closed_form_factors(family, param)
        if family == "ellipse":
            f = GeometricFactors(f.g0, f.g1)
        rmax = arg = None
        settled = True
        if spectra:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RuntimeWarning)
                spec = steklov_eigenvalues(d, None, n_max, **solver_kw)
            rmax, arg = rho_max(spec, n_max)
            # Galerkin eigenvalues only decrease with refinement, so unsettled
            # eigenvalues past the argmax cannot lift a later rho_n above it
            settled = bool(np.all(spec.settled()[:arg]))
        cols.append(Column(str(v), rmax, arg, settled, f))
    return Table(which, family, key, cols)
