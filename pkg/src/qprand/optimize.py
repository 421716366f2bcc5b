"""Kink-aware one-dimensional extremum search and the cloner optimality report."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import cloning
from .cloning import Panel

DEFAULT_GRID = 4096
DEFAULT_TOL = 1e-10
MATCH_TOL = 1e-8
PERIOD = math.pi / 2

_INV_PHI = (math.sqrt(5) - 1) / 2


class Kind(str, enum.Enum):
    MIN = "min"
    MAX = "max"


class PointClass(str, enum.Enum):
    SMOOTH = "interior-smooth"
    KINK = "kink"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class ExtremumSet:
    kind: Kind
    locations: tuple[float, ...]
    values: tuple[float, ...]
    classes: tuple[PointClass, ...]
    left_slopes: tuple[float, ...]
    right_slopes: tuple[float, ...]

    def __len__(self) -> int:
        return len(self.locations)

    def best(self) -> tuple[float, float]:
        """(location, value) of the global optimum among the local ones."""
        pick = min if self.kind is Kind.MIN else max
        i = pick(range(len(self.values)), key=lambda j: self.values[j])
        return self.locations[i], self.values[i]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "locations": list(self.locations),
            "values": list(self.values),
            "classes": [c.value for c in self.classes],
            "left_slopes": list(self.left_slopes),
            "right_slopes": list(self.right_slopes),
        }


def _golden(g: Callable[[float], float], a: float, b: float, tol: float) -> float:
    """Golden-section minimization of ``g`` on [a, b] down to width ``tol``."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    gc, gd = g(c), g(d)
    while b - a > tol:
        if gc <= gd:
            b, d, gd = d, c, gc
            c = b - _INV_PHI * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + _INV_PHI * (b - a)
            gd = g(d)
    return c if gc <= gd else d


def _slope_bisect(g, x: float, lo: float, hi: float, span: float, tol: float) -> float | None:
    """Bisect the sign change of a central difference around a smooth minimum."""
    h = 1e-6 * span
    w = 1e-5 * span
    a, b = max(lo + h, x - w), min(hi - h, x + w)
    if not a < x < b:
        return None

    def s(t: float) -> float:
        return g(t + h) - g(t - h)

    if not (s(a) < 0 < s(b)):
        return None
    while b - a > tol:
        m = 0.5 * (a + b)
        if s(m) < 0:
            a = m
        else:
            b = m
    return 0.5 * (a + b)


def one_sided_slopes(f: Callable[[float], float], x: float, lo: float, hi: float, h: float):
    left = (f(x) - f(x - h)) / h if x - h >= lo else math.nan
    right = (f(x + h) - f(x)) / h if x + h <= hi else math.nan
    return left, right


def scan_extrema(
    objective: Callable[[float], float],
    interval: tuple[float, float],
    grid_n: int = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
    kind: Kind | str = Kind.MIN,
) -> ExtremumSet:
    """All local minima (or maxima) of ``objective`` on a closed interval.

    A uniform grid brackets every extremum (boundaries included), golden
    section shrinks each bracket to ``tol``, and smooth interior points get a
    final bisection on the sign of a central difference, which golden
    section cannot resolve below ~sqrt(machine eps). Points closer than
    ``2*tol`` are merged. Kinks are recognized by disagreeing one-sided slopes.
    """
    kind = Kind(kind)
    lo, hi = map(float, interval)
    if not hi > lo:
        raise ValueError(f"degenerate interval [{lo}, {hi}]")
    if grid_n < 64:
        raise ValueError("grid_n must be at least 64")
    if tol <= 0:
        raise ValueError("tol must be positive")
    sign = 1.0 if kind is Kind.MIN else -1.0

    def g(x: float) -> float:
        return sign * float(objective(x))

    span = hi - lo
    xs = np.linspace(lo, hi, grid_n + 1)
    ys = np.array([g(x) for x in xs])

    brackets = []
    if ys[0] <= ys[1]:
        brackets.append((xs[0], xs[1]))
    for k in range(1, grid_n):
        if ys[k] < ys[k - 1] and ys[k] <= ys[k + 1]:
            brackets.append((xs[k - 1], xs[k + 1]))
    if ys[-1] < ys[-2]:
        brackets.append((xs[-2], xs[-1]))

    h_cls = 1e-7 * span
    slope_scale = max(float(np.max(np.abs(np.diff(ys)))) * grid_n / span, 1e-12)

    found: list[tuple[float, PointClass, float, float]] = []
    for a, b in brackets:
        x = _golden(g, a, b, tol)
        for edge in (lo, hi):
            if abs(x - edge) <= 2 * tol and g(edge) <= g(x):
                x = edge
        if x in (lo, hi):
            cls = PointClass.BOUNDARY
        else:
            ls, rs = one_sided_slopes(g, x, lo, hi, h_cls)
            if abs(rs - ls) > 1e-4 * slope_scale:
                cls = PointClass.KINK
            else:
                cls = PointClass.SMOOTH
                polished = _slope_bisect(g, x, lo, hi, span, tol)
                if polished is not None and g(polished) <= g(x) + 1e-15:
                    x = polished
        ls, rs = one_sided_slopes(objective, x, lo, hi, h_cls)
        found.append((x, cls, ls, rs))

    found.sort(key=lambda t: t[0])
    merged: list[tuple[float, PointClass, float, float]] = []
    for item in found:
        if merged and item[0] - merged[-1][0] <= 2 * tol:
            if g(item[0]) < g(merged[-1][0]):
                merged[-1] = item
            continue
        merged.append(item)

    return ExtremumSet(
        kind=kind,
        locations=tuple(float(m[0]) for m in merged),
        values=tuple(float(objective(m[0])) for m in merged),
        classes=tuple(m[1] for m in merged),
        left_slopes=tuple(m[2] for m in merged),
        right_slopes=tuple(m[3] for m in merged),
    )


def reduce_period(xs, period: float = PERIOD, tol: float = MATCH_TOL) -> list[float]:
    """Sorted distinct representatives of ``xs`` modulo ``period`` in [0, period)."""
    out: list[float] = []
    for x in xs:
        r = math.fmod(x, period)
        if r < 0:
            r += period
        if period - r <= tol:
            r = 0.0
        if not any(abs(r - y) <= tol for y in out):
            out.append(r)
    return sorted(out)


def same_locations(xs, ys, tol: float = MATCH_TOL, period: float | None = None) -> bool:
    if period is not None:
        xs, ys = reduce_period(xs, period, tol), reduce_period(ys, period, tol)
    if len(xs) != len(ys):
        return False
    return bool(all(abs(a - b) <= tol for a, b in zip(sorted(xs), sorted(ys))))


def location_error(found, expected) -> float:
    """Largest distance from any point of one set to the nearest point of the other."""
    if not found and not expected:
        return 0.0
    if not found or not expected:
        return math.inf
    d1 = max(min(abs(a - b) for b in expected) for a in found)
    d2 = max(min(abs(a - b) for a in found) for b in expected)
    return max(d1, d2)


@dataclass(frozen=True)
class OptimalityReport:
    theta: float
    panel: Panel
    grid_n: int
    tol: float
    argmax_F: ExtremumSet
    argmin_Q: ExtremumSet
    argmin_ratio: ExtremumSet
    argmax_Q: ExtremumSet
    coincide_Q_ratio: bool
    separation_F_vs_Q: bool
    analytic: cloning.StationaryReport
    crosscheck_error: float
    crosscheck_ok: bool

    @property
    def max_f(self) -> float:
        return self.argmax_F.best()[1]

    @property
    def min_ratio(self) -> float:
        return self.argmin_ratio.best()[1]

    def to_dict(self) -> dict:
        an = self.analytic
        return {
            "theta": self.theta,
            "panel": self.panel.value,
            "phi": an.phi,
            "gamma": an.gamma,
            "grid_n": self.grid_n,
            "tol": self.tol,
            "argmax_f": self.argmax_F.to_dict(),
            "argmin_q": self.argmin_Q.to_dict(),
            "argmin_ratio": self.argmin_ratio.to_dict(),
            "argmax_q": self.argmax_Q.to_dict(),
            "max_f": self.max_f,
            "min_ratio": self.min_ratio,
            "coincide_q_ratio": self.coincide_Q_ratio,
            "coincide_rule": "equal location sets modulo the pi/2 period of q_bar",
            "separation_f_vs_q": self.separation_F_vs_Q,
            "analytic": {
                "q_maxima": [asdict(p) for p in an.maxima],
                "q_minima": [asdict(p) for p in an.minima],
                "rejected_branches": list(an.rejected),
                "f_argmax": an.fidelity_argmax,
                "delta0": an.delta0,
            },
            "right_panel_gaps": "aa, beta, alpha, bb with gaps (delta, gamma, phi-delta-gamma)",
            "crosscheck_error": self.crosscheck_error,
            "crosscheck_ok": self.crosscheck_ok,
        }


def optimality_report(
    theta: float,
    panel: Panel | str = Panel.LEFT,
    grid_n: int = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
    match_tol: float = MATCH_TOL,
) -> OptimalityReport:
    """Which delta is optimal for fidelity, for randomness, and for their ratio."""
    panel = Panel(panel)
    analytic = cloning.sd_stationary_points(theta, panel)
    interval = (0.0, math.pi / 2)

    def fbar(d: float) -> float:
        return float(cloning.sd_fidelity(theta, d, panel))

    def qbar(d: float) -> float:
        return float(cloning.sd_randomness(theta, d, panel))

    def ratio(d: float) -> float:
        return cloning.sd_ratio(theta, d, panel)

    arg_f = scan_extrema(fbar, interval, grid_n, tol, Kind.MAX)
    arg_q = scan_extrema(qbar, interval, grid_n, tol, Kind.MIN)
    arg_qmax = scan_extrema(qbar, interval, grid_n, tol, Kind.MAX)
    arg_r = scan_extrema(ratio, interval, grid_n, tol, Kind.MIN)

    interior_max = [x for x, c in zip(arg_qmax.locations, arg_qmax.classes) if c is not PointClass.BOUNDARY]
    err = max(
        location_error(interior_max, [p.delta for p in analytic.maxima]),
        location_error(list(arg_q.locations), [p.delta for p in analytic.minima]),
        abs(arg_f.best()[0] - analytic.fidelity_argmax),
    )
    separated = bool(all(
        abs(a - b) > match_tol for a in arg_f.locations for b in arg_q.locations
    ))
    return OptimalityReport(
        theta=theta,
        panel=panel,
        grid_n=grid_n,
        tol=tol,
        argmax_F=arg_f,
        argmin_Q=arg_q,
        argmin_ratio=arg_r,
        argmax_Q=arg_qmax,
        coincide_Q_ratio=same_locations(arg_r.locations, arg_q.locations, match_tol, PERIOD),
        separation_F_vs_Q=separated,
        analytic=analytic,
        crosscheck_error=err,
        crosscheck_ok=bool(err <= match_tol),
    )
