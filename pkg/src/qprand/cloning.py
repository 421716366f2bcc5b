"""Universal (Buzek-Hillery) and state-dependent approximate qubit cloners."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import process
from .process import KrausChannel, ProcessStats
from .qcore import (
    PSI_PLUS,
    DimensionError,
    as_state,
    basis,
    complete_basis,
    partial_trace,
    projector,
    tensor,
)

BH_FIDELITY = 5.0 / 6.0
BH_RESIDUAL_ATOL = 1e-10
ANGLE_ATOL = 1e-12

_UP = basis(2, 0)
_DOWN = basis(2, 1)
_S23 = math.sqrt(2.0 / 3.0)
_S13 = math.sqrt(1.0 / 3.0)

# images of |0>|blank>|M> and |1>|blank>|M>; ordering (original, clone, machine)
_BH_IMAGE = (
    _S23 * tensor(basis(4, 0), _UP) + _S13 * tensor(PSI_PLUS, _DOWN),
    _S23 * tensor(basis(4, 3), _DOWN) + _S13 * tensor(PSI_PLUS, _UP),
)
BH_DIMS = (2, 2, 2)
BH_CLONE, BH_ORIGINAL = 1, 0


@dataclass(frozen=True)
class BHOutput:
    joint_state: np.ndarray
    clone_state: np.ndarray
    original_state: np.ndarray


def bh_isometry() -> np.ndarray:
    """8x2 isometry extending the two basis rules linearly."""
    return np.column_stack(_BH_IMAGE)


def bh_clone(state) -> BHOutput:
    psi = as_state(state)
    if psi.shape != (2,):
        raise DimensionError("the Buzek-Hillery machine clones qubits only")
    joint = bh_isometry() @ psi
    rho = projector(joint)
    return BHOutput(
        joint_state=joint,
        clone_state=partial_trace(rho, BH_DIMS, keep=BH_CLONE),
        original_state=partial_trace(rho, BH_DIMS, keep=BH_ORIGINAL),
    )


def bh_channel() -> KrausChannel:
    """Qubit-to-qubit channel onto the clone marginal."""
    v = bh_isometry().reshape(2, 2, 2, 2)  # (original, clone, machine, input)
    return KrausChannel(tuple(v[o, :, m, :] for o in range(2) for m in range(2)))


def bh_residuals(n_samples: int = 1000, seed: int = 0) -> dict[str, float]:
    """Largest deviations of apply-and-measure results from F = 5/6, Q = 0.

    Each Haar input is cloned through the explicit joint state and measured
    both via the completed eigenbasis and via the second-moment form.
    """
    rng = np.random.default_rng(seed)
    states = process.haar_sample_qubits(rng, n_samples)
    f_dev = q_closed = q_dist = sym = 0.0
    fids = []
    for psi in states:
        out = bh_clone(psi)
        f = process.fidelity(out.clone_state, psi)
        fids.append(f)
        f_dev = max(f_dev, abs(f - BH_FIDELITY))
        q_closed = max(q_closed, process.randomness_closed_form(out.clone_state, psi))
        dist = process.measurement_distribution(out.clone_state, psi)
        q_dist = max(q_dist, process.randomness_from_distribution(dist))
        sym = max(sym, float(np.max(np.abs(out.clone_state - out.original_state))))
    mc = process.average_over_haar(bh_channel(), n_samples=n_samples, seed=seed)
    return {
        "max_abs_f_minus_5_6": f_dev,
        "max_q_closed_form": q_closed,
        "max_q_distribution": q_dist,
        "fidelity_spread": float(max(fids) - min(fids)),
        "max_clone_original_asymmetry": sym,
        "mc_f_bar_residual": abs(mc.fidelity - BH_FIDELITY),
        "mc_q_bar_residual": abs(mc.randomness),
    }


def bh_stats(n_samples: int = 1000, seed: int = 0) -> ProcessStats:
    """Exact averages F = 5/6, Q = 0, checked against a seeded simulation."""
    res = bh_residuals(n_samples, seed)
    bad = {k: v for k, v in res.items() if v > BH_RESIDUAL_ATOL}
    if bad:
        raise RuntimeError(f"Buzek-Hillery simulation disagrees with exact values: {bad}")
    return ProcessStats(BH_FIDELITY, 0.0)


class Panel(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class DegenerateEnsembleError(ValueError):
    pass


def _check_theta(theta: float, *, open_interval: bool) -> None:
    if not -ANGLE_ATOL <= theta <= math.pi / 4 + ANGLE_ATOL:
        raise ValueError(f"theta={theta!r} outside [0, pi/4]")
    if open_interval:
        if theta <= ANGLE_ATOL:
            raise DegenerateEnsembleError(
                "theta=0 is the orthogonal ensemble: |a> and |b> are orthogonal and exact cloning is possible"
            )
        if theta >= math.pi / 4 - ANGLE_ATOL:
            raise DegenerateEnsembleError(
                "theta=pi/4 is the identical-state ensemble: |a> = |b> and exact cloning is possible"
            )


def ensemble_angles(theta: float) -> tuple[float, float]:
    """(phi, gamma): angles between |aa>,|bb> and between the cloner outputs."""
    s = math.sin(2 * theta)
    return math.acos(min(1.0, s * s)), math.acos(min(1.0, s))


@dataclass(frozen=True)
class CloneGeometry:
    """Planar layout of the state-dependent cloner.

    Left panel orders the rays as aa, alpha, beta, bb with gaps
    (delta, gamma, phi - delta - gamma); the right panel swaps alpha and beta.
    """

    theta: float
    delta: float
    panel: Panel = Panel.LEFT
    phi: float = field(init=False)
    gamma: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "panel", Panel(self.panel))
        _check_theta(self.theta, open_interval=False)
        if not -ANGLE_ATOL <= self.delta <= math.pi / 2 + ANGLE_ATOL:
            raise ValueError(f"delta={self.delta!r} outside [0, pi/2]")
        phi, gamma = ensemble_angles(self.theta)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "gamma", gamma)
        rest = phi - self.delta - gamma
        if not -math.pi / 2 - ANGLE_ATOL <= rest <= math.pi / 2 + ANGLE_ATOL:
            raise ValueError("phi - delta - gamma outside [-pi/2, pi/2]")

    @property
    def offsets(self) -> tuple[float, float]:
        """(o1, o2) with angle(alpha, aa) = delta + o1 and angle(beta, bb) = o2 - delta."""
        if self.panel is Panel.LEFT:
            return 0.0, self.phi - self.gamma
        return self.gamma, self.phi


def qubit_pair(theta: float) -> tuple[np.ndarray, np.ndarray]:
    a = np.array([math.cos(theta), math.sin(theta)], dtype=complex)
    b = np.array([math.sin(theta), math.cos(theta)], dtype=complex)
    return a, b


def sd_states(geom: CloneGeometry) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(alpha, beta, aa, bb) as real vectors in the plane of |aa>, |bb>."""
    a, b = qubit_pair(geom.theta)
    aa, bb = tensor(a, a), tensor(b, b)
    r = bb - np.vdot(aa, bb) * aa
    nrm = np.linalg.norm(r)
    # aa == bb at theta = pi/4; any orthogonal direction spans a valid plane
    e2 = r / nrm if nrm > 1e-12 else complete_basis([aa], 4)[1]

    def ray(angle: float) -> np.ndarray:
        return math.cos(angle) * aa + math.sin(angle) * e2

    if geom.panel is Panel.LEFT:
        alpha, beta = ray(geom.delta), ray(geom.delta + geom.gamma)
    else:
        beta, alpha = ray(geom.delta), ray(geom.delta + geom.gamma)
    return alpha, beta, aa, bb


def sd_stats_from_states(geom: CloneGeometry) -> ProcessStats:
    """Averages from genuine overlaps <alpha|aa>, <beta|bb> and the pure-output form."""
    alpha, beta, aa, bb = sd_states(geom)
    fa = abs(np.vdot(aa, alpha)) ** 2
    fb = abs(np.vdot(bb, beta)) ** 2
    qa = process.pure_output_randomness(alpha, aa)
    qb = process.pure_output_randomness(beta, bb)
    return ProcessStats(0.5 * (fa + fb), 0.5 * (qa + qb))


def sd_fidelity(theta: float, delta, panel: Panel = Panel.LEFT):
    o1, o2 = CloneGeometry(theta, 0.0, panel).offsets
    delta = np.asarray(delta, dtype=float)
    return 0.5 * (np.cos(delta + o1) ** 2 + np.cos(o2 - delta) ** 2)


def sd_randomness(theta: float, delta, panel: Panel = Panel.LEFT):
    o1, o2 = CloneGeometry(theta, 0.0, panel).offsets
    delta = np.asarray(delta, dtype=float)
    return 0.25 * (np.abs(np.sin(2 * (delta + o1))) + np.abs(np.sin(2 * (o2 - delta))))


def sd_ratio(theta: float, delta: float, panel: Panel = Panel.LEFT) -> float:
    f = float(sd_fidelity(theta, delta, panel))
    q = float(sd_randomness(theta, delta, panel))
    # F > 0 on the whole delta range for theta in (0, pi/4); at F ~ 0 fall back to q - f
    return process.figure_of_merit(f, q).value


def sd_stats(geom: CloneGeometry) -> ProcessStats:
    return ProcessStats(
        float(sd_fidelity(geom.theta, geom.delta, geom.panel)),
        float(sd_randomness(geom.theta, geom.delta, geom.panel)),
    )


def _abs_sin2_slopes(x: float, sign: float) -> tuple[float, float]:
    """Left and right derivatives in delta of |sin 2x| where x = const + sign * delta."""
    s, c = math.sin(2 * x), math.cos(2 * x)
    if abs(s) <= 1e-13:
        return -2 * abs(c), 2 * abs(c)
    d = 2 * c * math.copysign(1.0, s) * sign
    return d, d


def sd_randomness_slopes(theta: float, delta: float, panel: Panel = Panel.LEFT) -> tuple[float, float]:
    """Exact one-sided derivatives (left, right) of the average randomness in delta."""
    o1, o2 = CloneGeometry(theta, 0.0, panel).offsets
    l1, r1 = _abs_sin2_slopes(delta + o1, 1.0)
    l2, r2 = _abs_sin2_slopes(o2 - delta, -1.0)
    return 0.25 * (l1 + l2), 0.25 * (r1 + r2)


@dataclass(frozen=True)
class StationaryPoint:
    delta: float
    kind: str  # "max" or "min"
    label: str
    second_derivative: float | None = None
    left_slope: float | None = None
    right_slope: float | None = None


@dataclass(frozen=True)
class StationaryReport:
    theta: float
    panel: Panel
    phi: float
    gamma: float
    maxima: tuple[StationaryPoint, ...]
    minima: tuple[StationaryPoint, ...]
    rejected: tuple[str, ...]
    fidelity_argmax: float

    @property
    def delta0(self) -> float:
        return self.phi - self.gamma


def _in_range(x: float) -> bool:
    return -ANGLE_ATOL <= x <= math.pi / 2 + ANGLE_ATOL


def _wrap_candidates(base: float, period: float) -> list[float]:
    out = []
    for k in range(-4, 5):
        x = base + k * period
        if _in_range(x):
            out.append(min(max(x, 0.0), math.pi / 2))
    return out


def sd_fidelity_argmax(theta: float, panel: Panel = Panel.LEFT) -> float:
    """Exact maximizer of the average fidelity on [0, pi/2].

    F = 1/2 + 1/2 cos(o1 + o2) cos(2 delta + o1 - o2), so the optimum is a
    stationary point of the second cosine or a boundary.
    """
    o1, o2 = CloneGeometry(theta, 0.0, panel).offsets
    cands = [0.0, math.pi / 2] + _wrap_candidates((o2 - o1) / 2, math.pi / 2)
    return max(sorted(cands), key=lambda d: float(sd_fidelity(theta, d, panel)))


def sd_stationary_points(theta: float, panel: Panel = Panel.LEFT) -> StationaryReport:
    """Analytic extrema of the average randomness over one period [0, pi/2].

    Smooth stationary points sit midway between kinks, at
    delta = (o2 - o1)/2 mod pi/4; there the second derivative is
    -(|sin 2u1| + |sin 2u2|) < 0, so all of them are maxima. Minima are
    kinks (|sin| argument crossing a multiple of pi/2) or boundaries.
    """
    panel = Panel(panel)
    _check_theta(theta, open_interval=True)
    geom = CloneGeometry(theta, 0.0, panel)
    o1, o2 = geom.offsets
    phi, gamma = geom.phi, geom.gamma

    maxima = []
    for d in sorted(set(_wrap_candidates((o2 - o1) / 2, math.pi / 4))):
        u1, u2 = d + o1, o2 - d
        curv = -(abs(math.sin(2 * u1)) + abs(math.sin(2 * u2)))
        ls, rs = sd_randomness_slopes(theta, d, panel)
        if panel is Panel.LEFT:
            label = "case I: delta = (phi - gamma)/2" if math.sin(2 * u2) > 0 else (
                "case II: delta = pi/4 + (phi - gamma)/2"
            )
        else:
            label = "smooth maximum"
        maxima.append(StationaryPoint(d, "max", label, curv, ls, rs))

    kinks = _wrap_candidates(-o1, math.pi / 2) + _wrap_candidates(o2, math.pi / 2)
    minima = []
    for d in sorted(set(kinks + [0.0, math.pi / 2])):
        ls, rs = sd_randomness_slopes(theta, d, panel)
        at_lo, at_hi = d <= 0.0, d >= math.pi / 2
        is_min = (at_lo and rs > 0) or (at_hi and ls < 0) or (ls < 0 < rs)
        if not is_min:
            continue
        if panel is Panel.LEFT and abs(d - (phi - gamma)) <= 1e-12:
            label = "delta0 = phi - gamma (kink)"
        elif at_lo or at_hi:
            label = "boundary"
        else:
            label = "kink"
        minima.append(StationaryPoint(d, "min", label, None, ls, rs))

    rejected = (
        "case I '-' branch: phi = gamma (orthogonal or identical states only)",
        "case II '-' branch: phi - gamma = pi/2 (impossible, phi - gamma < pi/2)",
    )
    return StationaryReport(
        theta=theta,
        panel=panel,
        phi=phi,
        gamma=gamma,
        maxima=tuple(maxima),
        minima=_dedupe(minima),
        rejected=rejected,
        fidelity_argmax=sd_fidelity_argmax(theta, panel),
    )


def _dedupe(points: list[StationaryPoint]) -> tuple[StationaryPoint, ...]:
    out: list[StationaryPoint] = []
    for p in points:
        if out and abs(p.delta - out[-1].delta) <= 1e-12:
            continue
        out.append(p)
    return tuple(out)
