"""Standard qubit teleportation through an arbitrary two-qubit resource."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import process
from .process import KrausChannel, ProcessStats
from .qcore import (
    PAULI_I,
    PAULI_X,
    PAULI_Z,
    PHI_MINUS,
    PHI_PLUS,
    PSI_MINUS,
    PSI_PLUS,
    as_density,
    hermitian_eig,
    projector,
)

P_MIN = -1.0 / 3.0
RANGE_ATOL = 1e-12

# Bell outcome on (input, Alice) -> Bob's Pauli correction
BELL_CORRECTIONS = (
    (PHI_PLUS, PAULI_I),
    (PHI_MINUS, PAULI_Z),
    (PSI_PLUS, PAULI_X),
    (PSI_MINUS, PAULI_X @ PAULI_Z),
)


class ResourceKind(str, enum.Enum):
    BELL = "bell"
    WERNER = "werner"
    NOISY_NONMAX = "noisy_nonmax"
    CUSTOM = "custom"


def _check_p(p: float) -> None:
    if not P_MIN - RANGE_ATOL <= p <= 1 + RANGE_ATOL:
        raise ValueError(f"p={p!r} outside [-1/3, 1]")


def _check_theta(theta: float) -> None:
    if not -RANGE_ATOL <= theta <= math.pi / 4 + RANGE_ATOL:
        raise ValueError(f"theta={theta!r} outside [0, pi/4]")


@dataclass(frozen=True)
class TeleportResource:
    kind: ResourceKind
    state: np.ndarray
    p: float | None = None
    theta: float | None = None

    @classmethod
    def bell(cls) -> TeleportResource:
        return cls(ResourceKind.BELL, projector(PHI_PLUS))

    @classmethod
    def werner(cls, p: float) -> TeleportResource:
        _check_p(p)
        rho = p * projector(PHI_PLUS) + (1 - p) / 4 * np.eye(4)
        return cls(ResourceKind.WERNER, rho, p=p)

    @classmethod
    def noisy_nonmax(cls, p: float, theta: float) -> TeleportResource:
        _check_theta(theta)
        eta = np.array([math.cos(theta), 0, 0, math.sin(theta)], dtype=complex)
        rho = p * projector(eta) + (1 - p) / 4 * np.eye(4)
        try:
            as_density(rho, atol=1e-10)
        except ValueError as exc:
            raise ValueError(f"noisy resource with p={p!r} is not a valid state: {exc}") from None
        return cls(ResourceKind.NOISY_NONMAX, rho, p=p, theta=theta)

    @classmethod
    def custom(cls, rho) -> TeleportResource:
        return cls(ResourceKind.CUSTOM, as_density(rho, atol=1e-10))


def teleport_channel(resource: TeleportResource) -> KrausChannel:
    """Bell measurement on (input, Alice), Pauli correction on Bob.

    The resource is split into its eigenvectors; each eigenvector and each of
    the four outcomes gives one Kraus operator
    ``sqrt(r) sigma_k (<B_k| x I)(I x |psi>)``.
    """
    eig = hermitian_eig(resource.state)
    ops = []
    for r, psi in zip(eig.eigenvalues, eig.vectors.T):
        if r <= 1e-14:
            continue
        # |phi>_1 |psi>_AB as a map C^2 -> C^8, indices (1, A, B ; in)
        embed = np.einsum("ij,ab->iabj", np.eye(2), psi.reshape(2, 2))
        for bell, corr in BELL_CORRECTIONS:
            proj = np.einsum("ia,iabj->bj", bell.reshape(2, 2).conj(), embed)
            ops.append(math.sqrt(r) * corr @ proj)
    return KrausChannel(tuple(ops))


@dataclass(frozen=True)
class TeleportPointStats:
    mu: float
    nu: float
    fidelity: float
    randomness: float


def teleport_point_stats(p: float, theta: float, mu: float, nu: float) -> TeleportPointStats:
    """Closed-form fidelity and randomness for the input with Bloch angles (mu, nu)."""
    _check_p(p)
    _check_theta(theta)
    s = math.sin(2 * theta)
    ab2 = (math.cos(mu / 2) * math.sin(mu / 2)) ** 2
    f = (1 + p) / 2 - 2 * p * (1 - s) * ab2
    # standard deviation needs |p|; p < 0 is allowed down to -1/3
    q = abs(p) / 4 * (1 - s) * abs(math.sin(2 * mu))
    return TeleportPointStats(mu, nu, f, q)


def simulated_point_stats(p: float, theta: float, mu: float, nu: float) -> TeleportPointStats:
    """Same quantities via the generic channel pipeline with target = input."""
    channel = teleport_channel(TeleportResource.noisy_nonmax(p, theta))
    psi = process.qubit_from_angles(mu, nu)
    rho = process.apply_channel(channel, psi)
    return TeleportPointStats(
        mu, nu, process.fidelity(rho, psi), process.randomness_closed_form(rho, psi)
    )


def teleport_averages(p: float, theta: float) -> ProcessStats:
    _check_p(p)
    _check_theta(theta)
    s = math.sin(2 * theta)
    return ProcessStats((1 + p) / 2 - p / 3 * (1 - s), abs(p) / 6 * (1 - s))


def teleport_monte_carlo(
    p: float, theta: float, n_samples: int, seed: int, workers: int = 1
) -> ProcessStats:
    channel = teleport_channel(TeleportResource.noisy_nonmax(p, theta))
    return process.average_over_haar(channel, n_samples=n_samples, seed=seed, workers=workers)
