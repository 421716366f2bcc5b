"""Fidelity and process randomness of a quantum process.

A process maps a pure input ``|phi>`` to an output ``rho_phi``; a target map
assigns the ideal output ``|phi~>``. The fidelity is the mean of measuring
``|phi~>`` in the (completed) eigenbasis of ``rho_phi`` with outcome values
given by the eigenvalues; the randomness is the standard deviation of that
same measurement.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .qcore import (
    EIG_NEGATIVE_ATOL,
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    DimensionError,
    as_state,
    complete_basis,
    dagger,
    hermitian_eig,
    random_isometry,
)

TP_ATOL = 1e-10
RANK_ATOL = 1e-12
VARIANCE_CLAMP = 1e-12
MERIT_ZERO = 1e-12
HAAR_CHUNK = 1 << 16

# A target map takes a batch of input amplitudes, shape (n, d_in), and returns
# the ideal outputs, shape (n, d_out).
TargetMap = Callable[[np.ndarray], np.ndarray]


def identity_target(states: np.ndarray) -> np.ndarray:
    return states


@dataclass(frozen=True)
class KrausChannel:
    """CPTP map ``rho -> sum_i K_i rho K_i^dagger`` with ``K_i`` of shape (d_out, d_in)."""

    kraus_ops: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.array(k, dtype=complex) for k in self.kraus_ops)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2 or any(k.shape != shape for k in ops):
            raise DimensionError("Kraus operators must share one 2-D shape")
        total = sum(dagger(k) @ k for k in ops)
        err = np.max(np.abs(total - np.eye(shape[1])))
        if err > TP_ATOL:
            raise ValueError(f"Kraus family is not trace preserving (error {err:.3g})")
        object.__setattr__(self, "kraus_ops", ops)

    @property
    def input_dim(self) -> int:
        return self.kraus_ops[0].shape[1]

    @property
    def output_dim(self) -> int:
        return self.kraus_ops[0].shape[0]

    @classmethod
    def identity(cls, dim: int) -> KrausChannel:
        return cls((np.eye(dim),))

    @classmethod
    def from_isometry(cls, v: np.ndarray, out_dim: int) -> KrausChannel:
        """Channel ``Tr_env[V rho V^dagger]`` for an isometry into ``out_dim`` x env."""
        v = np.asarray(v, dtype=complex)
        env = v.shape[0] // out_dim
        blocks = v.reshape(out_dim, env, v.shape[1])
        return cls(tuple(blocks[:, e, :] for e in range(env)))

    def apply_batch(self, states: np.ndarray) -> np.ndarray:
        """Outputs for a batch of input vectors, shape (n, d_out, d_out)."""
        out = 0
        for k in self.kraus_ops:
            w = states @ k.T
            out = out + w[:, :, None] * w[:, None, :].conj()
        return out


def random_kraus_channel(
    rng: np.random.Generator, d_in: int, d_out: int, n_kraus: int
) -> KrausChannel:
    v = random_isometry(rng, d_out * n_kraus, d_in)
    return KrausChannel.from_isometry(v, d_out)


def depolarizing_channel(strength: float) -> KrausChannel:
    """Qubit channel ``(1-s) rho + s I/2``; ``strength=1`` is fully depolarizing."""
    w0 = math.sqrt(1 - 3 * strength / 4)
    w = math.sqrt(strength / 4)
    return KrausChannel((w0 * PAULI_I, w * PAULI_X, w * PAULI_Y, w * PAULI_Z))


def apply_channel(channel: KrausChannel, state) -> np.ndarray:
    psi = as_state(state)
    if psi.shape[0] != channel.input_dim:
        raise DimensionError(
            f"state dimension {psi.shape[0]} != channel input dimension {channel.input_dim}"
        )
    rho = channel.apply_batch(psi[None, :])[0]
    return 0.5 * (rho + dagger(rho))


def _check_pair(rho: np.ndarray, target: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rho = np.asarray(rho, dtype=complex)
    t = as_state(target)
    if rho.ndim != 2 or rho.shape != (t.shape[0], t.shape[0]):
        raise DimensionError(f"operator shape {rho.shape} does not match target dimension {t.shape[0]}")
    return rho, t


def fidelity(rho, target) -> float:
    """``<target| rho |target>``."""
    rho, t = _check_pair(rho, target)
    return float(np.vdot(t, rho @ t).real)


@dataclass(frozen=True)
class MeasurementDistribution:
    """Outcome values (eigenvalues of rho) and their Born probabilities."""

    eigenvalues: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=float)
        prob = np.asarray(self.probabilities, dtype=float)
        if lam.shape != prob.shape or lam.ndim != 1:
            raise DimensionError("eigenvalues and probabilities must be 1-D of equal length")
        if abs(prob.sum() - 1.0) > 1e-10 or np.any(prob < -1e-12):
            raise ValueError("probabilities do not form a distribution")
        if lam.sum() > 1 + 1e-10:
            raise ValueError("eigenvalues sum above one")
        object.__setattr__(self, "eigenvalues", lam)
        object.__setattr__(self, "probabilities", prob)

    def mean(self) -> float:
        return float(np.dot(self.eigenvalues, self.probabilities))

    def second_moment(self) -> float:
        return float(np.dot(self.eigenvalues**2, self.probabilities))


def _clamp_eigenvalues(lam: np.ndarray) -> np.ndarray:
    if np.any(lam < -EIG_NEGATIVE_ATOL):
        raise ValueError(f"operator has eigenvalue {lam.min()!r} below -{EIG_NEGATIVE_ATOL}")
    return np.where(lam < 0, 0.0, lam)


def distribution_in_basis(eigenvalues, vectors: Sequence[np.ndarray], target) -> MeasurementDistribution:
    """Distribution from an explicit eigenbasis (columns or list of vectors)."""
    t = as_state(target)
    m = np.column_stack(list(vectors)) if not isinstance(vectors, np.ndarray) else vectors
    prob = np.abs(dagger(m) @ t) ** 2
    return MeasurementDistribution(_clamp_eigenvalues(np.asarray(eigenvalues, dtype=float)), prob)


def measurement_distribution(
    rho, target, completion_order: Sequence[int] | None = None
) -> MeasurementDistribution:
    """Measure ``target`` in the completed eigenbasis of ``rho``.

    Eigenvectors with ``|lambda| <= RANK_ATOL`` are treated as outside the
    support and replaced by a Gram-Schmidt completion (canonical vectors tried
    in ``completion_order``), each carrying eigenvalue 0.
    """
    rho, t = _check_pair(rho, target)
    eig = hermitian_eig(rho)
    lam = _clamp_eigenvalues(eig.eigenvalues)
    support = lam > RANK_ATOL
    vecs = [eig.vectors[:, i] for i in np.flatnonzero(support)]
    full = complete_basis(vecs, rho.shape[0], order=completion_order)
    values = np.concatenate([lam[support], np.zeros(rho.shape[0] - len(vecs))])
    return distribution_in_basis(values, full, t)


def randomness_from_distribution(dist: MeasurementDistribution) -> float:
    """Standard deviation of the eigenvalue-valued outcome."""
    mean = dist.mean()
    # centered form: same variance as E[l^2] - E[l]^2 without cancellation
    var = float(np.dot(dist.probabilities, (dist.eigenvalues - mean) ** 2))
    if var < -VARIANCE_CLAMP:
        raise ValueError(f"negative variance {var!r}")
    return math.sqrt(max(var, 0.0))


def randomness_closed_form(rho, target) -> float:
    """``sqrt(<t|rho^2|t> - <t|rho|t>^2)``, evaluated as ``||(rho - F)|t>||``."""
    rho, t = _check_pair(rho, target)
    rt = rho @ t
    f = np.vdot(t, rt).real
    return float(np.linalg.norm(rt - f * t))


def second_moment(rho, target) -> float:
    """``<t|rho^2|t>``."""
    rho, t = _check_pair(rho, target)
    rt = rho @ t
    return float(np.vdot(rt, rt).real)


def pure_output_randomness(chi, target) -> float:
    chi = as_state(chi)
    t = as_state(target)
    if chi.shape != t.shape:
        raise DimensionError("output and target dimensions differ")
    amp = np.vdot(t, chi)
    # 1 - |<t|chi>|^2 as the squared norm of the part of chi orthogonal to t
    return float(abs(amp) * np.linalg.norm(chi - amp * t))


def haar_qubit_angles(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Bloch angles (mu, nu) with cos(mu) uniform on [-1, 1] and nu uniform on [0, 2pi)."""
    u = rng.uniform(-1.0, 1.0, size=n)
    nu = rng.uniform(0.0, 2 * np.pi, size=n)
    return np.arccos(u), nu


def qubit_from_angles(mu, nu) -> np.ndarray:
    """``cos(mu/2) e^{i nu/2} |0> + sin(mu/2) e^{-i nu/2} |1>`` (vectorized)."""
    mu = np.asarray(mu, dtype=float)
    nu = np.asarray(nu, dtype=float)
    alpha = np.cos(mu / 2) * np.exp(0.5j * nu)
    beta = np.sin(mu / 2) * np.exp(-0.5j * nu)
    return np.stack([alpha, beta], axis=-1)


def haar_sample_qubit(rng: np.random.Generator) -> np.ndarray:
    mu, nu = haar_qubit_angles(rng, 1)
    return qubit_from_angles(mu[0], nu[0])


def haar_sample_qubits(rng: np.random.Generator, n: int) -> np.ndarray:
    mu, nu = haar_qubit_angles(rng, n)
    return qubit_from_angles(mu, nu)


@dataclass(frozen=True)
class ProcessStats:
    """Fidelity and randomness, optionally Monte Carlo means with 1-sigma errors."""

    fidelity: float
    randomness: float
    fidelity_stderr: float = 0.0
    randomness_stderr: float = 0.0
    n_samples: int = 0

    def __post_init__(self):
        if not -1e-12 <= self.fidelity <= 1 + 1e-12:
            raise ValueError(f"fidelity {self.fidelity!r} outside [0, 1]")
        if not -1e-12 <= self.randomness <= 0.5 + 1e-12:
            raise ValueError(f"randomness {self.randomness!r} outside [0, 1/2]")

    def as_dict(self) -> dict:
        return {
            "f_bar": self.fidelity,
            "q_bar": self.randomness,
            "f_stderr": self.fidelity_stderr,
            "q_stderr": self.randomness_stderr,
            "n_samples": self.n_samples,
        }


def batch_fidelity_randomness(
    channel: KrausChannel, states: np.ndarray, targets: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-sample fidelity and closed-form randomness for batched inputs."""
    rt = 0
    f = 0
    for k in channel.kraus_ops:
        w = states @ k.T  # K|phi>, shape (n, d_out)
        amp = np.einsum("ij,ij->i", w.conj(), targets)  # <K phi|t>
        f = f + np.abs(amp) ** 2
        rt = rt + w * amp[:, None]
    resid = rt - f[:, None] * targets
    q = np.sqrt(np.einsum("ij,ij->i", resid.conj(), resid).real)
    return f, q


def _chunk_rng(seed: int, chunk: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk,)))


Sampler = Callable[[np.random.Generator, int], np.ndarray]


def average_over_haar(
    channel: KrausChannel,
    target: TargetMap = identity_target,
    n_samples: int = 100_000,
    seed: int = 0,
    *,
    sampler: Sampler = haar_sample_qubits,
    workers: int = 1,
) -> ProcessStats:
    """Monte Carlo averages of fidelity and randomness over random inputs.

    Sample ``i`` is drawn from the stream of chunk ``i // HAAR_CHUNK``, so the
    result does not depend on ``workers``. Randomness is averaged per sample
    (mean of standard deviations, not of variances).
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    n_chunks = -(-n_samples // HAAR_CHUNK)

    def run(c: int) -> tuple[np.ndarray, np.ndarray]:
        size = min(HAAR_CHUNK, n_samples - c * HAAR_CHUNK)
        states = sampler(_chunk_rng(seed, c), size)
        return batch_fidelity_randomness(channel, states, target(states))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(n_chunks)))
    else:
        parts = [run(c) for c in range(n_chunks)]
    f = np.concatenate([p[0] for p in parts])
    q = np.concatenate([p[1] for p in parts])
    denom = math.sqrt(n_samples)
    f_err = float(np.std(f, ddof=1)) / denom if n_samples > 1 else 0.0
    q_err = float(np.std(q, ddof=1)) / denom if n_samples > 1 else 0.0
    return ProcessStats(float(np.mean(f)), float(np.mean(q)), f_err, q_err, n_samples)


@dataclass(frozen=True)
class Merit:
    value: float
    rule: str  # "ratio" or "difference"


def figure_of_merit(fbar: float, qbar: float) -> Merit:
    """``qbar/fbar`` when both are nonzero, otherwise ``qbar - fbar`` (lower is better)."""
    if abs(fbar) < MERIT_ZERO or abs(qbar) < MERIT_ZERO:
        return Merit(qbar - fbar, "difference")
    return Merit(qbar / fbar, "ratio")
