"""Small dense complex linear algebra for 2-, 4- and 8-dimensional Hilbert spaces.

Matrices and state vectors are plain ``numpy`` arrays of ``complex128``.
Validation helpers (:func:`as_state`, :func:`as_density`) check the
physical invariants and return a fresh array.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

STATE_ATOL = 1e-12
HERMITIAN_ATOL = 1e-10
EIG_NEGATIVE_ATOL = 1e-10
ORTHONORMAL_ATOL = 1e-10
COMPLETION_DISCARD = 1e-8

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100


class NotHermitianError(ValueError):
    pass


class DimensionError(ValueError):
    pass


def ket(*amplitudes: complex) -> np.ndarray:
    """Normalized column-free state vector from raw amplitudes."""
    v = np.asarray(amplitudes, dtype=complex)
    return v / np.linalg.norm(v)


def basis(dim: int, index: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conjugate(np.transpose(m))


def _finite_complex(a, name: str) -> np.ndarray:
    arr = np.array(a, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def as_state(v, *, atol: float = STATE_ATOL) -> np.ndarray:
    """Validate a pure state vector (1-D, unit norm within ``atol``)."""
    arr = _finite_complex(v, "state")
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError(f"state must be a non-empty 1-D vector, got shape {arr.shape}")
    norm2 = float(np.vdot(arr, arr).real)
    if abs(norm2 - 1.0) > atol:
        raise ValueError(f"state is not normalized: sum |a_i|^2 = {norm2!r}")
    return arr


def as_density(m, *, atol: float = STATE_ATOL) -> np.ndarray:
    """Validate a density operator: square, Hermitian, unit trace, PSD."""
    arr = _finite_complex(m, "density operator")
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"density operator must be square, got shape {arr.shape}")
    if np.max(np.abs(arr - dagger(arr))) > atol:
        raise NotHermitianError("density operator is not Hermitian")
    tr = np.trace(arr)
    if abs(tr - 1.0) > atol:
        raise ValueError(f"density operator trace is {tr!r}, expected 1")
    lam = hermitian_eig(arr).eigenvalues
    if lam[-1] < -EIG_NEGATIVE_ATOL:
        raise ValueError(f"density operator has negative eigenvalue {lam[-1]!r}")
    return arr


def tensor(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of any number of vectors or matrices (left to right)."""
    if not ops:
        raise ValueError("tensor needs at least one operand")
    out = _finite_complex(ops[0], "operand")
    for op in ops[1:]:
        out = np.kron(out, _finite_complex(op, "operand"))
    return out


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: int) -> np.ndarray:
    """Reduced operator on subsystem ``keep`` of a ``prod(dims)``-dimensional operator."""
    rho = np.asarray(rho, dtype=complex)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise DimensionError(f"operator shape {rho.shape} does not match subsystem dims {dims}")
    if not 0 <= keep < len(dims):
        raise DimensionError(f"keep={keep} out of range for {len(dims)} subsystems")
    n = len(dims)
    t = rho.reshape(dims + dims)
    # trace out every other subsystem, highest index first so axis numbers stay valid
    for k in reversed(range(n)):
        if k == keep:
            continue
        nrem = t.ndim // 2
        t = np.trace(t, axis1=k, axis2=k + nrem)
    return t.reshape(dims[keep], dims[keep])


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues sorted descending; ``vectors[:, i]`` belongs to ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.eigenvalues) @ dagger(self.vectors)


def _fix_phase(v: np.ndarray) -> np.ndarray:
    # first component with non-negligible magnitude made real positive
    idx = int(np.argmax(np.abs(v) > 1e-8 * np.max(np.abs(v))))
    a = v[idx]
    return v * (abs(a) / a)


def hermitian_eig(m) -> EigenDecomposition:
    """Cyclic complex Jacobi eigensolver for small Hermitian matrices.

    Sweeps over all (p, q) pairs in row order, each rotation zeroing the
    (p, q) element exactly, until the off-diagonal Frobenius norm drops below
    ``JACOBI_TOL`` relative to the matrix norm.
    """
    a = _finite_complex(m, "matrix")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"matrix must be square, got shape {a.shape}")
    if a.size and np.max(np.abs(a - dagger(a))) > HERMITIAN_ATOL:
        raise NotHermitianError("hermitian_eig requires a Hermitian matrix")
    n = a.shape[0]
    a = 0.5 * (a + dagger(a))
    v = np.eye(n, dtype=complex)
    scale = max(np.linalg.norm(a), 1.0)

    def off_norm() -> float:
        off = a - np.diag(np.diag(a))
        return float(np.linalg.norm(off))

    for _ in range(JACOBI_MAX_SWEEPS):
        if off_norm() <= JACOBI_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-20 * scale:
                    # below round-off of the diagonal; dropping it is exact to working precision
                    a[p, q] = a[q, p] = 0.0
                    continue
                app, aqq = a[p, p].real, a[q, q].real
                # phase e^{i arg apq} moved into column q makes the 2x2 block real symmetric
                ph = apq / mag
                tau = (aqq - app) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                g = np.array([[c, s], [-s * np.conj(ph), c * np.conj(ph)]], dtype=complex)
                cols = [p, q]
                a[:, cols] = a[:, cols] @ g
                a[cols, :] = dagger(g) @ a[cols, :]
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, cols] = v[:, cols] @ g
    else:
        if off_norm() > JACOBI_TOL * scale:
            raise RuntimeError("Jacobi eigensolver did not converge")

    lam = np.real(np.diag(a)).copy()
    order = np.argsort(-lam, kind="stable")
    lam = lam[order]
    vecs = np.column_stack([_fix_phase(v[:, i]) for i in order]) if n else v
    return EigenDecomposition(lam, vecs)


def is_orthonormal(vectors: Sequence[np.ndarray], atol: float = ORTHONORMAL_ATOL) -> bool:
    if len(vectors) == 0:
        return True
    m = np.column_stack([np.asarray(x, dtype=complex) for x in vectors])
    gram = dagger(m) @ m
    return bool(np.max(np.abs(gram - np.eye(m.shape[1]))) <= atol)


def complete_basis(
    partial: Sequence[np.ndarray],
    dim: int,
    order: Sequence[int] | None = None,
) -> list[np.ndarray]:
    """Extend orthonormal vectors to a full orthonormal basis of C^dim.

    Canonical basis vectors are tried in ``order`` (default 0, 1, ...) and
    Gram-Schmidt orthogonalized against everything kept so far; candidates
    with residual norm below ``COMPLETION_DISCARD`` are skipped.
    """
    kept = [np.array(x, dtype=complex) for x in partial]
    if len(kept) > dim:
        raise DimensionError(f"{len(kept)} vectors cannot be orthonormal in dimension {dim}")
    if any(x.shape != (dim,) for x in kept):
        raise DimensionError(f"all vectors must have dimension {dim}")
    if not is_orthonormal(kept):
        raise ValueError("complete_basis requires orthonormal input vectors")
    candidates = range(dim) if order is None else order
    for idx in candidates:
        if len(kept) == dim:
            break
        r = basis(dim, idx)
        # two passes of modified Gram-Schmidt for stability
        for _ in range(2):
            for u in kept:
                r = r - np.vdot(u, r) * u
        nrm = np.linalg.norm(r)
        if nrm < COMPLETION_DISCARD:
            continue
        kept.append(r / nrm)
    if len(kept) != dim:
        raise ValueError("candidate order did not span the space")
    return kept


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Unitarily invariant random pure state (normalized complex Gaussian)."""
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (g + dagger(g))


def random_density(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def random_isometry(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Haar-distributed isometry (rows >= cols) via QR with phase fix."""
    g = rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))
    q, r = np.linalg.qr(g)
    d = np.diag(r)
    return q * (d / np.abs(d))


PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_S = 1 / np.sqrt(2)
PHI_PLUS = np.array([_S, 0, 0, _S], dtype=complex)
PHI_MINUS = np.array([_S, 0, 0, -_S], dtype=complex)
PSI_PLUS = np.array([0, _S, _S, 0], dtype=complex)
PSI_MINUS = np.array([0, _S, -_S, 0], dtype=complex)
