"""Dense complex linear algebra for few-qubit states.

Everything here works on small (<= 8x8) numpy arrays of complex (or real)
dtype.  All functions are pure and never mutate their arguments.
"""
from __future__ import annotations

import numpy as np

HERMITICITY_TOL = 1e-9


def _as_square(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix contains non-finite entries")
    return m


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker (tensor) product of two square matrices."""
    return np.kron(_as_square(a), _as_square(b))


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = _as_square(a), _as_square(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a @ b


def adjoint(m: np.ndarray) -> np.ndarray:
    return _as_square(m).conj().T


def trace(m: np.ndarray) -> complex:
    return complex(np.trace(_as_square(m)))


def normalize_ket(amplitudes: np.ndarray) -> np.ndarray:
    """Return the unit-norm version of a state vector."""
    v = np.asarray(amplitudes, dtype=complex).ravel()
    norm = np.linalg.norm(v)
    if norm == 0 or not np.isfinite(norm):
        raise ValueError("cannot normalize a zero or non-finite vector")
    return v / norm


def outer(ket: np.ndarray) -> np.ndarray:
    """Projector |k><k| of a state vector (not renormalized here)."""
    v = np.asarray(ket, dtype=complex).ravel()
    return np.outer(v, v.conj())


def partial_transpose(m: np.ndarray, party: int, local_dims: list[int]) -> np.ndarray:
    """Transpose a single tensor factor of a multipartite operator.

    ``party`` is 1-based, ``local_dims`` lists the factor dimensions in
    tensor order (party 1 = most significant).  Applying twice gives back
    the input exactly.
    """
    m = _as_square(m)
    dims = list(local_dims)
    n = len(dims)
    if int(np.prod(dims)) != m.shape[0]:
        raise ValueError(
            f"product of local dims {dims} does not match matrix dim {m.shape[0]}"
        )
    if not 1 <= party <= n:
        raise ValueError(f"party index {party} out of range 1..{n}")
    t = m.reshape(dims + dims)
    k = party - 1
    axes = list(range(2 * n))
    axes[k], axes[n + k] = axes[n + k], axes[k]
    return t.transpose(axes).reshape(m.shape)


def hermiticity_deviation(m: np.ndarray) -> float:
    """Max entry-wise |m - m^dagger|."""
    m = _as_square(m)
    return float(np.abs(m - m.conj().T).max())


def hermitian_eigenvalues(m: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, ascending.

    Rejects matrices that are not Hermitian within ``tol``; a violation
    here almost always means a construction bug upstream.
    """
    m = _as_square(m)
    dev = hermiticity_deviation(m)
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian (max deviation {dev:.3e})")
    return np.linalg.eigvalsh(m)
