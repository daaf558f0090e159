"""The three-qubit bound entangled state shared by the parties.

The state is a fixed mixture of four pure states given by 6-decimal
amplitudes.  Those printed decimals carry ~1e-6 rounding, so certificates
driven by them (permutation symmetry, partial-transpose invariance) are
checked at 1e-5, while anything driven only by floating-point arithmetic
is checked at 1e-9.

Basis convention: party 1 is the most significant qubit, so basis index
b = 4*b1 + 2*b2 + b3 corresponds to |b1 b2 b3>.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, asdict

import numpy as np

from . import linalg

# Mixture weights p_1..p_4 as printed (sum = 1.0000009; renormalized below).
MIXTURE_WEIGHTS = (0.0636039, 0.273734, 0.273734, 0.388929)

# Amplitudes of the four pure components in computational-basis order
# |000>, |001>, |010>, |011>, |100>, |101>, |110>, |111>.
PURE_STATE_AMPLITUDES = (
    (0.183013, -0.408248, -0.408248, 0.0, -0.408248, 0.0, 0.0, 0.683013),
    (0.0, -0.344106, 0.688212, 0.219677, -0.344106, -0.439354, 0.219677, 0.0),
    (0.0, -0.596008, 0.0, -0.380492, 0.596008, 0.0, 0.380492, 0.0),
    (-0.933013, 0.0, 0.0, 0.149429, 0.0, 0.149429, 0.149429, 0.25),
)

PRINT_ROUNDING_TOL = 1e-5   # deviations driven by the 6-decimal transcription
FLOAT_TOL = 1e-9            # deviations driven only by arithmetic


@dataclass(frozen=True)
class StateReport:
    """Numerical certificates of the built-in state."""
    trace_deviation: float
    hermiticity_deviation: float
    min_eigenvalue: float
    permutation_symmetry_deviation: float
    pt_invariance_deviation: float
    pt_min_eigenvalues: tuple[float, float, float]

    def to_dict(self) -> dict:
        return asdict(self)


def _check_transcription() -> None:
    for i, amps in enumerate(PURE_STATE_AMPLITUDES):
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > 1e-4:
            raise AssertionError(f"pure state {i + 1} norm {norm} off by > 1e-4")
    if abs(sum(MIXTURE_WEIGHTS) - 1.0) > 1e-5:
        raise AssertionError("mixture weights sum off by > 1e-5")


def build_vb_state() -> np.ndarray:
    """Build the 8x8 density matrix from the compiled-in constants.

    Weights and kets are renormalized, so the result has unit trace to
    machine precision.  Deterministic: repeated calls are bit-identical.
    """
    _check_transcription()
    wsum = sum(MIXTURE_WEIGHTS)
    rho = np.zeros((8, 8))
    for w, amps in zip(MIXTURE_WEIGHTS, PURE_STATE_AMPLITUDES):
        ket = linalg.normalize_ket(np.array(amps, dtype=float))
        rho += (w / wsum) * linalg.outer(ket).real
    return rho


def permutation_operator(perm: tuple[int, int, int]) -> np.ndarray:
    """Unitary that reorders the three qubits.

    ``perm`` is a permutation of (1, 2, 3); slot j of the output holds
    qubit perm[j] of the input, so e.g. (2, 1, 3) swaps parties 1 and 2.
    """
    if sorted(perm) != [1, 2, 3]:
        raise ValueError(f"not a permutation of (1,2,3): {perm}")
    p = np.zeros((8, 8))
    for b in range(8):
        bits = ((b >> 2) & 1, (b >> 1) & 1, b & 1)
        nb = (bits[perm[0] - 1] << 2) | (bits[perm[1] - 1] << 1) | bits[perm[2] - 1]
        p[nb, b] = 1.0
    return p


def all_party_permutations() -> list[tuple[int, int, int]]:
    return [tuple(p) for p in itertools.permutations((1, 2, 3))]


def validate_state(rho: np.ndarray) -> StateReport:
    """Measure every checkable certificate of a candidate 3-qubit state."""
    rho = np.asarray(rho)
    if rho.shape != (8, 8):
        raise ValueError(f"expected an 8x8 matrix, got {rho.shape}")

    perm_dev = 0.0
    for perm in all_party_permutations():
        p = permutation_operator(perm)
        perm_dev = max(perm_dev, float(np.abs(p @ rho @ p.T - rho).max()))

    pt_eigs = []
    for party in (1, 2, 3):
        pt = linalg.partial_transpose(rho, party, [2, 2, 2])
        pt_eigs.append(float(linalg.hermitian_eigenvalues(pt)[0]))
    pt3 = linalg.partial_transpose(rho, 3, [2, 2, 2])

    return StateReport(
        trace_deviation=abs(float(np.trace(rho).real) - 1.0),
        hermiticity_deviation=linalg.hermiticity_deviation(rho),
        min_eigenvalue=float(linalg.hermitian_eigenvalues(rho)[0]),
        permutation_symmetry_deviation=perm_dev,
        pt_invariance_deviation=float(np.abs(pt3 - rho).max()),
        pt_min_eigenvalues=tuple(pt_eigs),
    )


def state_to_json(rho: np.ndarray) -> str:
    """Serialize a density matrix as a row-major array of [re, im] pairs."""
    rho = np.asarray(rho, dtype=complex)
    data = [[x.real, x.imag] for x in rho.ravel()]
    return json.dumps({"dim": rho.shape[0], "entries": data})


def state_from_json(text: str) -> np.ndarray:
    doc = json.loads(text)
    dim = doc["dim"]
    flat = np.array([complex(re, im) for re, im in doc["entries"]])
    return flat.reshape(dim, dim)
