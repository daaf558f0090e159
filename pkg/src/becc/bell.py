"""Three-party Bell inequality machinery.

Covers the original 2-setting inequality (Sliwa's #5), its homogenized
full-correlation form with an identity "setting 0" per party, classical
bounds by exhaustive enumeration of deterministic local strategies, and
quantum values from a shared state and measurement observables.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg

N_PARTIES = 3
N_SETTINGS = 4  # homogenized form: settings 0..3 (0 = identity, 3 = unused)

MAX_STRATEGY_SPACE = 2 ** 24


@dataclass(frozen=True)
class Term:
    """One product term of a general inequality.

    ``settings[i]`` is party i's setting, or None when the party is absent
    (lower-order term).  A term with all parties absent is a constant.
    """
    settings: tuple[int | None, int | None, int | None]
    coefficient: float


@dataclass(frozen=True)
class GeneralInequality:
    """Term-list inequality with two-sided classical bounds."""
    terms: tuple[Term, ...]
    lower_bound: float
    upper_bound: float
    symmetrized: bool = True

    def __post_init__(self):
        if self.lower_bound > self.upper_bound:
            raise ValueError("lower bound exceeds upper bound")

    def settings_used(self, party: int) -> set[int]:
        return {t.settings[party] for t in self.terms if t.settings[party] is not None}


@dataclass(frozen=True)
class FullCorrelationInequality:
    """Dense coefficient table g over setting tuples, with bound |sum g E| <= bound."""
    g: np.ndarray = field(repr=False)  # shape (4, 4, 4)
    bound: float = 0.0
    n: int = N_PARTIES
    settings_per_party: int = N_SETTINGS

    def __post_init__(self):
        if self.g.shape != (N_SETTINGS,) * N_PARTIES:
            raise ValueError(f"coefficient table must be 4x4x4, got {self.g.shape}")
        if not np.any(self.g):
            raise ValueError("all-zero coefficient table")

    def sum_abs(self) -> float:
        return float(np.abs(self.g).sum())

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n,
            "settings": self.settings_per_party,
            "g": self.g.tolist(),
            "bound": self.bound,
        })

    @classmethod
    def from_json(cls, text: str) -> "FullCorrelationInequality":
        doc = json.loads(text)
        return cls(g=np.array(doc["g"], dtype=float), bound=float(doc["bound"]))


def symmetrize(term: Term) -> list[Term]:
    """Orbit of a term under all party permutations, without duplicates."""
    seen = []
    for perm in itertools.permutations(range(N_PARTIES)):
        s = tuple(term.settings[perm[i]] for i in range(N_PARTIES))
        if s not in seen:
            seen.append(s)
    return [Term(s, term.coefficient) for s in seen]


# Base terms of Sliwa's inequality #5 before symmetrization:
# A1 + A1B2 - A2B2 - A1B1C1 - A2B1C1 + A2B2C2, bounds -13 .. 3.
_SLIWA5_BASE = (
    Term((1, None, None), 1.0),
    Term((1, 2, None), 1.0),
    Term((2, 2, None), -1.0),
    Term((1, 1, 1), -1.0),
    Term((2, 1, 1), -1.0),
    Term((2, 2, 2), 1.0),
)


def sliwa5() -> GeneralInequality:
    """The original two-setting inequality, fully symmetrized (17 terms)."""
    terms = []
    for base in _SLIWA5_BASE:
        terms.extend(symmetrize(base))
    return GeneralInequality(tuple(terms), lower_bound=-13.0, upper_bound=3.0)


def homogenize(ineq: GeneralInequality) -> FullCorrelationInequality:
    """Lift a general inequality to full-correlation form.

    Absent parties get the identity setting 0; the constant shift
    c = -(lower+upper)/2 that symmetrizes the bounds becomes the
    coefficient of the all-identity tuple; the new bound is
    (upper - lower)/2 and applies to the absolute value.
    """
    g = np.zeros((N_SETTINGS,) * N_PARTIES)
    shift = -(ineq.lower_bound + ineq.upper_bound) / 2.0
    g[0, 0, 0] += shift
    for t in ineq.terms:
        idx = tuple(0 if s is None else s for s in t.settings)
        g[idx] += t.coefficient
    return FullCorrelationInequality(g=g, bound=(ineq.upper_bound - ineq.lower_bound) / 2.0)


def _delta(*args) -> int:
    return 1 if len(set(args)) == 1 else 0


def g_coefficient(x1: int, x2: int, x3: int) -> float:
    """Closed-form coefficient table of the homogenized inequality.

    Must agree with homogenize(sliwa5()) on all 64 setting tuples; the
    first factor is the sign, the rest carve out the support.
    """
    for x in (x1, x2, x3):
        if not 0 <= x < N_SETTINGS:
            raise ValueError(f"setting {x} out of range 0..3")
    sign = 2 * ((_delta(x1, x2, x3) + x1 + x2 + x3) % 2) - 1
    return float(
        sign
        * (1 + 4 * _delta(0, x1, x2, x3))
        * (1 - _delta(2, (x1 + x2 + x3) % 3))
        * (1 - _delta(3, x1)) * (1 - _delta(3, x2)) * (1 - _delta(3, x3))
    )


# --- classical bounds by deterministic-strategy enumeration ---------------

@dataclass(frozen=True)
class DeterministicStrategy:
    """Fixed +-1 output per (party, setting); the extreme points of the
    local polytope."""
    outputs: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

    def output(self, party: int, setting: int) -> int:
        return self.outputs[party][setting]


def _strategy_from_bits(bits: int, free: list[tuple[int, int]],
                        pinned: dict[tuple[int, int], int],
                        n_settings: int) -> DeterministicStrategy:
    # bit value 0 -> +1 so that bits=0 is the lexicographically smallest
    # encoding and maps to the all-ones strategy
    table = [[1] * n_settings for _ in range(N_PARTIES)]
    for (party, setting), val in pinned.items():
        table[party][setting] = val
    for k, (party, setting) in enumerate(free):
        table[party][setting] = 1 - 2 * ((bits >> k) & 1)
    return DeterministicStrategy(tuple(tuple(row) for row in table))


def classical_extrema(
    ineq: FullCorrelationInequality | GeneralInequality,
) -> tuple[float, float, DeterministicStrategy]:
    """Exact extrema of a Bell expression over all deterministic strategies.

    For the full-correlation form the identity setting 0 is pinned to
    output +1 (the identity observable forces it), leaving 2^9 = 512
    strategies; the original 2-setting form enumerates 2^6 = 64.
    Returns (min, max, argmax) with the argmax tie-broken by the
    lexicographically smallest bit encoding.
    """
    if isinstance(ineq, FullCorrelationInequality):
        n_settings = ineq.settings_per_party
        free = [(p, s) for p in range(N_PARTIES) for s in range(1, n_settings)]
        pinned = {(p, 0): 1 for p in range(N_PARTIES)}
        support = np.argwhere(ineq.g != 0)
        coeffs = [(tuple(idx), float(ineq.g[tuple(idx)])) for idx in support]
    else:
        used = sorted({(p, s) for t in ineq.terms
                       for p, s in enumerate(t.settings) if s is not None})
        n_settings = 1 + max((s for _, s in used), default=0)
        free = used
        pinned = {}
        coeffs = [(t.settings, t.coefficient) for t in ineq.terms]

    if 2 ** len(free) > MAX_STRATEGY_SPACE:
        raise ValueError(f"strategy space 2^{len(free)} too large to enumerate")

    best = -math.inf
    worst = math.inf
    argmax = None
    for bits in range(2 ** len(free)):
        strat = _strategy_from_bits(bits, free, pinned, n_settings)
        val = 0.0
        for settings, c in coeffs:
            prod = c
            for p, s in enumerate(settings):
                if s is not None:
                    prod *= strat.output(p, s)
            val += prod
        if val > best:  # strict: keeps the smallest-encoding maximizer
            best = val
            argmax = strat
        worst = min(worst, val)
    return worst, best, argmax


# --- quantum side ---------------------------------------------------------

def measurement_observables() -> list[list[np.ndarray]]:
    """Per-party observables [identity, O1, O2]; identical for all parties.

    O1 and O2 are reflections (Hermitian, square to the identity) built
    from the angles 2*pi/9 and pi/18.
    """
    c1, s1 = math.cos(2 * math.pi / 9), math.sin(2 * math.pi / 9)
    s2, c2 = math.sin(math.pi / 18), math.cos(math.pi / 18)
    o1 = np.array([[c1, s1], [s1, -c1]])
    o2 = np.array([[s2, -c2], [-c2, -s2]])
    per_party = [np.eye(2), o1, o2]
    return [list(per_party) for _ in range(N_PARTIES)]


def correlation(rho: np.ndarray, obs: list[list[np.ndarray]],
                x: tuple[int, int, int]) -> float:
    """E(x) = trace(rho * O_{x1} (x) O_{x2} (x) O_{x3})."""
    ops = []
    for party, setting in enumerate(x):
        if not 0 <= setting < len(obs[party]):
            raise ValueError(f"party {party + 1} has no observable for setting {setting}")
        ops.append(obs[party][setting])
    big = linalg.kron(linalg.kron(ops[0], ops[1]), ops[2])
    val = linalg.trace(np.asarray(rho) @ big)
    if abs(val.imag) > 1e-9:
        raise ValueError(f"correlation has imaginary part {val.imag:.3e}")
    if abs(val.real) > 1.0 + 1e-9:
        raise ValueError(f"correlation {val.real} outside [-1, 1]")
    return val.real


def quantum_value(ineq: FullCorrelationInequality, rho: np.ndarray,
                  obs: list[list[np.ndarray]]) -> float:
    """S = sum_x g(x) E(x) over the support of the coefficient table."""
    total = 0.0
    for idx in np.argwhere(ineq.g != 0):
        x = tuple(int(i) for i in idx)
        total += float(ineq.g[x]) * correlation(rho, obs, x)
    return total


def general_quantum_value(ineq: GeneralInequality, rho: np.ndarray,
                          obs: list[list[np.ndarray]]) -> float:
    """Quantum value of a term-list inequality; absent parties contribute
    an identity factor."""
    total = 0.0
    for t in ineq.terms:
        x = tuple(0 if s is None else s for s in t.settings)
        total += t.coefficient * correlation(rho, obs, x)
    return total
