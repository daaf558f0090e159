"""Monte Carlo execution of the three-party broadcast protocol.

Each shot samples inputs (y, x), plays one round (classical: precomputed
optimal sign functions; quantum: Born-rule outcomes on the shared state)
and checks the product-of-broadcasts guess against the target.

Randomness comes from numpy's Philox counter-based generator.  Shard k of
a run is seeded with SeedSequence([seed, k]), so shards are independent
substreams and the report is a pure function of
(seed, shards, shots, protocol) regardless of how shards are scheduled.
"""
from __future__ import annotations

import itertools
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, asdict

import numpy as np

from . import bell, ccp, state
from .bell import N_PARTIES, FullCorrelationInequality

CHUNK = 2_000_000
NEGATIVITY_TOL = 1e-12

# outcome triple (a1,a2,a3) encoded as a 3-bit index, bit=1 meaning a=-1,
# party 1 most significant (same convention as the state's basis index)
OUTCOME_PRODUCT = np.array([1 - 2 * (bin(o).count("1") % 2) for o in range(8)])


@dataclass(frozen=True)
class SimulationConfig:
    shots: int
    seed: int = 0
    protocol: str = "quantum"
    shards: int = 1

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.shards < 1:
            raise ValueError("shards must be >= 1")
        if self.protocol not in ("classical", "quantum"):
            raise ValueError(f"unknown protocol {self.protocol!r}")


@dataclass(frozen=True)
class SimulationReport:
    protocol: str
    shots: int
    successes: int
    empirical_probability: float
    standard_error: float
    seed: int
    shards: int
    wall_time: float

    def to_dict(self) -> dict:
        d = asdict(self)
        d["p_hat"] = d.pop("empirical_probability")
        d["stderr"] = d.pop("standard_error")
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class GapReport:
    """Quantum simulation measured against the exact classical optimum."""
    simulation: SimulationReport
    p_classical_exact: float
    p_quantum_exact: float
    exact_gap: float
    z_vs_classical: float
    underpowered: bool

    def to_dict(self) -> dict:
        d = self.simulation.to_dict()
        d.update(
            p_classical_exact=self.p_classical_exact,
            p_quantum_exact=self.p_quantum_exact,
            exact_gap=self.exact_gap,
            z_vs_classical=self.z_vs_classical,
            underpowered=self.underpowered,
        )
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def born_distribution(rho: np.ndarray, obs: list[list[np.ndarray]],
                      x: tuple[int, int, int]) -> np.ndarray:
    """Joint outcome distribution P(a1,a2,a3 | x) from projective
    measurements, indexed by the 3-bit outcome encoding.

    The identity setting has projectors (I, 0), so its outcome is
    deterministically +1.  Probabilities within -1e-12 of zero are
    clamped and the distribution renormalized; anything more negative is
    an error.
    """
    projectors = []
    for party, setting in enumerate(x):
        if not 0 <= setting < len(obs[party]):
            raise ValueError(f"party {party + 1} has no observable for setting {setting}")
        o = obs[party][setting]
        eye = np.eye(o.shape[0])
        projectors.append(((eye + o) / 2, (eye - o) / 2))

    probs = np.empty(8)
    for o_idx, bits in enumerate(itertools.product((0, 1), repeat=N_PARTIES)):
        big = np.kron(np.kron(projectors[0][bits[0]], projectors[1][bits[1]]),
                      projectors[2][bits[2]])
        probs[o_idx] = float(np.trace(np.asarray(rho) @ big).real)

    if probs.min() < -NEGATIVITY_TOL:
        raise ValueError(f"negative outcome probability {probs.min():.3e}")
    probs = np.clip(probs, 0.0, None)
    total = probs.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"outcome probabilities sum to {total}")
    return probs / total


class GameTables:
    """Everything precomputed once so that per-shot work is table lookups.

    Holds the q-supported setting tuples, their cumulative input
    distribution, the target signs, the per-tuple Born outcome CDFs and
    the optimal classical sign functions.
    """

    def __init__(self, rho=None, obs=None, ineq: FullCorrelationInequality = None):
        self.rho = state.build_vb_state() if rho is None else rho
        self.obs = bell.measurement_observables() if obs is None else obs
        self.ineq = bell.homogenize(bell.sliwa5()) if ineq is None else ineq

        g = self.ineq.g
        q = ccp.input_distribution(g)
        self.support = [tuple(int(i) for i in idx) for idx in np.argwhere(g != 0)]
        self.q_support = np.array([q[x] for x in self.support])
        self.q_cdf = np.cumsum(self.q_support)
        self.target_sign = np.array([1 if g[x] > 0 else -1 for x in self.support])

        self.outcome_cdf = np.array([
            np.cumsum(born_distribution(self.rho, self.obs, x)) for x in self.support
        ])

        strategy, self.p_classical_exact = ccp.optimal_classical_strategy(g)
        self.strategy = strategy
        self.classical_answer_sign = np.array([
            strategy.a[0][x[0]] * strategy.a[1][x[1]] * strategy.a[2][x[2]]
            for x in self.support
        ])

        s_value = bell.quantum_value(self.ineq, self.rho, self.obs)
        self.quantum_value = s_value
        self.p_quantum_exact = ccp.exact_success_quantum(s_value, self.ineq.sum_abs())


_DEFAULT_TABLES: GameTables | None = None


def default_tables() -> GameTables:
    global _DEFAULT_TABLES
    if _DEFAULT_TABLES is None:
        _DEFAULT_TABLES = GameTables()
    return _DEFAULT_TABLES


def _shard_rng(seed: int, shard: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, shard])))


def sample_inputs(rng: np.random.Generator,
                  tables: GameTables | None = None) -> ccp.GameInstance:
    """Draw one game instance: x by inverse CDF over Q, y uniform bits."""
    tables = tables or default_tables()
    k = int(np.searchsorted(tables.q_cdf, rng.random(), side="right"))
    k = min(k, len(tables.support) - 1)
    y = tuple(1 - 2 * int(b) for b in rng.integers(0, 2, size=N_PARTIES))
    return ccp.GameInstance(y, tables.support[k])


def _shard_successes(rng: np.random.Generator, shots: int, protocol: str,
                     tables: GameTables) -> int:
    successes = 0
    remaining = shots
    while remaining > 0:
        n = min(CHUNK, remaining)
        remaining -= n

        k = np.searchsorted(tables.q_cdf, rng.random(n), side="right")
        np.clip(k, 0, len(tables.support) - 1, out=k)
        ybits = rng.integers(0, 8, size=n)
        yprod = OUTCOME_PRODUCT[ybits]

        if protocol == "classical":
            aprod = tables.classical_answer_sign[k]
        else:
            u = rng.random(n)
            outcome = np.empty(n, dtype=np.int64)
            for idx in range(len(tables.support)):
                mask = k == idx
                if mask.any():
                    outcome[mask] = np.searchsorted(
                        tables.outcome_cdf[idx], u[mask], side="right")
            np.clip(outcome, 0, 7, out=outcome)
            aprod = OUTCOME_PRODUCT[outcome]

        guess = yprod * aprod
        target = yprod * tables.target_sign[k]
        successes += int(np.count_nonzero(guess == target))
    return successes


def run_protocol(config: SimulationConfig,
                 tables: GameTables | None = None) -> SimulationReport:
    """Run the full protocol and aggregate an exact integer success count.

    Shots are split across shards as evenly as possible (first
    shots % shards shards get one extra); shard results combine by
    addition, so the report does not depend on execution order.
    """
    tables = tables or default_tables()
    t0 = time.perf_counter()
    base, extra = divmod(config.shots, config.shards)
    jobs = [(shard, base + (1 if shard < extra else 0))
            for shard in range(config.shards)]
    jobs = [(shard, n) for shard, n in jobs if n > 0]

    def run_shard(job):
        shard, n = job
        return _shard_successes(_shard_rng(config.seed, shard), n,
                                config.protocol, tables)

    if len(jobs) == 1:
        successes = run_shard(jobs[0])
    else:
        # numpy kernels release the GIL, so threads give real parallelism;
        # summing integers is order-independent, keeping the report exact
        workers = min(len(jobs), os.cpu_count() or 1)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            successes = sum(pool.map(run_shard, jobs))
    p_hat = successes / config.shots
    return SimulationReport(
        protocol=config.protocol,
        shots=config.shots,
        successes=successes,
        empirical_probability=p_hat,
        standard_error=math.sqrt(p_hat * (1.0 - p_hat) / config.shots),
        seed=config.seed,
        shards=config.shards,
        wall_time=time.perf_counter() - t0,
    )


def gap_experiment(shots: int, seed: int = 0, shards: int = 1,
                   tables: GameTables | None = None) -> GapReport:
    """Simulate the quantum protocol and compare against the exact
    classical optimum (a rational number, never simulated).

    A run is flagged underpowered when sqrt(p(1-p)/shots) is not below a
    quarter of the exact quantum-classical gap, i.e. when the z-score
    cannot be expected to reach ~4.
    """
    tables = tables or default_tables()
    report = run_protocol(
        SimulationConfig(shots=shots, seed=seed, protocol="quantum", shards=shards),
        tables)
    p_c = tables.p_classical_exact
    p_q = tables.p_quantum_exact
    gap = p_q - float(p_c)
    stderr = report.standard_error
    expected_stderr = math.sqrt(p_q * (1.0 - p_q) / shots)
    z = (report.empirical_probability - float(p_c)) / stderr if stderr > 0 else math.inf
    return GapReport(
        simulation=report,
        p_classical_exact=float(p_c),
        p_quantum_exact=p_q,
        exact_gap=gap,
        z_vs_classical=z,
        underpowered=not (expected_stderr < gap / 4),
    )
