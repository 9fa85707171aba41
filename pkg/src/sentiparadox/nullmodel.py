"""Permutation null model, surprise statistic and empirical p-values.

The null model keeps the network structure and the multiset of observed
values and shuffles the values across users that have one.  Replicate
``r`` draws its permutation from a generator seeded with
``SeedSequence(seed, spawn_key=(r,))``, so the replicate stream does not
depend on how replicates are scheduled across workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _kernels
from .paradox import AggKind, ParadoxStats, PreparedAnalysis

BLOCK = 16


@dataclass(frozen=True)
class NullConfig:
    replicates: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")


@dataclass(frozen=True)
class SurpriseResult:
    observed: float
    expected: float
    surprise: float
    n: int
    empirical_p: float


def replicate_rng(seed: int, r: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(r,)))


def permute_values(values, seed) -> np.ndarray:
    """Uniform random permutation of ``values``; ``seed`` may be an int or a Generator."""
    values = np.asarray(values)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return values[rng.permutation(len(values))]


def permuted_assignment(values, seed: int, r: int) -> np.ndarray:
    """Replicate ``r`` of the null model: defined values shuffled, NaNs kept in place."""
    values = np.asarray(values, dtype=np.float64)
    slots = np.flatnonzero(~np.isnan(values))
    out = values.copy()
    out[slots] = permute_values(values[slots], replicate_rng(seed, r))
    return out


def surprise(n: int, observed: float, expected: float) -> float:
    """N (M - M_exp) / sqrt(N M_exp (1 - M_exp))."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 < expected < 1.0:
        raise ValueError("surprise is undefined for expected magnitude 0 or 1")
    return n * (observed - expected) / math.sqrt(n * expected * (1.0 - expected))


@dataclass(frozen=True, eq=False)
class NullResult:
    """Per-replicate ``(n_holds, n_not, n_unknown)`` plus derived summaries."""

    observed: ParadoxStats
    counts: np.ndarray
    config: NullConfig

    @property
    def total(self) -> int:
        return self.observed.total

    @property
    def magnitudes(self) -> np.ndarray:
        return self.counts[:, 0] / self.total if self.total else np.zeros(len(self.counts))

    def expected_proportions(self) -> tuple[float, float, float]:
        if not self.total:
            return (0.0, 0.0, 0.0)
        # ordered sum keeps the result independent of scheduling
        s = self.counts.sum(axis=0, dtype=np.int64)
        return tuple(float(x) / (self.total * len(self.counts)) for x in s)

    @property
    def expected(self) -> float:
        return self.expected_proportions()[0]

    def surprise_for(self, status: int = 0) -> float | None:
        """Surprise of one status column (0 holds, 1 not, 2 unknown); None when undefined."""
        obs = (self.observed.n_holds, self.observed.n_not, self.observed.n_unknown)[status]
        exp = self.expected_proportions()[status]
        if not self.total or not 0.0 < exp < 1.0:
            return None
        return surprise(self.total, obs / self.total, exp)

    def empirical_p(self) -> float:
        obs = self.observed.n_holds
        return (1 + int(np.sum(self.counts[:, 0] >= obs))) / (len(self.counts) + 1)

    def result(self) -> SurpriseResult:
        s = self.surprise_for(0)
        return SurpriseResult(
            self.observed.magnitude, self.expected, float("nan") if s is None else s, self.total, self.empirical_p()
        )


def _block_counts(prep: PreparedAnalysis, slots, pool, seed, start, stop):
    perms = np.empty((stop - start, len(pool)), dtype=np.int64)
    for j, r in enumerate(range(start, stop)):
        perms[j] = replicate_rng(seed, r).permutation(len(pool))
    ctx = prep.contexts
    out = np.zeros((stop - start, 3), dtype=np.int64)
    _kernels.null_block(
        prep.values, slots, pool, perms, ctx.owner, ctx.members, ctx.indptr, ctx.group, ctx.n_groups,
        ctx.present, prep.agg is AggKind.MEDIAN, _kernels.EPS, out,
    )
    return out


def null_counts(prep: PreparedAnalysis, cfg: NullConfig, threads: int = 1) -> np.ndarray:
    """``(replicates, 3)`` status counts for permuted assignments on fixed contexts."""
    slots = np.flatnonzero(prep.defined)
    pool = prep.values[slots]
    blocks = [(s, min(s + BLOCK, cfg.replicates)) for s in range(0, cfg.replicates, BLOCK)]
    run = lambda ab: _block_counts(prep, slots, pool, cfg.seed, *ab)  # noqa: E731
    if threads <= 1:
        parts = [run(b) for b in blocks]
    else:
        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(run, blocks))
    return np.concatenate(parts, axis=0)


def run_null_model(prep: PreparedAnalysis, cfg: NullConfig = NullConfig(), threads: int = 1) -> NullResult:
    return NullResult(prep.stats(), null_counts(prep, cfg, threads), cfg)


def expected_magnitude(analysis, cfg: NullConfig = NullConfig(), values=None, threads: int = 1) -> float:
    """Mean magnitude over permuted assignments.

    ``analysis`` is either a :class:`PreparedAnalysis` (contexts reused
    across replicates) or a callable mapping a full value array to a
    magnitude or :class:`ParadoxStats`, re-run from scratch per replicate;
    the latter needs ``values``.  Both routes see the same permutations.
    """
    if isinstance(analysis, PreparedAnalysis):
        res = run_null_model(analysis, cfg, threads)
        return float(np.mean(res.magnitudes)) if res.total else 0.0
    if values is None:
        raise ValueError("a callable analysis needs the observed values")
    return float(np.mean(naive_magnitudes(analysis, values, cfg)))


def naive_magnitudes(analysis: Callable, values, cfg: NullConfig) -> np.ndarray:
    out = np.empty(cfg.replicates)
    for r in range(cfg.replicates):
        res = analysis(permuted_assignment(values, cfg.seed, r))
        out[r] = res.magnitude if isinstance(res, ParadoxStats) else float(res)
    return out
