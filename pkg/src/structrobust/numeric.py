"""Randomized numerical oracle for generic rank, kernels and null nodes.

Patterns are filled with independent random reals; generic properties are
read off from a handful of such instantiations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .graph import StructureGraph, StructurePattern, pattern_of

__all__ = [
    "RandomizedConfig",
    "StructuredLinearSystem",
    "Solvability",
    "SolvabilityVerdict",
    "trial_rng",
    "draw_entries",
    "instantiate",
    "numeric_rank",
    "generic_rank_numeric",
    "kernel_basis",
    "null_nodes_numeric",
    "classify_solvability",
]

_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class RandomizedConfig:
    """Sampling and tolerance settings.

    Nonzero entries are drawn uniformly from ``[-high, -low] U [low, high]``.
    """

    seed: int = 0
    trials: int = 7
    rank_rel_tol: float = 1e-8
    coord_tol: float = 1e-6
    entry_low: float = 0.1
    entry_high: float = 1.0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        for name in ("rank_rel_tol", "coord_tol"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value}")
        if not 0.0 <= self.entry_low < self.entry_high:
            raise ValueError("need 0 <= entry_low < entry_high")


def trial_rng(cfg: RandomizedConfig, trial: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for ``(seed, trial, stream)``.

    The triple is hashed by :class:`numpy.random.SeedSequence`, so distinct
    trials and streams never share state.
    """
    return np.random.default_rng(np.random.SeedSequence([cfg.seed & _U64, trial, stream]))


def draw_entries(rng: np.random.Generator, size, cfg: RandomizedConfig) -> np.ndarray:
    mag = rng.uniform(cfg.entry_low, cfg.entry_high, size=size)
    sign = np.where(rng.random(size=size) < 0.5, -1.0, 1.0)
    return mag * sign


def instantiate(p: StructurePattern, cfg: RandomizedConfig, trial: int = 0) -> np.ndarray:
    positions = sorted(p.allowed)
    out = np.zeros((p.rows, p.cols))
    if positions:
        rows, cols = zip(*positions)
        out[list(rows), list(cols)] = draw_entries(trial_rng(cfg, trial), len(positions), cfg)
    return out


def numeric_rank(m: np.ndarray, cfg: RandomizedConfig) -> int:
    """Count of singular values above ``rank_rel_tol`` times the largest."""
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > cfg.rank_rel_tol * s[0]))


def generic_rank_numeric(p: StructurePattern, cfg: RandomizedConfig) -> int:
    # the generic rank is the maximum rank; a low draw is a measure-zero accident
    return max(numeric_rank(instantiate(p, cfg, t), cfg) for t in range(cfg.trials))


def kernel_basis(m: np.ndarray, cfg: RandomizedConfig) -> np.ndarray:
    """Orthonormal basis of the right null space, one vector per row.

    Has shape ``(0, n)`` for matrices of full column rank.
    """
    m = np.asarray(m, dtype=float)
    n = m.shape[1]
    if m.shape[0] == 0:
        return np.eye(n)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        return np.eye(n)
    rank = int(np.count_nonzero(s > cfg.rank_rel_tol * s[0]))
    return vh[rank:].copy()


def null_nodes_numeric(g: StructureGraph, cfg: RandomizedConfig) -> frozenset[str]:
    """Null nodes read from random kernel vectors, majority vote over trials.

    A random combination of the kernel basis is used instead of the basis
    vectors themselves, since a particular basis may have zero coordinates
    where a generic kernel vector does not.
    """
    p = pattern_of(g)
    votes = np.zeros(g.n, dtype=int)
    for t in range(cfg.trials):
        basis = kernel_basis(instantiate(p, cfg, t), cfg)
        if basis.shape[0] == 0:
            continue
        weights = trial_rng(cfg, t, stream=1).standard_normal(basis.shape[0])
        x = weights @ basis
        votes += np.abs(x) > cfg.coord_tol * np.max(np.abs(x))
    return g.labels(np.flatnonzero(2 * votes > cfg.trials))


@dataclass(frozen=True)
class StructuredLinearSystem:
    """``A x = b`` with ``A`` following ``a_pattern`` and ``b`` nonzero where flagged."""

    a_pattern: StructurePattern
    b_pattern: tuple[bool, ...]

    def __post_init__(self):
        object.__setattr__(self, "b_pattern", tuple(bool(x) for x in self.b_pattern))
        if len(self.b_pattern) != self.a_pattern.rows:
            raise ValueError(
                f"b_pattern has length {len(self.b_pattern)}, A has {self.a_pattern.rows} rows"
            )


class Solvability(str, enum.Enum):
    ALMOST_ALWAYS = "AlmostAlways"
    ALMOST_NEVER = "AlmostNever"


@dataclass(frozen=True)
class SolvabilityVerdict:
    verdict: Solvability
    agreeing_trials: int
    trials: int


def classify_solvability(s: StructuredLinearSystem, cfg: RandomizedConfig) -> SolvabilityVerdict:
    """Decide whether a structured ``A x = b`` is solvable for almost all entries.

    Each trial draws ``A`` and ``b`` and tests ``rank(A) == rank([A | b])``.
    """
    b_rows = [i for i, flag in enumerate(s.b_pattern) if flag]
    solvable = 0
    for t in range(cfg.trials):
        a = instantiate(s.a_pattern, cfg, t)
        b = np.zeros(s.a_pattern.rows)
        if b_rows:
            b[b_rows] = draw_entries(trial_rng(cfg, t, stream=2), len(b_rows), cfg)
        augmented = np.column_stack([a, b])
        solvable += numeric_rank(a, cfg) == numeric_rank(augmented, cfg)
    if 2 * solvable > cfg.trials:
        return SolvabilityVerdict(Solvability.ALMOST_ALWAYS, solvable, cfg.trials)
    return SolvabilityVerdict(Solvability.ALMOST_NEVER, cfg.trials - solvable, cfg.trials)
