"""Random nonlinear systems that respect a structure graph.

Equation ``i`` is ``c_i + sum_j a_ij x_j + b_ij tanh(x_j) + d_ij x_j**2`` over
the edges ``j -> i``. These are used to check Jacobian rank behaviour, to
solve anchored systems ``F(X) = F(X0)`` and to probe whether a solution
survives small structure-respecting perturbations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .graph import StructureGraph
from .numeric import RandomizedConfig, draw_entries, numeric_rank, trial_rng

__all__ = [
    "StructuredFunction",
    "NewtonResult",
    "Verdict",
    "RobustnessProbeResult",
    "sample_function",
    "random_point",
    "anchored",
    "newton",
    "jacobian_rank_sweep",
    "solve_from_anchor",
    "probe_robustness",
    "manifold_dimension_at",
]

# generator streams; trial index selects the draw within a stream
_FUNCTION_STREAM = 10
_POINT_STREAM = 11
_OFFSET_STREAM = 12
_PERTURB_STREAM = 13


@dataclass(frozen=True, eq=False)
class StructuredFunction:
    graph: StructureGraph
    rows: np.ndarray
    cols: np.ndarray
    a: np.ndarray
    b: np.ndarray
    d: np.ndarray
    c: np.ndarray

    @property
    def n(self) -> int:
        return self.graph.n

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"expected a point of shape ({self.n},), got {x.shape}")
        if not np.all(np.isfinite(x)):
            raise ValueError("point has non-finite coordinates")
        return x

    def __call__(self, x) -> np.ndarray:
        return self.eval(x)

    def eval(self, x) -> np.ndarray:
        x = self._check(x)
        xj = x[self.cols]
        out = self.c.copy()
        np.add.at(out, self.rows, self.a * xj + self.b * np.tanh(xj) + self.d * xj**2)
        return out

    def jacobian(self, x) -> np.ndarray:
        x = self._check(x)
        xj = x[self.cols]
        jac = np.zeros((self.n, self.n))
        jac[self.rows, self.cols] = self.a + self.b / np.cosh(xj) ** 2 + 2.0 * self.d * xj
        return jac


def sample_function(g: StructureGraph, cfg: RandomizedConfig, trial: int = 0) -> StructuredFunction:
    rng = trial_rng(cfg, trial, _FUNCTION_STREAM)
    positions = sorted((v, u) for u, v in g.edges)
    rows = np.array([i for i, _ in positions], dtype=int)
    cols = np.array([j for _, j in positions], dtype=int)
    k = len(positions)
    a, b, d = (draw_entries(rng, k, cfg) for _ in range(3))
    c = draw_entries(rng, g.n, cfg)
    return StructuredFunction(g, rows, cols, a, b, d, c)


def random_point(n: int, cfg: RandomizedConfig, trial: int = 0, box: float = 2.0) -> np.ndarray:
    return trial_rng(cfg, trial, _POINT_STREAM).uniform(-box, box, size=n)


def anchored(f: StructuredFunction, x0) -> StructuredFunction:
    """Shift the constants so that ``x0`` is a root."""
    return replace(f, c=f.c - f.eval(x0))


@dataclass(frozen=True)
class NewtonResult:
    x: np.ndarray
    residual: float
    converged: bool
    iterations: int


def newton(
    f: StructuredFunction,
    x0,
    *,
    max_iter: int = 100,
    tol: float = 1e-10,
    step_tol: float = 1e-14,
    max_halvings: int = 30,
) -> NewtonResult:
    """Damped Newton iteration for ``f(x) = 0``.

    Steps come from a least-squares solve, so on a singular Jacobian this
    becomes Gauss-Newton on ``|f|^2``. A step is halved until the residual
    norm decreases. Converged means ``max|f| <= tol`` or a step shorter than
    ``step_tol``; ``residual`` is the Euclidean norm of ``f`` at the result.
    """
    x = np.array(x0, dtype=float)
    fx = f.eval(x)
    norm = float(np.linalg.norm(fx))
    for it in range(max_iter + 1):
        if np.max(np.abs(fx), initial=0.0) <= tol:
            return NewtonResult(x, norm, True, it)
        if it == max_iter:
            break
        step = np.linalg.lstsq(f.jacobian(x), -fx, rcond=None)[0]
        t = 1.0
        for _ in range(max_halvings + 1):
            trial = x + t * step
            f_trial = f.eval(trial)
            trial_norm = float(np.linalg.norm(f_trial))
            if trial_norm < norm:
                break
            t *= 0.5
        else:
            return NewtonResult(x, norm, False, it)
        x, fx, norm = trial, f_trial, trial_norm
        if t * np.linalg.norm(step) <= step_tol:
            return NewtonResult(x, norm, True, it + 1)
    return NewtonResult(x, norm, False, max_iter)


def jacobian_rank_sweep(
    f: StructuredFunction, points: int, cfg: RandomizedConfig
) -> tuple[int, int]:
    if points < 1:
        raise ValueError("points must be at least 1")
    ranks = [numeric_rank(f.jacobian(random_point(f.n, cfg, t)), cfg) for t in range(points)]
    return min(ranks), max(ranks)


def solve_from_anchor(
    f: StructuredFunction, x0, cfg: RandomizedConfig, offset: float = 1e-2, trial: int = 0
) -> NewtonResult:
    """Solve ``F(X) = F(x0)`` by Newton from a point near ``x0``.

    ``x0`` is a root by construction; with ``offset=0`` it is returned as is.
    """
    x0 = np.asarray(x0, dtype=float)
    g = anchored(f, x0)
    start = x0 + trial_rng(cfg, trial, _OFFSET_STREAM).uniform(-offset, offset, size=f.n)
    return newton(g, start if offset else x0)


class Verdict(str, enum.Enum):
    ROBUST = "RobustObserved"
    FRAGILE = "FragileObserved"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class RobustnessProbeResult:
    verdict: Verdict
    base_solution: np.ndarray
    perturbed_solution: np.ndarray | None
    perturbation_size: float
    displacement: float | None
    best_residual: float


def _weakest_left_direction(jac: np.ndarray) -> np.ndarray:
    u, _, _ = np.linalg.svd(jac)
    return u[:, -1]


def probe_robustness(
    f: StructuredFunction,
    x0,
    delta: float,
    cfg: RandomizedConfig,
    *,
    mode: str = "coefficients",
    trial: int = 0,
    starts: int = 5,
    start_spread: float = 0.1,
    fragile_ratio: float = 0.5,
) -> RobustnessProbeResult:
    """Check whether the root ``x0`` of ``F - F(x0)`` survives a perturbation.

    ``mode="coefficients"`` moves every coefficient and constant by an
    independent draw from ``[-delta, delta]``. ``mode="image"`` moves only
    the constants, by ``delta`` along the left singular vector of the
    smallest singular value of ``DF(x0)``; on a rank-deficient structure this
    pushes the target off the image of ``F``.

    Newton is run from ``x0`` and from ``starts - 1`` nearby points. A
    converged root within ``100 * delta * (1 + |x0|)`` of ``x0`` is reported
    as robust. Otherwise, if the smallest residual norm found stays above
    ``fragile_ratio * delta``, the solution is reported as fragile.
    """
    if delta < 0:
        raise ValueError("delta must be non-negative")
    x0 = np.asarray(x0, dtype=float)
    base = anchored(f, x0)
    if delta == 0:
        perturbed = base
    elif mode == "coefficients":
        rng = trial_rng(cfg, trial, _PERTURB_STREAM)
        k = base.a.size

        def bump(v, size):
            return v + rng.uniform(-delta, delta, size=size)

        perturbed = replace(
            base, a=bump(base.a, k), b=bump(base.b, k), d=bump(base.d, k), c=bump(base.c, f.n)
        )
    elif mode == "image":
        direction = _weakest_left_direction(base.jacobian(x0))
        perturbed = replace(base, c=base.c + delta * direction)
    else:
        raise ValueError(f"unknown perturbation mode {mode!r}")

    bound = 100.0 * delta * (1.0 + float(np.linalg.norm(x0)))
    rng = trial_rng(cfg, trial, _OFFSET_STREAM)
    best = np.inf
    for k in range(starts):
        start = x0 if k == 0 else x0 + rng.uniform(-start_spread, start_spread, size=f.n)
        res = newton(perturbed, start)
        best = min(best, res.residual)
        if res.converged and res.residual <= 1e-10 * np.sqrt(f.n):
            shift = float(np.linalg.norm(res.x - x0))
            if shift <= bound:
                return RobustnessProbeResult(Verdict.ROBUST, x0, res.x, delta, shift, res.residual)
    verdict = Verdict.FRAGILE if best > fragile_ratio * delta else Verdict.INCONCLUSIVE
    return RobustnessProbeResult(verdict, x0, None, delta, None, float(best))


def manifold_dimension_at(f: StructuredFunction, x0, cfg: RandomizedConfig) -> int:
    """Local dimension of the solution set of ``F(X) = F(x0)`` at ``x0``."""
    return f.n - numeric_rank(f.jacobian(x0), cfg)
