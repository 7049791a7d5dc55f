"""Batch regression under the asymmetric-kernel objective.

Maximizes (1/N) * sum_i A(d_i - W^T x_i) - lambda * ||W||^2 by the
fixed-point iteration W <- (A + lambda I)^{-1} B with the weighted
second-moment matrices rebuilt from the current residuals each pass.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .kernels import KernelBandwidths, eval_kernel, eval_score, eval_weight_xi

_COND_CAP = 1e12


class NonConvergenceError(RuntimeError):
    """Fixed-point iteration exhausted max_iter; carries the last iterate."""

    def __init__(self, weights, residual, max_iter):
        super().__init__(
            f"fixed-point iteration did not converge in {max_iter} passes "
            f"(last relative change {residual:.3e})"
        )
        self.weights = weights
        self.residual = float(residual)


class IllConditionedError(np.linalg.LinAlgError):
    """The regularized normal matrix is numerically singular."""

    def __init__(self, cond):
        super().__init__(
            f"regularized normal matrix condition estimate {cond:.3e} "
            f"exceeds the cap {_COND_CAP:.1e}"
        )
        self.cond = float(cond)


@dataclass(frozen=True)
class RegressionProblem:
    """N input/target pairs with kernel bandwidths and a ridge weight."""

    inputs: np.ndarray
    targets: np.ndarray
    bandwidths: KernelBandwidths
    lam: float = 0.0

    def __post_init__(self):
        X = np.asarray(self.inputs, dtype=float)
        d = np.asarray(self.targets, dtype=float)
        if X.ndim != 2 or X.shape[0] < 1:
            raise ValueError(f"inputs must be a non-empty (N, m) array, got shape {X.shape}")
        if d.shape != (X.shape[0],):
            raise ValueError(
                f"targets must have shape ({X.shape[0]},), got {d.shape}"
            )
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(d))):
            raise ValueError("inputs and targets must be finite")
        if not (math.isfinite(self.lam) and self.lam >= 0.0):
            raise ValueError(f"lam must be non-negative and finite, got {self.lam}")
        object.__setattr__(self, "inputs", X)
        object.__setattr__(self, "targets", d)

    @property
    def n(self) -> int:
        return self.inputs.shape[0]

    @property
    def dim(self) -> int:
        return self.inputs.shape[1]


@dataclass(frozen=True)
class FixedPointResult:
    weights: np.ndarray
    iterations_used: int
    final_residual: float
    objective_value: float


def _check_weights(problem, W):
    W = np.asarray(W, dtype=float)
    if W.shape != (problem.dim,):
        raise ValueError(f"weights must have shape ({problem.dim},), got {W.shape}")
    return W


def objective(problem: RegressionProblem, W) -> float:
    """(1/N) * sum of kernel values at the residuals, minus lam * ||W||^2."""
    W = _check_weights(problem, W)
    e = problem.targets - problem.inputs @ W
    return float(
        np.mean(eval_kernel(e, problem.bandwidths)) - problem.lam * float(W @ W)
    )


def gradient(problem: RegressionProblem, W) -> np.ndarray:
    """Analytic gradient of the objective: (1/N) * sum psi(e_i) x_i - 2 lam W."""
    W = _check_weights(problem, W)
    e = problem.targets - problem.inputs @ W
    psi = eval_score(e, problem.bandwidths)
    return problem.inputs.T @ psi / problem.n - 2.0 * problem.lam * W


def _fixed_point_map(problem: RegressionProblem, W):
    """One application of W -> (A(W) + lam I)^{-1} B(W)."""
    X, d = problem.inputs, problem.targets
    e = d - X @ W
    xi = eval_weight_xi(e, problem.bandwidths)
    A = (X.T * xi) @ X / problem.n
    B = X.T @ (xi * d) / problem.n
    M = A + problem.lam * np.eye(problem.dim)
    cond = np.linalg.cond(M)
    if not np.isfinite(cond) or cond > _COND_CAP:
        raise IllConditionedError(cond)
    return np.linalg.solve(M, B)


def _initial_weights(problem: RegressionProblem):
    X = problem.inputs
    gram = X.T @ X
    cond = np.linalg.cond(gram)
    if np.isfinite(cond) and cond < _COND_CAP:
        sol, *_ = np.linalg.lstsq(X, problem.targets, rcond=None)
        return sol
    return np.zeros(problem.dim)


def solve_fixed_point(
    problem: RegressionProblem,
    tol: float = 1e-8,
    max_iter: int = 500,
    initial: Optional[np.ndarray] = None,
) -> FixedPointResult:
    """Iterate the fixed-point map to a relative-change tolerance.

    Starts from the least-squares solution (or zeros if the Gram matrix is
    ill-conditioned) unless `initial` is given.  A step that decreases the
    objective is halved once toward the previous iterate; this guard never
    changes a converged solution.
    """
    if not (tol > 0.0 and math.isfinite(tol)):
        raise ValueError(f"tol must be positive and finite, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be at least 1, got {max_iter}")

    if initial is not None:
        W = _check_weights(problem, initial).copy()
    else:
        W = _initial_weights(problem)

    obj = objective(problem, W)
    residual = math.inf
    for k in range(1, max_iter + 1):
        W_next = _fixed_point_map(problem, W)
        obj_next = objective(problem, W_next)
        if obj_next < obj:
            W_next = 0.5 * (W + W_next)
            obj_next = objective(problem, W_next)
        residual = float(
            np.linalg.norm(W_next - W) / max(1.0, np.linalg.norm(W))
        )
        W, obj = W_next, obj_next
        if residual <= tol:
            return FixedPointResult(
                weights=W,
                iterations_used=k,
                final_residual=residual,
                objective_value=obj,
            )
    raise NonConvergenceError(W, residual, max_iter)
