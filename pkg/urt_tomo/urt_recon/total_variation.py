# Copyright (c) 2022 The URT Tomography Tool authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""
Reconstruction with smoothed total variation regularization.

The objective ||A x - b||^2 + lambda G(x) is minimised by projected
gradient descent with Barzilai-Borwein trial steps and Armijo
backtracking. G is either the per pixel sum sum_i sqrt(|grad x|_i^2 + beta^2)
("isotropic") or the single root sqrt(||grad x||^2 + beta^2) ("global").
The discrete gradient uses forward differences and is zero across the
last row and column.

"""

import logging
import time

import numpy as np

from urt_tomo.urt_model.types import Image, ImageGrid, SparseOperator, sparse_apply, sparse_apply_adjoint
from urt_tomo.urt_recon.recon_method import ReconConfig, ReconProblem, ReconResult, ReconstructionMethod

__all__ = [
    "forward_gradient",
    "gradient_adjoint",
    "tv_objective",
    "tv_gradient",
    "tv_reconstruct",
    "TvMethod",
]

ARMIJO_FACTOR = 0.5
SUFFICIENT_DECREASE = 1e-4
MIN_STEP = 1e-16
STALL_WINDOW = 10


def _side(size: int) -> int:
    m = int(round(np.sqrt(size)))
    if m * m != size:
        raise ValueError(f"{size} values do not form a square image")
    return m


def forward_gradient(x: np.ndarray) -> np.ndarray:
    """
    Forward difference gradient of a square image given as a flat vector.

    Returns
    -------
    Array of shape (2, m, m): differences along columns (x1) and along
    rows, zero in the last column and the last row respectively.

    """

    x = np.asarray(x, dtype=float)
    m = _side(x.size)
    matrix = x.reshape(m, m)
    gradient = np.zeros((2, m, m))
    gradient[0, :, :-1] = matrix[:, 1:] - matrix[:, :-1]
    gradient[1, :-1, :] = matrix[1:, :] - matrix[:-1, :]
    return gradient


def gradient_adjoint(gradient: np.ndarray) -> np.ndarray:
    """
    Adjoint of forward_gradient (the negative divergence), as a flat vector.
    """
    gradient = np.asarray(gradient, dtype=float)
    m = gradient.shape[1]
    result = np.zeros((m, m))
    result[:, 1:] += gradient[0, :, :-1]
    result[:, :-1] -= gradient[0, :, :-1]
    result[1:, :] += gradient[1, :-1, :]
    result[:-1, :] -= gradient[1, :-1, :]
    return result.reshape(-1)


def _tv_value_and_weights(x: np.ndarray, cfg: ReconConfig):
    gradient = forward_gradient(x)
    if cfg.tv_norm == "global":
        root = np.sqrt(np.sum(gradient ** 2) + cfg.beta_smooth ** 2)
        return float(root), gradient, root
    magnitude = np.sqrt(np.sum(gradient ** 2, axis=0) + cfg.beta_smooth ** 2)
    return float(np.sum(magnitude)), gradient, magnitude


def _objective_parts(a: SparseOperator, b: np.ndarray, x: np.ndarray, cfg: ReconConfig):
    residual = sparse_apply(a, x) - b
    misfit = float(residual @ residual)
    value, _, _ = _tv_value_and_weights(x, cfg)
    return misfit + cfg.lam * value, np.sqrt(misfit)


def tv_objective(a: SparseOperator, b: np.ndarray, x: np.ndarray, cfg: ReconConfig) -> float:
    """
    Objective ||A x - b||^2 + lambda G(x).
    """
    return _objective_parts(a, b, x, cfg)[0]


def tv_gradient(a: SparseOperator, b: np.ndarray, x: np.ndarray, cfg: ReconConfig) -> np.ndarray:
    """
    Gradient 2 A^T (A x - b) + lambda grad^T (grad x / w) of the objective,
    with w the smoothed magnitude of the chosen TV norm.
    """
    residual = sparse_apply(a, x) - b
    _, gradient, weights = _tv_value_and_weights(x, cfg)
    return 2.0 * sparse_apply_adjoint(a, residual) + cfg.lam * gradient_adjoint(gradient / weights)


def _scale(a: SparseOperator, b: np.ndarray) -> float:
    # ratio of back projections, exact for constant images
    reference = np.max(np.abs(sparse_apply_adjoint(a, sparse_apply(a, np.ones(a.cols)))))
    backprojection = np.max(np.abs(sparse_apply_adjoint(a, b)))
    if not reference > 0 or not backprojection > 0:
        return 1.0
    return float(backprojection / reference)


def tv_reconstruct(a: SparseOperator, b: np.ndarray, cfg: ReconConfig, grid: ImageGrid = None) -> ReconResult:
    """
    Total variation regularized least squares from x = 0.

    Parameters
    ----------
        a : SparseOperator
            System matrix.

        b : ndarray
            Data with a.rows entries.

        cfg : ReconConfig
            Regularization, smoothing and stopping parameters. With
            `normalize` the problem is solved for x / c and data b / c,
            where c estimates the image scale, so that lambda and beta
            refer to an image of unit scale.

        grid : ImageGrid
            Grid of the result; derived from a.cols if omitted.

    Returns
    -------
    ReconResult; the flag is "converged", "max_iters" or "line_search".
    Accepted steps never increase the objective.

    """

    b = np.asarray(b, dtype=float)
    if b.shape != (a.rows,):
        raise ValueError(f"dimension mismatch: operator has {a.rows} rows, data has shape {b.shape}")
    if grid is None:
        grid = ImageGrid(_side(a.cols))
    started = time.perf_counter()
    scale = _scale(a, b) if cfg.normalize else 1.0
    data = b / scale

    def project(values):
        return np.maximum(values, 0.0) if cfg.nonneg else values

    x = np.zeros(a.cols)
    objective, residual = _objective_parts(a, data, x, cfg)
    gradient = tv_gradient(a, data, x, cfg)
    norm = a.norm_estimate()
    step = 1.0 / max(2.0 * norm * norm, np.finfo(float).tiny)
    history = [objective]
    rows = [(0, objective, residual, 0.0)]
    flag = "max_iters"
    iterations = 0

    while iterations < cfg.max_iters:
        trial = step
        while True:
            candidate = project(x - trial * gradient)
            change = candidate - x
            decrease = float(gradient @ change)
            if not np.any(change):
                break
            value, candidate_residual = _objective_parts(a, data, candidate, cfg)
            if value <= objective + SUFFICIENT_DECREASE * decrease:
                break
            trial *= ARMIJO_FACTOR
            if trial < MIN_STEP:
                break
        if not np.any(change):
            flag = "converged"
            break
        if trial < MIN_STEP:
            flag = "line_search"
            logging.warning("TV line search failed after %d iterations", iterations)
            break

        gradient_next = tv_gradient(a, data, candidate, cfg)
        difference = gradient_next - gradient
        curvature = float(change @ difference)
        step = float(change @ change) / curvature if curvature > 0 else trial
        x, gradient, objective, residual = candidate, gradient_next, value, candidate_residual
        iterations += 1
        history.append(objective)
        rows.append((iterations, objective, residual, trial))
        logging.debug("TV iteration %d: objective %.6e, step %.3e", iterations, objective, trial)
        if len(history) > STALL_WINDOW:
            previous = history[-1 - STALL_WINDOW]
            if previous - objective <= cfg.tol * abs(previous):
                flag = "converged"
                break

    logging.info(
        "TV finished after %d iterations (%s), objective %.6e, %.1f s",
        iterations,
        flag,
        objective,
        time.perf_counter() - started,
    )
    return ReconResult(Image(grid, scale * x), ReconResult.make_log(rows), flag, iterations)


class TvMethod(ReconstructionMethod):
    """
    Projected gradient descent for total variation regularization.
    """

    def __init__(self):
        super().__init__(identifier="tv", name="Total variation, projected gradient")

    def reconstruct(self, problem: ReconProblem, cfg: ReconConfig) -> ReconResult:
        return tv_reconstruct(problem.operator, problem.data, cfg, problem.grid)
