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
Reconstruction by conjugate gradients for least squares (CGLS) with
Tikhonov regularization.

"""

import logging
import time

import numpy as np

from urt_tomo.urt_model.types import Image, ImageGrid, SparseOperator, sparse_apply, sparse_apply_adjoint
from urt_tomo.urt_recon.recon_method import ReconConfig, ReconProblem, ReconResult, ReconstructionMethod

__all__ = ["cgls_tikhonov", "CglsMethod"]


def cgls_tikhonov(a: SparseOperator, b: np.ndarray, cfg: ReconConfig, grid: ImageGrid = None) -> ReconResult:
    """
    Minimise ||A x - b||^2 + lambda ||x||^2 by CGLS on the augmented
    system [A; sqrt(lambda) I] x = [b; 0], starting from x = 0.

    Parameters
    ----------
        a : SparseOperator
            System matrix.

        b : ndarray
            Data with a.rows entries.

        cfg : ReconConfig
            Uses lam, max_iters and tol; the iteration stops once the
            normal equation residual drops below tol times its initial
            value.

        grid : ImageGrid
            Grid of the result; derived from a.cols if omitted.

    Returns
    -------
    ReconResult whose log holds the augmented residual
    sqrt(||A x - b||^2 + lambda ||x||^2) per iteration.

    """

    b = np.asarray(b, dtype=float)
    if b.shape != (a.rows,):
        raise ValueError(f"dimension mismatch: operator has {a.rows} rows, data has shape {b.shape}")
    if grid is None:
        grid = ImageGrid(int(round(np.sqrt(a.cols))))
    started = time.perf_counter()
    lam = cfg.lam

    x = np.zeros(a.cols)
    r = b.copy()
    s = sparse_apply_adjoint(a, r)
    p = s.copy()
    gamma = float(s @ s)
    threshold = (cfg.tol * np.sqrt(gamma)) ** 2
    rows = []
    flag = "max_iters"
    iterations = 0
    if gamma <= threshold:
        flag = "converged"

    while flag == "max_iters" and iterations < cfg.max_iters:
        q = sparse_apply(a, p)
        curvature = float(q @ q + lam * (p @ p))
        if not curvature > 0:
            flag = "breakdown"
            logging.warning("CGLS breakdown after %d iterations: zero curvature", iterations)
            break
        step = gamma / curvature
        x += step * p
        r -= step * q
        s = sparse_apply_adjoint(a, r) - lam * x
        gamma_next = float(s @ s)
        iterations += 1
        objective = float(r @ r + lam * (x @ x))
        rows.append((iterations, objective, np.sqrt(objective), step))
        logging.debug("CGLS iteration %d: objective %.6e, step %.3e", iterations, objective, step)
        if gamma_next <= threshold:
            flag = "converged"
            break
        p = s + (gamma_next / gamma) * p
        gamma = gamma_next

    log = ReconResult.make_log(rows)
    logging.info(
        "CGLS finished after %d iterations (%s), objective %.6e, %.1f s",
        iterations,
        flag,
        rows[-1][1] if rows else float(b @ b),
        time.perf_counter() - started,
    )
    return ReconResult(Image(grid, x), log, flag, iterations)


class CglsMethod(ReconstructionMethod):
    """
    CGLS with Tikhonov regularization.
    """

    def __init__(self):
        super().__init__(identifier="cgls", name="CGLS with Tikhonov regularization")

    def reconstruct(self, problem: ReconProblem, cfg: ReconConfig) -> ReconResult:
        return cgls_tikhonov(problem.operator, problem.data, cfg, problem.grid)
