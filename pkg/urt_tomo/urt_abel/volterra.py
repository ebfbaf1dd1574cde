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
This file contains the solver for Volterra equations of the second kind,
f(r) + int_{B_j(r)} K(r, w) f(w) dw = h(r).

"""

import logging

import numpy as np
from scipy.linalg import solve_triangular

from urt_tomo.urt_abel.kernel_spec import TriangularKernelMatrix
from urt_tomo.urt_model.errors import NeumannDivergenceError
from urt_tomo.urt_model.types import Grid1D

__all__ = [
    "SECOND_KIND_METHODS",
    "trapezoid_weights",
    "second_kind_matrix",
    "second_kind_solve",
    "solve_second_kind_system",
]

SECOND_KIND_METHODS = ("substitution", "neumann")


def trapezoid_weights(grid: Grid1D, j: int) -> np.ndarray:
    """
    Composite trapezoidal weights for int_{B_j(x_i)} phi(w) dw, one row per x_i.
    """

    n = grid.count
    weights = np.tril(np.full((n, n), grid.spacing))
    weights[:, 0] *= 0.5
    weights[np.arange(1, n), np.arange(1, n)] *= 0.5
    weights[0, 0] = 0.0
    if j == 1:
        return weights[::-1, ::-1].copy()
    return weights


def second_kind_matrix(kernel: TriangularKernelMatrix) -> np.ndarray:
    """
    Matrix I + W o K of the discretised second kind equation.
    """

    weighted = trapezoid_weights(kernel.grid, kernel.j) * kernel.values
    return np.eye(kernel.grid.count) + weighted


def _neumann(operator: np.ndarray, h: np.ndarray, tol: float, max_iter: int, window: int) -> np.ndarray:
    # operator holds W o K without the identity
    f = np.array(h, copy=True)
    previous_update = np.inf
    growth = 0
    for iteration in range(1, max_iter + 1):
        updated = h - operator @ f
        update = np.linalg.norm(updated - f)
        f = updated
        if not np.all(np.isfinite(f)):
            raise NeumannDivergenceError(f"Neumann series overflowed after {iteration} iterations")
        if update <= tol * max(np.linalg.norm(f), np.finfo(float).tiny):
            logging.debug("Neumann series converged after %d iterations", iteration)
            return f
        growth = growth + 1 if update > previous_update else 0
        if growth >= window:
            raise NeumannDivergenceError(f"Neumann updates grew for {window} consecutive iterations")
        previous_update = update
    raise NeumannDivergenceError(f"Neumann series did not converge in {max_iter} iterations")


def solve_second_kind_system(
    system: np.ndarray,
    h: np.ndarray,
    j: int,
    method: str = "substitution",
    tol: float = 1e-12,
    max_iter: int = 10000,
    divergence_window: int = 50,
) -> np.ndarray:
    """
    Solve (I + M) f = h for a triangular quadrature matrix M, lower for
    j = 0 and upper for j = 1.
    """

    if method not in SECOND_KIND_METHODS:
        raise ValueError(f"unknown method '{method}', expected one of {SECOND_KIND_METHODS}")
    h = np.asarray(h)
    if h.shape[0] != system.shape[0]:
        raise ValueError(f"right hand side must have {system.shape[0]} samples, got shape {h.shape}")
    if not np.all(np.isfinite(h)):
        raise ValueError("right hand side must be finite")
    if method == "substitution":
        return solve_triangular(system, h, lower=(j == 0), check_finite=False)
    operator = system - np.eye(system.shape[0])
    return _neumann(operator, h, tol, max_iter, divergence_window)


def second_kind_solve(
    kernel: TriangularKernelMatrix,
    h: np.ndarray,
    method: str = "substitution",
    tol: float = 1e-12,
    max_iter: int = 10000,
    divergence_window: int = 50,
) -> np.ndarray:
    """
    Solve the discretised second kind equation on the grid of `kernel`.

    Parameters
    ----------
        kernel : TriangularKernelMatrix
            Kernel values on T_j.

        h : ndarray
            Right hand side samples.

        method : str
            "substitution" for forward (j = 0) or backward (j = 1)
            substitution, "neumann" for the Neumann series.

        tol : float
            Relative update size that stops the Neumann series.

    Returns
    -------
    Samples of f on the grid.

    Raises
    ------
    NeumannDivergenceError
        If the Neumann series diverges.

    """

    return solve_second_kind_system(
        second_kind_matrix(kernel), h, kernel.j, method, tol, max_iter, divergence_window
    )
