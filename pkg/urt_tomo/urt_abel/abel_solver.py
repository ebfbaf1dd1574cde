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
This file contains the inversion of generalized Abel equations.

The equation is reduced to a second kind Volterra equation: the data are
differentiated m_int times, integrated with the Riemann-Liouville
integral of order beta and differentiated once more. The kernel of the
second kind equation is the r-derivative of the reduced kernel L_beta,
divided by its diagonal. Problems with orientation j = 1 are mirrored
onto j = 0.

For kernels that oscillate strongly over the grid the second kind
reduction amplifies data errors without bound; `regularized_abel_solve`
inverts the first kind equation with Tikhonov damping instead.

"""

import logging
import time
from dataclasses import dataclass

import numpy as np

from urt_tomo.urt_abel.differentiation import differentiate_m
from urt_tomo.urt_abel.kernel_spec import (
    AbelKernelSpec,
    ValidationReport,
    finite_difference_noise,
    leibniz_coeffs,
    reduced_kernel,
)
from urt_tomo.urt_abel.quadrature import (
    endpoint_coefficient,
    fractional_integrate,
    fractional_power,
    forward_matrix,
    gauss_legendre_unit,
    jacobi_average,
    kernel_product_weights,
)
from urt_tomo.urt_abel.volterra import SECOND_KIND_METHODS, solve_second_kind_system, trapezoid_weights
from urt_tomo.urt_model.errors import KernelValidationError
from urt_tomo.urt_model.types import Grid1D

__all__ = ["AbelSolveOptions", "AbelSolver", "abel_solve", "regularized_abel_solve"]

KERNEL_RULES = ("trapezoid", "product")
PAIR_CHUNK = 4096


@dataclass
class AbelSolveOptions(object):
    """
    Options of the Abel inversion.

    `endpoint_correction` removes the leading (p - a)^(alpha + 1) term of the
    data before the fractional integration and adds its exact integral back.
    `refine_steps` defect correction steps with the product rule forward
    operator follow the first solve; they stop once the relative defect
    drops below `refine_tol`.
    """

    method: str = "substitution"
    smooth: bool = False
    kernel_rule: str = "trapezoid"
    sub_nodes: int = 8
    quad_order: int = 32
    quad_tol: float = 1e-10
    max_quad_order: int = 1024
    neumann_tol: float = 1e-12
    neumann_max_iter: int = 10000
    divergence_window: int = 50
    pin_endpoint: bool = True
    endpoint_correction: bool = True
    refine_steps: int = 0
    refine_tol: float = 1e-12

    def __post_init__(self):
        if self.method not in SECOND_KIND_METHODS:
            raise ValueError(f"unknown method '{self.method}', expected one of {SECOND_KIND_METHODS}")
        if self.kernel_rule not in KERNEL_RULES:
            raise ValueError(f"unknown kernel rule '{self.kernel_rule}', expected one of {KERNEL_RULES}")
        if self.refine_steps < 0:
            raise ValueError(f"refine_steps must be non-negative, got {self.refine_steps}")

    @classmethod
    def from_payload(cls, payload: dict):
        return cls(
            method=payload.get("method", "substitution"),
            smooth=bool(payload.get("smooth", False)),
            kernel_rule=payload.get("kernel_rule", "trapezoid"),
            sub_nodes=int(payload.get("sub_nodes", 8)),
            quad_order=int(payload.get("quad_order", 32)),
            quad_tol=float(payload.get("quad_tol", 1e-10)),
            max_quad_order=int(payload.get("max_quad_order", 1024)),
            neumann_tol=float(payload.get("neumann_tol", 1e-12)),
            neumann_max_iter=int(payload.get("neumann_max_iter", 10000)),
            divergence_window=int(payload.get("divergence_window", 50)),
            pin_endpoint=bool(payload.get("pin_endpoint", True)),
            endpoint_correction=bool(payload.get("endpoint_correction", True)),
            refine_steps=int(payload.get("refine_steps", 0)),
            refine_tol=float(payload.get("refine_tol", 1e-12)),
        )


class AbelSolver:
    """
    Inverts one generalized Abel operator on a fixed grid.

    The second kind system only depends on kernel and grid, so it is built
    once by `prepare` and reused for every right hand side.
    """

    def __init__(self, spec: AbelKernelSpec, grid: Grid1D, options: AbelSolveOptions = None) -> None:
        """
        Parameters
        ----------
            spec : AbelKernelSpec
                Kernel of the forward equation.

            grid : Grid1D
                Uniform grid on [a, b] carrying data and solution.

            options : AbelSolveOptions
                Solver options, defaults if omitted.
        """

        self.spec = spec
        self.grid = grid
        self.options = options if options is not None else AbelSolveOptions()
        self._mirrored = spec.j == 1
        self._work = spec.reflected(grid.lo, grid.hi) if self._mirrored else spec
        self._coeffs = leibniz_coeffs(self._work.alpha, 0, self._work.m_int)
        self._reduced_kernel_dp = reduced_kernel(self._work)[1]
        self._diagonal = None
        self._system = None
        self._forward_matrix = None

        needed = 2 * (spec.m_int + 1) + 3
        if grid.count < needed:
            raise ValueError(f"grid with {grid.count} samples is too coarse, need at least {needed}")

    @property
    def prepared(self) -> bool:
        return self._system is not None

    def _quad_tol(self) -> float:
        if self._work.kernel_dp is not None:
            return self.options.quad_tol
        return max(self.options.quad_tol, 10.0 * finite_difference_noise(self._work.m_int + 1))

    def _diagonal_values(self, r: np.ndarray) -> np.ndarray:
        values = self._coeffs[0] * self._work.evaluate(r, r)
        if self._work.beta > 0:
            values = values * np.pi / np.sin(np.pi * self._work.beta)
        return values

    def _second_kind_kernel(self, r: np.ndarray, omega: np.ndarray) -> np.ndarray:
        """
        Kernel of the second kind equation for flat arrays of pairs (r, w), w <= r.
        """
        if self._work.beta == 0.0:
            values = self._reduced_kernel_dp(r, omega)
        else:

            def integrand(p, w, t):
                return t * self._reduced_kernel_dp(p, w)

            values = jacobi_average(
                integrand,
                r,
                omega,
                self._work.beta,
                self.options.quad_order,
                self._quad_tol(),
                self.options.max_quad_order,
            )
        return values

    def _evaluate_pairs(self, r: np.ndarray, omega: np.ndarray) -> np.ndarray:
        values = np.empty(r.size)
        for start in range(0, r.size, PAIR_CHUNK):
            stop = start + PAIR_CHUNK
            values[start:stop] = self._second_kind_kernel(r[start:stop], omega[start:stop])
        return values

    def prepare(self) -> "AbelSolver":
        """
        Build the discretised second kind system.

        Raises
        ------
        KernelValidationError
            If the diagonal of the reduced kernel vanishes on the grid.

        QuadratureError
            If L_beta cannot be evaluated to tolerance.

        """

        started = time.perf_counter()
        x = self.grid.samples()
        n = self.grid.count
        with np.errstate(all="ignore"):
            diagonal = self._diagonal_values(x)
        scale = np.max(np.abs(diagonal)) if np.all(np.isfinite(diagonal)) else 0.0
        bad = np.flatnonzero(~np.isfinite(diagonal) | (np.abs(diagonal) <= 1e-10 * scale))
        if not scale > 0 or bad.size:
            report = ValidationReport()
            for index in bad[:10]:
                report.add_failure("diagonal", x[index], x[index], "reduced kernel vanishes on the diagonal")
            raise KernelValidationError(f"kernel {self.spec.name} vanishes on the diagonal", report)

        if self.options.kernel_rule == "trapezoid":
            rows, cols = np.tril_indices(n)
            kernel = np.zeros((n, n))
            kernel[rows, cols] = self._evaluate_pairs(x[rows], x[cols]) / diagonal[rows]
            system = np.eye(n) + trapezoid_weights(self.grid, 0) * kernel
        else:
            system = np.eye(n) + self._product_weights(x, diagonal)

        if not np.all(np.isfinite(system)):
            raise KernelValidationError(f"second kind kernel of {self.spec.name} is not finite")
        self._diagonal = diagonal
        self._system = system
        logging.debug(
            "prepared Abel solver for kernel %s on %d samples in %.3f s",
            self.spec.name,
            n,
            time.perf_counter() - started,
        )
        return self

    def _product_weights(self, x: np.ndarray, diagonal: np.ndarray) -> np.ndarray:
        # kernel integrated with Gauss-Legendre nodes per cell against hat functions
        n = self.grid.count
        h = self.grid.spacing
        tau, w_cell = gauss_legendre_unit(self.options.sub_nodes)
        weights = np.zeros((n, n))
        rows, cells = np.tril_indices(n, -1)
        r = np.repeat(x[rows], tau.size)
        omega = (x[cells][:, None] + h * tau[None, :]).reshape(-1)
        values = self._evaluate_pairs(r, omega).reshape(rows.size, tau.size)
        values = values * (h * w_cell) / diagonal[rows][:, None]
        weights[rows, cells] += values @ (1.0 - tau)
        weights[rows, cells + 1] += values @ tau
        return weights

    def _forward(self) -> np.ndarray:
        if self._forward_matrix is None:
            self._forward_matrix = forward_matrix(self._work, self.grid)
        return self._forward_matrix

    def _invert(self, work: np.ndarray) -> np.ndarray:
        m_int = self._work.m_int
        beta = self._work.beta
        smooth = self.options.smooth
        offsets = self.grid.samples() - self.grid.lo
        coefficient = 0.0
        if beta > 0 and self.options.endpoint_correction:
            # g ~ c (p - a)^(alpha + 1) near a
            exponent = self._work.alpha + 1.0
            coefficient = endpoint_coefficient(work, exponent, self.grid)
            work = work - coefficient * offsets ** exponent
        reduced = differentiate_m(work, m_int, self.grid, smooth) if m_int > 0 else work
        if beta > 0:
            reduced = fractional_integrate(reduced, beta, 0, self.grid)
            if coefficient != 0.0:
                falling = float(np.prod(exponent - np.arange(m_int)))
                reduced = reduced + coefficient * falling * fractional_power(exponent - m_int, beta, offsets)
        rhs = differentiate_m(reduced, 1, self.grid, smooth) / self._diagonal
        f = solve_second_kind_system(
            self._system,
            rhs,
            0,
            self.options.method,
            self.options.neumann_tol,
            self.options.neumann_max_iter,
            self.options.divergence_window,
        )
        if self.options.pin_endpoint:
            f[0] = 2.0 * f[1] - f[2]
        return f

    def _defect(self, work: np.ndarray, f: np.ndarray) -> np.ndarray:
        defect = work - self._forward() @ f
        # the forward row at p = a is empty
        defect[0] = 0.0
        return defect

    def _refine(self, work: np.ndarray, f: np.ndarray) -> np.ndarray:
        scale = max(float(np.linalg.norm(work)), np.finfo(float).tiny)
        defect = self._defect(work, f)
        best, best_norm = f, float(np.linalg.norm(defect))
        initial = best_norm
        steps = 0
        while steps < self.options.refine_steps and best_norm > self.options.refine_tol * scale:
            f = f + self._invert(defect)
            defect = self._defect(work, f)
            steps += 1
            norm = float(np.linalg.norm(defect))
            if not np.isfinite(norm):
                break
            if norm < best_norm:
                best, best_norm = f, norm
        logging.debug(
            "defect correction of kernel %s: %d steps, relative defect %.3e -> %.3e",
            self.spec.name,
            steps,
            initial / scale,
            best_norm / scale,
        )
        return best

    def _solve_real(self, g: np.ndarray) -> np.ndarray:
        work = g[::-1] if self._mirrored else g
        f = self._invert(work)
        if self.options.refine_steps > 0:
            f = self._refine(work, f)
        return f[::-1] if self._mirrored else f

    def solve(self, g: np.ndarray) -> np.ndarray:
        """
        Recover f from samples of g.

        Parameters
        ----------
            g : ndarray
                Data on the grid, real or complex.

        Returns
        -------
        Samples of f on the grid, complex if g is complex.

        """

        g = np.asarray(g)
        if g.shape != (self.grid.count,):
            raise ValueError(f"data must have {self.grid.count} samples, got shape {g.shape}")
        if not np.all(np.isfinite(g)):
            raise ValueError("data must be finite")
        if not self.prepared:
            self.prepare()
        if np.iscomplexobj(g):
            return self._solve_real(g.real.copy()) + 1j * self._solve_real(g.imag.copy())
        return self._solve_real(g.astype(float))


def abel_solve(spec: AbelKernelSpec, g: np.ndarray, grid: Grid1D, options: AbelSolveOptions = None) -> np.ndarray:
    """
    Invert g(p) = int_{B_j(p)} ((-1)^j (p - w))^alpha K(p, w) f(w) dw.

    Parameters
    ----------
        spec : AbelKernelSpec
            Kernel satisfying the solvability conditions.

        g : ndarray
            Data on the grid.

        grid : Grid1D
            Uniform grid on [a, b].

        options : AbelSolveOptions
            Solver options.

    Returns
    -------
    Samples of f on the grid.

    """

    return AbelSolver(spec, grid, options).prepare().solve(g)


def regularized_abel_solve(
    spec: AbelKernelSpec,
    g: np.ndarray,
    grid: Grid1D,
    regularization: float = 1e-2,
    sub_nodes: int = 8,
) -> np.ndarray:
    """
    Tikhonov regularized solution of the first kind Abel equation.

    The equation is discretised by kernel product integration of the
    piecewise linear f and solved through the singular value decomposition
    of the matrix, damping singular values below `regularization` times
    the largest one. Unlike the second kind reduction this stays bounded
    for strongly oscillating kernels.

    Parameters
    ----------
        spec : AbelKernelSpec
            Kernel of the forward equation.

        g : ndarray
            Data on the grid, real or complex.

        grid : Grid1D
            Uniform grid on [a, b].

        regularization : float
            Relative Tikhonov parameter, > 0.

        sub_nodes : int
            Gauss nodes per cell of the kernel quadrature.

    Returns
    -------
    Samples of f on the grid, complex if g is complex.

    """

    if not regularization > 0:
        raise ValueError(f"regularization must be positive, got {regularization}")
    g = np.asarray(g)
    if g.shape != (grid.count,):
        raise ValueError(f"data must have {grid.count} samples, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise ValueError("data must be finite")

    mirrored = spec.j == 1
    work = spec.reflected(grid.lo, grid.hi) if mirrored else spec
    data = g[::-1] if mirrored else g
    matrix = kernel_product_weights(work.evaluate, grid, work.alpha, sub_nodes)
    if not np.all(np.isfinite(matrix)):
        raise KernelValidationError(f"kernel {spec.name} is not finite on the grid")

    left, singular, right = np.linalg.svd(matrix)
    if not singular[0] > 0:
        raise KernelValidationError(f"kernel {spec.name} vanishes on the grid")
    damping = (regularization * singular[0]) ** 2
    f = right.T @ (singular / (singular ** 2 + damping) * (left.T @ data))
    return f[::-1] if mirrored else f
