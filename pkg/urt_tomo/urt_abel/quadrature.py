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
This file contains the quadrature rules of the Abel solvers: product
integration weights for weakly singular factors, the forward application
of an Abel operator, Riemann-Liouville fractional integration and the
Gauss-Jacobi evaluation of the reduced kernel L_beta.

"""

from functools import lru_cache
from typing import Callable, Tuple

import numpy as np
from scipy.special import beta as beta_fn
from scipy.special import roots_jacobi, roots_legendre

from urt_tomo.urt_abel.kernel_spec import AbelKernelSpec
from urt_tomo.urt_model.errors import QuadratureError
from urt_tomo.urt_model.types import Grid1D

__all__ = [
    "gauss_jacobi_rule",
    "gauss_legendre_unit",
    "moment_weights",
    "product_weights",
    "kernel_product_weights",
    "forward_matrix",
    "abel_forward_apply",
    "fractional_integrate",
    "fractional_power",
    "endpoint_coefficient",
    "jacobi_average",
    "L_beta_eval",
    "c_beta_diag",
]

FORWARD_RULES = ("moments", "kernel")


@lru_cache(maxsize=64)
def gauss_jacobi_rule(order: int, beta: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes t in (0, 1) and weights for int_0^1 phi(t) t^(-beta) (1 - t)^(beta - 1) dt.

    The weights sum to pi / sin(pi beta).
    """

    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    x, w = roots_jacobi(int(order), beta - 1.0, -beta)
    nodes = 0.5 * (1.0 + x)
    nodes.setflags(write=False)
    w.setflags(write=False)
    return nodes, w


@lru_cache(maxsize=32)
def gauss_legendre_unit(order: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = roots_legendre(int(order))
    nodes, weights = 0.5 * (1.0 + x), 0.5 * w
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


@lru_cache(maxsize=32)
def moment_weights(count: int, spacing: float, alpha: float) -> np.ndarray:
    """
    Product integration weights of int_a^{x_i} (x_i - w)^alpha phi(w) dw
    for a piecewise linear phi on a uniform grid.

    Parameters
    ----------
        count : int
            Number of grid samples.

        spacing : float
            Grid spacing h.

        alpha : float
            Exponent, alpha > -1.

    Returns
    -------
    Lower triangular (count x count) matrix W with int ~ W @ phi. The cell
    moments are exact, so the rule is exact for linear phi.

    """

    if not alpha > -1.0:
        raise ValueError(f"exponent alpha must exceed -1, got {alpha}")
    n = np.arange(1, count + 1, dtype=float)
    a1, a2 = alpha + 1.0, alpha + 2.0
    m0 = spacing ** a1 * (n ** a1 - (n - 1.0) ** a1) / a1
    m1 = spacing ** a2 * (n ** a2 - (n - 1.0) ** a2) / a2
    # cell n spans offsets [n - 1, n] from the diagonal; far node at n, near node at n - 1
    far = m0 * (1.0 - n) + m1 / spacing
    near = n * m0 - m1 / spacing

    offsets = np.subtract.outer(np.arange(count), np.arange(count))
    weights = np.zeros((count, count))
    lower = offsets >= 1
    weights[lower] += far[offsets[lower] - 1]
    inner = (offsets >= 0) & (np.arange(count)[None, :] >= 1)
    weights[inner] += near[offsets[inner]]
    weights.setflags(write=False)
    return weights


def product_weights(grid: Grid1D, alpha: float, j: int = 0) -> np.ndarray:
    """
    Dense triangular product integration matrix of the operator
    phi -> int_{B_j(p)} ((-1)^j (p - w))^alpha phi(w) dw on a grid.

    Orientation j = 1 integrates over [p, b] and is the index reversal of
    the j = 0 matrix.
    """
    if j not in (0, 1):
        raise ValueError(f"orientation j must be 0 or 1, got {j}")
    weights = moment_weights(grid.count, grid.spacing, float(alpha))
    return weights[::-1, ::-1].copy() if j == 1 else weights.copy()


def kernel_product_weights(
    kernel: Callable[[np.ndarray, np.ndarray], np.ndarray], grid: Grid1D, alpha: float, nodes: int = 8
) -> np.ndarray:
    """
    Product integration weights of int_a^{x_i} (x_i - w)^alpha K(x_i, w) phi(w) dw
    where only phi is interpolated linearly. The kernel is integrated with
    Gauss-Legendre nodes on every cell and Gauss-Jacobi nodes on the cell
    touching the diagonal, which keeps oscillating kernels resolved.
    """

    n = grid.count
    h = grid.spacing
    x = grid.samples()
    weights = np.zeros((n, n))

    tau, w_cell = gauss_legendre_unit(nodes)
    rows, cells = np.tril_indices(n, -2)
    if rows.size:
        p = x[rows][:, None]
        omega = x[cells][:, None] + h * tau[None, :]
        values = (p - omega) ** alpha * kernel(p, omega) * (h * w_cell)
        weights[rows, cells] += values @ (1.0 - tau)
        weights[rows, cells + 1] += values @ tau

    y, w_diag = roots_jacobi(int(nodes), 0.0, alpha)
    xs = 0.5 * (1.0 + y)
    w_diag = w_diag / 2.0 ** (alpha + 1.0)
    i = np.arange(1, n)
    p = x[i][:, None]
    values = h ** (alpha + 1.0) * kernel(p, p - h * xs[None, :]) * w_diag
    weights[i, i] += values @ (1.0 - xs)
    weights[i, i - 1] += values @ xs
    return weights


def forward_matrix(spec: AbelKernelSpec, grid: Grid1D, rule: str = "moments") -> np.ndarray:
    """
    Dense matrix of the discrete Abel operator for orientation j = 0.
    """

    if spec.j != 0:
        raise ValueError("forward_matrix expects orientation j = 0, reflect the problem first")
    if rule not in FORWARD_RULES:
        raise ValueError(f"unknown forward rule '{rule}', expected one of {FORWARD_RULES}")

    if rule == "kernel":
        matrix = kernel_product_weights(spec.evaluate, grid, spec.alpha)
    else:
        x = grid.samples()
        rows, cols = np.tril_indices(grid.count)
        kernel = np.zeros((grid.count, grid.count))
        kernel[rows, cols] = spec.evaluate(x[rows], x[cols])
        matrix = product_weights(grid, spec.alpha, 0) * kernel
    if not np.all(np.isfinite(matrix)):
        raise ValueError(f"kernel {spec.name} is not finite on the grid")
    return matrix


def abel_forward_apply(spec: AbelKernelSpec, f: np.ndarray, grid: Grid1D, rule: str = "moments") -> np.ndarray:
    """
    Evaluate g(p) = int_{B_j(p)} ((-1)^j (p - w))^alpha K(p, w) f(w) dw on the grid.

    Parameters
    ----------
        spec : AbelKernelSpec
            Kernel and exponent.

        f : ndarray
            Samples of f on the grid, real or complex.

        grid : Grid1D
            Uniform grid on [a, b].

        rule : str
            "moments" interpolates K f linearly with exact cell moments,
            "kernel" interpolates only f and integrates the kernel by
            Gauss rules on each cell.

    Returns
    -------
    Samples of g on the grid.

    """

    f = np.asarray(f)
    if f.shape != (grid.count,):
        raise ValueError(f"profile must have {grid.count} samples, got shape {f.shape}")
    if not np.all(np.isfinite(f)):
        raise ValueError("profile must be finite")
    if spec.j == 1:
        mirrored = spec.reflected(grid.lo, grid.hi)
        return abel_forward_apply(mirrored, f[::-1], grid, rule)[::-1]
    return forward_matrix(spec, grid, rule) @ f


def fractional_integrate(g: np.ndarray, beta: float, j: int, grid: Grid1D) -> np.ndarray:
    """
    Riemann-Liouville integral of order beta,
    int_{B_j(r)} g(p) ((-1)^j (r - p))^(beta - 1) dp, by product integration
    of the piecewise linear interpolant of g.
    """

    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must lie in (0, 1), got {beta}")
    g = np.asarray(g)
    if g.shape != (grid.count,):
        raise ValueError(f"profile must have {grid.count} samples, got shape {g.shape}")
    weights = moment_weights(grid.count, grid.spacing, beta - 1.0)
    if j == 1:
        return (weights @ g[::-1])[::-1]
    return weights @ g


def fractional_power(exponent: float, beta: float, offsets: np.ndarray) -> np.ndarray:
    """
    Exact Riemann-Liouville integral of order beta of t^exponent,
    B(exponent + 1, beta) t^(exponent + beta), at the offsets t = r - a.
    """
    if not exponent > -1.0:
        raise ValueError(f"exponent must exceed -1, got {exponent}")
    return beta_fn(exponent + 1.0, beta) * np.asarray(offsets, dtype=float) ** (exponent + beta)


def endpoint_coefficient(g: np.ndarray, exponent: float, grid: Grid1D) -> float:
    """
    Leading coefficient c of g(p) ~ c (p - a)^exponent at the left end of
    the grid, extrapolated quadratically from the samples 1, 2 and 3.
    """
    if grid.count < 4:
        raise ValueError(f"grid with {grid.count} samples is too coarse for the endpoint expansion")
    offsets = grid.spacing * np.arange(1.0, 4.0)
    ratios = np.asarray(g)[1:4] / offsets ** exponent
    return float(3.0 * ratios[0] - 3.0 * ratios[1] + ratios[2])


def jacobi_average(
    integrand: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray],
    r: np.ndarray,
    omega: np.ndarray,
    beta: float,
    order: int = 32,
    tol: float = 1e-10,
    max_order: int = 1024,
) -> np.ndarray:
    """
    Evaluate int_0^1 F(w + (r - w) t, w, t) t^(-beta) (1 - t)^(beta - 1) dt
    for arrays r, w with a Gauss-Jacobi rule whose order is doubled until
    two consecutive results agree to `tol` relative to max(1, |result|).

    Raises
    ------
    QuadratureError
        If the tolerance is not reached with `max_order` nodes.

    """

    r = np.atleast_1d(np.asarray(r, dtype=float))
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    r, omega = np.broadcast_arrays(r, omega)

    def evaluate(n):
        t, w = gauss_jacobi_rule(n, beta)
        p = omega[:, None] + (r - omega)[:, None] * t[None, :]
        return integrand(p, omega[:, None], t[None, :]) @ w

    n = int(order)
    current = evaluate(n)
    while True:
        if 2 * n > max_order:
            raise QuadratureError(
                f"Gauss-Jacobi quadrature did not reach tolerance {tol:g} with {max_order} nodes"
            )
        refined = evaluate(2 * n)
        scale = max(1.0, float(np.max(np.abs(refined), initial=0.0)))
        if np.max(np.abs(refined - current), initial=0.0) <= tol * scale:
            return refined
        current = refined
        n *= 2


def _check_triangle(j: int, r: np.ndarray, omega: np.ndarray) -> None:
    gap = (r - omega) if j == 0 else (omega - r)
    if np.any(gap < -1e-12 * np.maximum(1.0, np.abs(r))):
        raise ValueError(f"point outside the triangle T_{j}")


def L_beta_eval(
    spec: AbelKernelSpec, r, omega, order: int = 32, tol: float = 1e-10, max_order: int = 1024
):
    """
    Evaluate L_beta(r, w) = int_0^1 K(w + (r - w) t, w) t^(-beta) (1 - t)^(beta - 1) dt.

    Parameters
    ----------
        spec : AbelKernelSpec
            Kernel with beta in (0, 1).

        r, omega : float or ndarray
            Points of the triangle T_j.

    Returns
    -------
    Values of L_beta with the shape of the broadcast inputs.

    """

    if spec.beta <= 0.0:
        raise ValueError("L_beta is only defined for beta in (0, 1)")
    r_arr, o_arr = np.broadcast_arrays(np.asarray(r, dtype=float), np.asarray(omega, dtype=float))
    _check_triangle(spec.j, r_arr, o_arr)

    def integrand(p, w, t):
        return spec.evaluate(p, w)

    values = jacobi_average(integrand, r_arr.reshape(-1), o_arr.reshape(-1), spec.beta, order, tol, max_order)
    if r_arr.ndim == 0:
        return float(values[0])
    return values.reshape(r_arr.shape)


def c_beta_diag(spec: AbelKernelSpec, r):
    """
    Diagonal value L_beta(r, r) = pi K(r, r) / sin(pi beta).
    """

    if spec.beta <= 0.0:
        raise ValueError("c_beta is only defined for beta in (0, 1)")
    values = np.pi * spec.evaluate(r, r) / np.sin(np.pi * spec.beta)
    return float(values) if np.ndim(values) == 0 else values
