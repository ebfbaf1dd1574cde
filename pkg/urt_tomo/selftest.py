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
This file contains the self test of the numerical invariants: operator
adjointness, the null space of the two-sided operators, the diagonal
identities of the kernels, the coefficient oracles, Abel round trips, the
solver contracts and the file format round trips.

"""

import logging
import os
import tempfile
from math import comb
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd
import scipy.sparse as sp
from scipy.integrate import quad

from urt_tomo.urt_abel.abel_solver import abel_solve
from urt_tomo.urt_abel.kernel_spec import AbelKernelSpec, leibniz_coeffs
from urt_tomo.urt_abel.quadrature import L_beta_eval, abel_forward_apply, c_beta_diag
from urt_tomo.urt_io.image_io import read_image_csv, write_image_csv
from urt_tomo.urt_io.operator_cache import read_operator_cache, write_operator_cache
from urt_tomo.urt_io.sinogram_io import read_sinogram_csv, write_sinogram_csv
from urt_tomo.urt_model.rng import STREAM_TEST, make_generator
from urt_tomo.urt_model.types import Grid1D, Image, ImageGrid, Sinogram, SparseOperator
from urt_tomo.urt_model.types import sparse_apply, sparse_apply_adjoint
from urt_tomo.urt_radon.curves import CurveSpec
from urt_tomo.urt_radon.forward_matrix import build_forward_matrix
from urt_tomo.urt_recon.cgls import cgls_tikhonov
from urt_tomo.urt_recon.recon_method import ReconConfig
from urt_tomo.urt_recon.total_variation import tv_gradient, tv_objective
from urt_tomo.urt_spectral.families import KernelFamily, build_kernel_family
from urt_tomo.urt_spectral.kernels import (
    alpha_n,
    gegenbauer,
    h_factor_2d,
    kernel_nd,
    spherical_means_kernel,
    sphere_area,
)

__all__ = ["REPORT_COLUMNS", "default_checks", "run_selftest", "format_report"]

REPORT_COLUMNS = ["check", "status", "value", "tolerance"]

# a check returns the measured deviation and the largest accepted one
CheckResult = Tuple[float, float]
Check = Callable[[], CheckResult]
AdjointFunction = Callable[[SparseOperator, np.ndarray], np.ndarray]


def _random_operator(rows: int, cols: int, seed: int, density: float = 0.2) -> SparseOperator:
    rng = make_generator(seed, STREAM_TEST)
    matrix = sp.random(rows, cols, density=density, format="csr", random_state=rng)
    return SparseOperator.from_scipy(matrix)


def _relative(estimate, truth) -> float:
    estimate = np.asarray(estimate, dtype=float)
    truth = np.asarray(truth, dtype=float)
    return float(np.max(np.abs(estimate - truth) / np.maximum(np.abs(truth), 1e-300)))


def check_adjoint(adjoint: AdjointFunction = sparse_apply_adjoint) -> CheckResult:
    """
    |<A x, y> - <x, A^T y>| relative to ||A x|| ||y|| for a random operator.
    """
    a = _random_operator(40, 30, seed=1)
    rng = make_generator(2, STREAM_TEST)
    x = rng.standard_normal(a.cols)
    y = rng.standard_normal(a.rows)
    ax = sparse_apply(a, x)
    gap = abs(float(ax @ y) - float(x @ adjoint(a, y)))
    return gap / (np.linalg.norm(ax) * np.linalg.norm(y)), 1e-12


def _symmetry_images(grid: ImageGrid, count: int, seed: int):
    rng = make_generator(seed, STREAM_TEST)
    for _ in range(count):
        image = Image(grid, rng.uniform(0.0, 1.0, grid.size))
        reflected = image.reflect_x2().values
        yield image.values - reflected, image.values + reflected


def check_null_space(m: int = 17, count: int = 10) -> CheckResult:
    """
    ||E x_odd|| / (||E|| ||x_odd||) for images odd in x2 and both curve families.
    """
    grid = ImageGrid(m)
    worst = 0.0
    for j in (0, 1):
        operator = build_forward_matrix(CurveSpec(j=j), grid, two_sided=True)
        norm = operator.norm_estimate()
        for odd, _ in _symmetry_images(grid, count, seed=10 + j):
            worst = max(worst, float(np.linalg.norm(sparse_apply(operator, odd)) / (norm * np.linalg.norm(odd))))
    return worst, 1e-10


def check_even_images(m: int = 17, count: int = 10) -> CheckResult:
    """
    Relative gap between the one-sided data and half the two-sided data of
    images even in x2.
    """
    grid = ImageGrid(m)
    worst = 0.0
    for j in (0, 1):
        curve = CurveSpec(j=j)
        one_sided = build_forward_matrix(curve, grid, two_sided=False)
        two_sided = build_forward_matrix(curve, grid, two_sided=True)
        for _, even in _symmetry_images(grid, count, seed=20 + j):
            half = 0.5 * sparse_apply(two_sided, even)
            gap = np.linalg.norm(sparse_apply(one_sided, even) - half) / np.linalg.norm(half)
            worst = max(worst, float(gap))
    return worst, 1e-10


def check_diagonal_identities(samples: int = 8) -> CheckResult:
    """
    Largest relative deviation of the kernel diagonals from their closed forms.
    """
    rng = make_generator(30, STREAM_TEST)
    worst = 0.0
    for _ in range(samples):
        s = float(rng.uniform(0.5, 4.0))
        xi = float(rng.uniform(0.0, 5.0))
        p = rng.uniform(0.5, 10.0, 5)
        for j in (0, 1):
            worst = max(worst, _relative(h_factor_2d(j, s, xi, p, p), np.sqrt(s * p / 2.0)))
            for n in (3, 4, 5):
                alpha = (n - 3) / 2.0
                k1, k2, k3 = kernel_nd(j, s, xi, n, p, p)
                expected = 2.0 ** alpha * sphere_area(n - 2) * np.sqrt(s) * p ** (alpha + 1.0)
                worst = max(worst, _relative(k1 * k2 * k3, expected))
        for n in (2, 3, 4, 5):
            alpha = (n - 3) / 2.0
            gamma = (n - 2) / 2.0
            degree = int(rng.integers(0, 6))
            expected = 2.0 ** alpha * p ** (2 * alpha + 0.5) * gegenbauer(degree, gamma, 1.0)
            worst = max(worst, _relative(spherical_means_kernel(degree, n, p, p), expected))
        beta = float(rng.uniform(0.2, 0.8))
        spec = AbelKernelSpec(0, 1, beta, lambda x, w, c=xi: 1.0 + x * w + np.cos(c * (x - w)))
        r = rng.uniform(0.5, 2.0, 3)
        worst = max(worst, _relative(L_beta_eval(spec, r, r), c_beta_diag(spec, r)))
    return worst, 1e-8


def _central_difference(function, p: float, order: int, step: float) -> float:
    total = 0.0
    for i in range(order + 1):
        total += (-1.0) ** i * comb(order, i) * function(p + (order / 2.0 - i) * step)
    return total / step ** order


def check_leibniz_coeffs() -> CheckResult:
    """
    Leibniz expansion of the derivatives of ((-1)^j (p - w))^alpha exp(p)
    against Richardson extrapolated central differences, orders 1 to 3.
    """
    worst = 0.0
    for j in (0, 1):
        p, omega = (1.7, 0.4) if j == 0 else (0.4, 1.7)
        sign = (-1.0) ** j
        for alpha in (-0.5, 0.5, 1.5):

            def h_alpha(x, a=alpha, w=omega, sg=sign):
                return (sg * (x - w)) ** a * np.exp(x)

            d = sign * (p - omega)
            for order in (1, 2, 3):
                coeffs = leibniz_coeffs(alpha, j, order)
                expanded = sum(coeffs[i] * d ** (alpha - (order - i)) * np.exp(p) for i in range(order + 1))
                step = 0.02
                coarse = _central_difference(h_alpha, p, order, step)
                fine = _central_difference(h_alpha, p, order, step / 2.0)
                estimate = (4.0 * fine - coarse) / 3.0
                worst = max(worst, abs(estimate - expanded) / abs(expanded))
    return worst, 1e-5


def check_alpha_n() -> CheckResult:
    """
    alpha_n times the integral of sin^(n-3) over [0, pi] against the area of
    the unit sphere in R^(n-1), n = 3..7.
    """
    worst = 0.0
    for n in range(3, 8):
        integral, _ = quad(lambda phi, k=n - 3: np.sin(phi) ** k, 0.0, np.pi, epsabs=1e-14, epsrel=1e-14)
        worst = max(worst, abs(alpha_n(n) * integral - sphere_area(n - 2)) / sphere_area(n - 2))
    return worst, 1e-10


def check_abel_round_trip(count: int = 513) -> CheckResult:
    """
    Largest relative L2 error of solving forward applied data of a smooth
    profile, K = sqrt(p + w), all exponents and orientations.
    """
    grid = Grid1D(0.5, 1.5, count)
    x = grid.samples()
    f = 2.0 + np.sin(3.0 * x)
    worst = 0.0
    for alpha in (-0.5, 0.0, 0.5, 1.0, 1.5):
        for j in (0, 1):
            spec = build_kernel_family(KernelFamily("sqrt_sum", alpha, j))
            estimate = abel_solve(spec, abel_forward_apply(spec, f, grid), grid)
            worst = max(worst, float(np.linalg.norm(estimate - f) / np.linalg.norm(f)))
    return worst, 2e-2


def check_cgls_normal_equations(size: int = 49, lam: float = 0.1) -> CheckResult:
    """
    CGLS against a dense solve of the regularized normal equations.
    """
    a = _random_operator(size, size, seed=40)
    b = make_generator(41, STREAM_TEST).uniform(0.0, 1.0, size)
    dense = a.csr.toarray()
    expected = np.linalg.solve(dense.T @ dense + lam * np.eye(size), dense.T @ b)
    result = cgls_tikhonov(a, b, ReconConfig(lam=lam, max_iters=500, tol=1e-12))
    return float(np.linalg.norm(result.image.values - expected) / np.linalg.norm(expected)), 1e-8


def check_tv_gradient() -> CheckResult:
    """
    TV gradient against central differences of the objective.
    """
    a = _random_operator(30, 25, seed=50)
    rng = make_generator(51, STREAM_TEST)
    b = rng.uniform(0.0, 1.0, 30)
    x = rng.uniform(0.0, 1.0, 25)
    worst = 0.0
    for tv_norm in ("isotropic", "global"):
        cfg = ReconConfig(lam=0.5, beta_smooth=0.1, tv_norm=tv_norm)
        gradient = tv_gradient(a, b, x, cfg)
        for i in range(x.size):
            step = 1e-6 * max(1.0, abs(x[i]))
            plus, minus = x.copy(), x.copy()
            plus[i] += step
            minus[i] -= step
            estimate = (tv_objective(a, b, plus, cfg) - tv_objective(a, b, minus, cfg)) / (2.0 * step)
            worst = max(worst, abs(estimate - gradient[i]) / max(1.0, abs(gradient[i])))
    return worst, 1e-5


def check_io_round_trips() -> CheckResult:
    """
    Largest deviation after writing and reading image, sinogram and operator
    cache files.
    """
    rng = make_generator(60, STREAM_TEST)
    image = Image(ImageGrid(9), rng.uniform(0.0, 3.0, 81))
    sino = Sinogram(Grid1D(1.0, 5.0, 5), Grid1D(-9.0, 9.0, 17), rng.standard_normal(85), j=1, s=2.5)
    operator = _random_operator(12, 7, seed=61)
    with tempfile.TemporaryDirectory() as tmp_dir:
        write_image_csv(image, os.path.join(tmp_dir, "image.csv"))
        write_sinogram_csv(sino, os.path.join(tmp_dir, "sino.csv"))
        write_operator_cache(operator, os.path.join(tmp_dir, "operator.bin"))
        image_back = read_image_csv(os.path.join(tmp_dir, "image.csv"))
        sino_back = read_sinogram_csv(os.path.join(tmp_dir, "sino.csv"))
        operator_back = read_operator_cache(os.path.join(tmp_dir, "operator.bin"))
    deviations = [
        np.max(np.abs(image_back.values - image.values)),
        np.max(np.abs(sino_back.values - sino.values)),
        abs(sino_back.s - sino.s) + abs(sino_back.j - sino.j),
        np.max(np.abs(operator_back.csr.toarray() - operator.csr.toarray())),
    ]
    return float(max(deviations)), 0.0


def default_checks() -> Dict[str, Check]:
    """
    The checks of the self test in report order.
    """
    return {
        "adjoint": check_adjoint,
        "null_space": check_null_space,
        "even_images": check_even_images,
        "diagonal_identities": check_diagonal_identities,
        "leibniz_coeffs": check_leibniz_coeffs,
        "alpha_n": check_alpha_n,
        "abel_round_trip": check_abel_round_trip,
        "cgls_normal_equations": check_cgls_normal_equations,
        "tv_gradient": check_tv_gradient,
        "io_round_trips": check_io_round_trips,
    }


def run_selftest(checks: Optional[Dict[str, Check]] = None, names: Optional[List[str]] = None) -> pd.DataFrame:
    """
    Run the self test checks.

    Parameters
    ----------
        checks : dict
            Checks by name; replaces entries of the default checks with the
            same name and adds the others.

        names : List[str]
            Run only these checks, in this order.

    Returns
    -------
    Report with one row per check and the columns check, status, value and
    tolerance. The status is "pass", "fail" or "error" (the check raised).

    """

    registry = default_checks()
    if checks:
        registry.update(checks)
    if names is not None:
        unknown = [name for name in names if name not in registry]
        if unknown:
            raise LookupError(f"unknown self test checks {unknown}, expected some of {list(registry)}")
        registry = {name: registry[name] for name in names}
    rows = []
    for name, check in registry.items():
        try:
            value, tolerance = check()
        except Exception as e:  # pylint: disable=broad-except
            logging.error("check %s raised %s: %s", name, type(e).__name__, e)
            rows.append((name, "error", float("nan"), float("nan")))
            continue
        status = "pass" if np.isfinite(value) and value <= tolerance else "fail"
        logging.debug("check %s: %s (%.3e <= %.1e)", name, status, value, tolerance)
        rows.append((name, status, float(value), float(tolerance)))
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def format_report(report: pd.DataFrame) -> str:
    return report.to_string(index=False, float_format=lambda v: f"{v:.3e}")
