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
This file contains the Fourier inversion of the 2-D transforms, the
profile inversions of the n-D and spherical means transforms and the
export of sampled kernels.

The data are transformed along y1; every frequency then carries an Abel
equation in p that is inverted independently, and the profiles are
transformed back and resampled onto the image grid.

"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
import pandas as pd
from scipy.interpolate import RegularGridInterpolator

from urt_tomo.urt_abel.abel_solver import AbelSolveOptions, AbelSolver, abel_solve, regularized_abel_solve
from urt_tomo.urt_abel.kernel_spec import AbelKernelSpec
from urt_tomo.urt_model.errors import NumericalError
from urt_tomo.urt_model.types import Grid1D, Image, ImageGrid, Sinogram
from urt_tomo.urt_spectral.families import KernelFamily
from urt_tomo.urt_spectral.kernels import (
    ellipse_kernel_spec,
    spherical_means_lambda,
    spherical_means_profile_spec,
)

__all__ = [
    "SupportBand",
    "SpectralOptions",
    "SpectralInversion",
    "row_spectrum",
    "invert_R2d",
    "invert_abel_nd_profile",
    "invert_spherical_means_profile",
    "dump_kernel",
]

MIN_BAND_SAMPLES = 8
SPECTRAL_SOLVERS = ("regularized", "volterra")


@dataclass
class SupportBand(object):
    """
    Dataclass for the band a <= x2 <= b assumed to contain the support.
    """

    a: float = 1.0
    b: float = 2.0

    def __post_init__(self):
        if not 0.0 < self.a < self.b:
            raise ValueError(f"support band needs 0 < a < b, got [{self.a}, {self.b}]")

    @classmethod
    def from_payload(cls, payload: dict):
        return cls(a=float(payload.get("band_a", 1.0)), b=float(payload.get("band_b", 2.0)))


@dataclass
class SpectralOptions(object):
    """
    Dataclass for the spectral inversion.

    Parameters
    ----------
        cutoff : float
            Fraction of the Nyquist frequency above which spectra are set
            to zero.

        growth_limit : float
            A frequency is discarded if its profile exceeds growth_limit
            times the largest value of the zero frequency profile; 2 bounds
            the spectra of non-negative images.

        workers : int
            Number of threads solving frequencies.

        solver : str
            "regularized" solves every frequency as a Tikhonov damped first
            kind equation, "volterra" uses the second kind reduction, which
            is exact for noise-free data but unstable for large xi sqrt(s p).

        regularization : float
            Relative Tikhonov parameter of the regularized solver.

        abel : AbelSolveOptions
            Options of the per-frequency Abel solver; the regularized solver
            only uses `sub_nodes`.
    """

    cutoff: float = 0.8
    growth_limit: float = 2.0
    workers: int = 1
    solver: str = "regularized"
    regularization: float = 1e-2
    abel: AbelSolveOptions = field(default_factory=lambda: AbelSolveOptions(smooth=True, kernel_rule="product"))

    def __post_init__(self):
        if not 0.0 < self.cutoff <= 1.0:
            raise ValueError(f"cutoff must lie in (0, 1], got {self.cutoff}")
        if not self.growth_limit > 0:
            raise ValueError(f"growth limit must be positive, got {self.growth_limit}")
        if self.solver not in SPECTRAL_SOLVERS:
            raise ValueError(f"unknown spectral solver '{self.solver}', expected one of {SPECTRAL_SOLVERS}")
        if not self.regularization > 0:
            raise ValueError(f"regularization must be positive, got {self.regularization}")

    @classmethod
    def from_payload(cls, payload: dict):
        abel = dict(payload.get("abel", {}))
        abel.setdefault("smooth", payload.get("smooth", True))
        abel.setdefault("kernel_rule", "product")
        return cls(
            cutoff=float(payload.get("cutoff", 0.8)),
            growth_limit=float(payload.get("growth_limit", 2.0)),
            workers=int(payload.get("workers", 1)),
            solver=payload.get("solver", "regularized"),
            regularization=float(payload.get("regularization", 1e-2)),
            abel=AbelSolveOptions.from_payload(abel),
        )


@dataclass
class SpectralInversion(object):
    """
    Result of a spectral inversion.
    """

    image: Image
    failed_frequencies: List[float] = field(default_factory=list)
    solved_frequencies: int = 0


def row_spectrum(values: np.ndarray, axis_samples: np.ndarray, spacing: float, xi: np.ndarray) -> np.ndarray:
    """
    Quadrature of int v(y) exp(-i xi y) dy along the last axis for
    arbitrary frequencies.
    """
    phase = np.exp(-1j * np.outer(axis_samples, xi))
    return spacing * (np.asarray(values) @ phase)


def _band_grid(sino: Sinogram, band: SupportBand):
    p = sino.p_axis.samples()
    tol = 1e-9 * max(1.0, abs(band.b))
    if band.a < p[0] - tol or band.b > p[-1] + tol:
        raise ValueError(f"support band [{band.a}, {band.b}] exceeds the sampled p range [{p[0]}, {p[-1]}]")
    selected = (p >= band.a - tol) & (p <= band.b + tol)
    if selected.sum() < MIN_BAND_SAMPLES:
        raise ValueError(f"support band holds only {selected.sum()} p samples, need {MIN_BAND_SAMPLES}")
    p_band = p[selected]
    return selected, Grid1D(p_band[0], p_band[-1], p_band.size)


def invert_R2d(
    sino: Sinogram,
    band: SupportBand,
    opts: SpectralOptions = None,
    image_grid: Optional[ImageGrid] = None,
) -> SpectralInversion:
    """
    Invert one-sided 2-D data of an image supported in the band a <= x2 <= b.

    Parameters
    ----------
        sino : Sinogram
            Data on the (p, y1) lattice.

        band : SupportBand
            Band containing the support; it is snapped to p samples.

        opts : SpectralOptions
            Options of the inversion.

        image_grid : ImageGrid
            Grid of the result; derived from the y1 axis if omitted.

    Returns
    -------
    SpectralInversion with the image and the frequencies that were
    discarded because their Abel solve failed or grew beyond the limit.

    """

    opts = opts if opts is not None else SpectralOptions()
    started = time.perf_counter()
    selected, grid = _band_grid(sino, band)
    if image_grid is None:
        image_grid = ImageGrid((sino.y_axis.count + 1) // 2)

    dy = sino.y_axis.spacing
    y = sino.y_axis.samples()
    spectrum = np.fft.rfft(sino.values[selected, :], axis=1)
    xi = 2.0 * np.pi * np.fft.rfftfreq(sino.y_axis.count, d=dy)
    active = np.flatnonzero(xi <= opts.cutoff * np.pi / dy)
    solution = np.zeros(spectrum.shape, dtype=complex)

    def solve(k):
        spec = ellipse_kernel_spec(sino.j, sino.s, float(xi[k]))
        try:
            if opts.solver == "regularized":
                profile = regularized_abel_solve(
                    spec, spectrum[:, k], grid, opts.regularization, opts.abel.sub_nodes
                )
            else:
                profile = AbelSolver(spec, grid, opts.abel).solve(spectrum[:, k])
        except (NumericalError, ValueError, FloatingPointError, np.linalg.LinAlgError) as err:
            logging.warning("frequency %g failed: %s", xi[k], err)
            return None
        return profile if np.all(np.isfinite(profile)) else None

    failed = []
    base = solve(active[0]) if active.size else None
    if base is None:
        raise NumericalError("the zero frequency profile could not be recovered")
    solution[:, active[0]] = base
    limit = opts.growth_limit * max(np.max(np.abs(base)), np.finfo(float).tiny)

    rest = active[1:]
    if opts.workers > 1:
        with ThreadPoolExecutor(max_workers=opts.workers) as executor:
            profiles = list(executor.map(solve, rest))
    else:
        profiles = [solve(k) for k in rest]
    for k, profile in zip(rest, profiles):
        if profile is None or np.max(np.abs(profile)) > limit:
            failed.append(float(xi[k]))
            continue
        solution[:, k] = profile

    if failed:
        logging.warning("discarded %d of %d frequencies", len(failed), active.size)
    profiles_xy = np.fft.irfft(solution, n=sino.y_axis.count, axis=1)

    interpolator = RegularGridInterpolator(
        (grid.samples(), y), profiles_xy, bounds_error=False, fill_value=0.0
    )
    x1 = image_grid.coords()
    x2 = image_grid.row_x2()
    matrix = np.zeros((image_grid.m, image_grid.m))
    rows = np.flatnonzero((x2 >= grid.lo) & (x2 <= grid.hi))
    if rows.size:
        points = np.stack(np.meshgrid(x2[rows], x1, indexing="ij"), axis=-1)
        matrix[rows, :] = interpolator(points)
    logging.info(
        "spectral inversion solved %d frequencies in %.1f s",
        active.size - len(failed),
        time.perf_counter() - started,
    )
    return SpectralInversion(Image.from_matrix(image_grid, matrix), failed, int(active.size - len(failed)))


def invert_abel_nd_profile(
    sino_hat: np.ndarray,
    family: KernelFamily,
    band: SupportBand,
    grid: Optional[Grid1D] = None,
    options: Optional[AbelSolveOptions] = None,
) -> np.ndarray:
    """
    Recover one frequency profile of an n-D or generalized curve transform.

    Parameters
    ----------
        sino_hat : ndarray
            Transformed data at a fixed frequency, sampled on `grid`.

        family : KernelFamily
            Kernel family; its params carry xi and n.

        band : SupportBand
            Support band; also the grid if `grid` is omitted.

    Returns
    -------
    Samples of the frequency profile on the grid.

    """

    sino_hat = np.asarray(sino_hat)
    if grid is None:
        grid = Grid1D(band.a, band.b, sino_hat.size)
    return abel_solve(family.to_kernel_spec(), sino_hat, grid, options)


def invert_spherical_means_profile(
    profile: np.ndarray, l: int, n: int, grid: Grid1D, options: Optional[AbelSolveOptions] = None
) -> np.ndarray:
    """
    Recover the l-th harmonic profile f_l(r) from its spherical means profile.

    The means profile is rescaled by s^(2n - 4) / (2^(n - 2) lambda_n) and
    inverted with the kernel r^gamma K_l(s, r).
    """
    s_val = grid.samples()
    if s_val[0] <= 0:
        raise ValueError("spherical means radii must be positive")
    scaled = s_val ** (2 * n - 4) / (2.0 ** (n - 2) * spherical_means_lambda(l, n)) * np.asarray(profile)
    return abel_solve(spherical_means_profile_spec(l, n), scaled, grid, options)


def dump_kernel(spec: AbelKernelSpec, grid: Grid1D, path: str) -> pd.DataFrame:
    """
    Write the kernel values on the triangle T_j of a grid to a CSV file.
    """
    x = grid.samples()
    rows, cols = np.tril_indices(grid.count)
    if spec.j == 1:
        rows, cols = cols, rows
    table = pd.DataFrame({"p": x[rows], "omega": x[cols], "kernel": spec.evaluate(x[rows], x[cols])})
    table.to_csv(path, index=False, float_format="%.17g")
    logging.info("wrote %d kernel samples to %s", len(table), path)
    return table
