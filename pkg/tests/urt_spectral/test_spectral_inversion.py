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
Unit test for the spectral inversions.

"""

import numpy as np
import pandas as pd
import pytest
from pytest import approx

from urt_tomo.urt_abel.abel_solver import AbelSolveOptions
from urt_tomo.urt_abel.quadrature import abel_forward_apply
from urt_tomo.urt_model.types import Grid1D, ImageGrid
from urt_tomo.urt_phantom.metrics import delta_error
from urt_tomo.urt_phantom.phantom import PhantomSpec, make_phantom
from urt_tomo.urt_radon.curves import CurveSpec
from urt_tomo.urt_radon.forward_matrix import build_forward_matrix, default_sinogram_axes
from urt_tomo.urt_radon.simulation import forward_sinogram
from urt_tomo.urt_spectral.families import KernelFamily
from urt_tomo.urt_spectral.inversion import (
    SpectralOptions,
    SupportBand,
    dump_kernel,
    invert_R2d,
    invert_abel_nd_profile,
    invert_spherical_means_profile,
    row_spectrum,
)
from urt_tomo.urt_spectral.kernels import ellipse_kernel_spec, spherical_means_lambda, spherical_means_profile_spec
from tests.urt_spectral.conftest import bump, bump_row_spectrum, get_phantom_bump, synthetic_sinogram

# narrow ellipses keep xi sqrt(s p) moderate over the bump spectrum
NARROW_S = 0.25


@pytest.fixture(scope="module")
def image_grid():
    return ImageGrid(65)


@pytest.fixture(scope="module")
def bump_sinogram(image_grid):
    return synthetic_sinogram(*default_sinogram_axes(image_grid), s=NARROW_S)


@pytest.fixture(scope="module")
def wide_bump_sinogram(image_grid):
    return synthetic_sinogram(*default_sinogram_axes(image_grid))


def relative_l2(estimate, truth) -> float:
    return float(np.linalg.norm(estimate - truth) / np.linalg.norm(truth))


@pytest.mark.parametrize("xi", [0.0, 0.15, 0.3])
def test_row_spectrum_solves_abel_equation(xi, image_grid):
    """
    Test that the y1 spectrum of the data is the 2-D Abel transform of the row spectrum.
    """
    # arrange
    grid = Grid1D(4.0, 32.0, 113)
    y_axis = default_sinogram_axes(image_grid)[1]
    sino = synthetic_sinogram(grid, y_axis)
    # act
    data = row_spectrum(sino.values, y_axis.samples(), y_axis.spacing, np.array([xi]))[:, 0]
    profile = bump_row_spectrum(xi, grid.samples())
    expected = abel_forward_apply(ellipse_kernel_spec(0, 2.0, xi), profile, grid, rule="kernel")
    # assert
    assert relative_l2(data, expected) <= 1e-2, "wrong result"


def test_invert_R2d_bump(image_grid, bump_sinogram):
    """
    Test the recovery of a smooth bump from one-sided ellipse data.
    """
    # arrange
    x1 = image_grid.coords()
    x2 = image_grid.row_x2()
    truth = bump(x1[None, :], x2[:, None])
    # act
    result = invert_R2d(bump_sinogram, SupportBand(4.0, 32.0), SpectralOptions(cutoff=0.3), image_grid)
    # assert
    estimate = result.image.as_matrix()
    assert estimate.shape == truth.shape
    assert relative_l2(estimate, truth) <= 0.1, "wrong result"
    assert result.solved_frequencies > 1
    assert np.all(estimate[x2 < 0, :] == 0.0)


def test_invert_R2d_regularized_keeps_frequencies(image_grid, wide_bump_sinogram):
    """
    Test that the regularized solver keeps frequencies the second kind reduction loses for s = 2.
    """
    # arrange
    band = SupportBand(4.0, 32.0)
    # act
    regularized = invert_R2d(wide_bump_sinogram, band, SpectralOptions(cutoff=0.3), image_grid)
    volterra = invert_R2d(wide_bump_sinogram, band, SpectralOptions(cutoff=0.3, solver="volterra"), image_grid)
    # assert
    assert regularized.solved_frequencies > volterra.solved_frequencies, "wrong result"
    assert np.all(np.isfinite(regularized.image.values))


def test_invert_R2d_operator_sinogram():
    """
    Test the smooth bump phantom with m = 129 on data of the assembled one-sided operator.
    """
    # arrange
    spec = PhantomSpec(kind="smooth_bump", m=129)
    truth = make_phantom(spec)
    axes = default_sinogram_axes(spec.grid)
    a = build_forward_matrix(CurveSpec(j=0, s=NARROW_S), spec.grid, axes, two_sided=False, workers=4)
    sino = forward_sinogram(a, truth, axes, 0, NARROW_S)
    # act
    result = invert_R2d(sino, SupportBand(8.0, 64.0), SpectralOptions(cutoff=0.3), spec.grid)
    # assert
    assert delta_error(result.image, truth) <= 0.1, "wrong result"


def spectral_delta(m: int) -> float:
    """
    Error of the spectral inversion of the smooth bump phantom on dense quadrature data.
    """
    spec = PhantomSpec(kind="smooth_bump", m=m)
    p_axis, y_axis = default_sinogram_axes(spec.grid)
    sino = synthetic_sinogram(p_axis, y_axis, NARROW_S, 8 * m, get_phantom_bump(m))
    result = invert_R2d(sino, SupportBand(m / 16.0, m / 2.0), SpectralOptions(cutoff=0.3), spec.grid)
    return delta_error(result.image, make_phantom(spec))


def test_invert_R2d_image_refinement():
    """
    Test that the smooth bump error stays below 0.1 and decreases from m = 129 to m = 257.
    """
    # act
    deltas = [spectral_delta(m) for m in (129, 257)]
    # assert
    assert deltas[0] <= 0.1, "wrong result"
    assert deltas[1] < deltas[0], f"errors do not decrease: {deltas}"


def test_invert_R2d_threads(image_grid, bump_sinogram):
    """
    Test that threaded frequency solves give the same image.
    """
    band = SupportBand(4.0, 32.0)
    serial = invert_R2d(bump_sinogram, band, SpectralOptions(cutoff=0.2), image_grid)
    threaded = invert_R2d(bump_sinogram, band, SpectralOptions(cutoff=0.2, workers=3), image_grid)
    assert threaded.image.values == approx(serial.image.values, abs=1e-12)
    assert threaded.failed_frequencies == serial.failed_frequencies


def test_invert_R2d_band_checks(bump_sinogram):
    """
    Test rejection of bands outside the sampled p range or with too few samples.
    """
    with pytest.raises(ValueError):
        invert_R2d(bump_sinogram, SupportBand(4.0, 40.0))
    with pytest.raises(ValueError):
        invert_R2d(bump_sinogram, SupportBand(4.0, 7.0))


def test_option_checks():
    """
    Test validation of bands and spectral options.
    """
    with pytest.raises(ValueError):
        SupportBand(2.0, 1.0)
    with pytest.raises(ValueError):
        SpectralOptions(cutoff=0.0)
    with pytest.raises(ValueError):
        SpectralOptions(growth_limit=-1.0)
    with pytest.raises(ValueError):
        SpectralOptions(solver="lsqr")
    with pytest.raises(ValueError):
        SpectralOptions(regularization=0.0)
    options = SpectralOptions.from_payload({"cutoff": 0.5, "abel": {"method": "neumann"}})
    assert options.cutoff == 0.5
    assert options.solver == "regularized"
    assert options.regularization == 1e-2
    assert options.abel.method == "neumann"
    assert options.abel.kernel_rule == "product"
    assert SpectralOptions.from_payload({"solver": "volterra", "regularization": 0.1}).solver == "volterra"
    assert SupportBand.from_payload({"band_a": 3, "band_b": 9}) == SupportBand(3.0, 9.0)


@pytest.mark.parametrize("j", [0, 1])
def test_invert_abel_nd_profile(j):
    """
    Test the profile inversion of the 3-D surface transform.
    """
    # arrange
    family = KernelFamily(family="surface_nd", j=j, params={"n": 3, "s": 2.0, "xi": 0.5})
    band = SupportBand(1.0, 2.0)
    grid = Grid1D(band.a, band.b, 257)
    truth = 2.0 + np.sin(3.0 * grid.samples())
    data = abel_forward_apply(family.to_kernel_spec(), truth, grid)
    # act
    profile = invert_abel_nd_profile(data, family, band)
    # assert
    assert relative_l2(profile, truth) <= 2e-2, "wrong result"


@pytest.mark.parametrize("n,l", [(3, 0), (3, 2), (4, 1)])
def test_invert_spherical_means_profile(n, l):
    """
    Test the harmonic profile inversion of the spherical means transform.
    """
    # arrange
    grid = Grid1D(1.0, 2.0, 257)
    s_val = grid.samples()
    truth = 2.0 + np.sin(3.0 * s_val)
    scaled = abel_forward_apply(spherical_means_profile_spec(l, n), truth, grid)
    means = scaled * 2.0 ** (n - 2) * spherical_means_lambda(l, n) / s_val ** (2 * n - 4)
    # act
    profile = invert_spherical_means_profile(means, l, n, grid, AbelSolveOptions())
    # assert
    assert relative_l2(profile, truth) <= 2e-2, "wrong result"


@pytest.mark.parametrize("j", [0, 1])
def test_dump_kernel(j, tmp_path):
    """
    Test the CSV export of sampled kernels.
    """
    # arrange
    grid = Grid1D(1.0, 3.0, 9)
    spec = ellipse_kernel_spec(j, 2.0, 0.5)
    path = tmp_path / "kernel.csv"
    # act
    dump_kernel(spec, grid, str(path))
    # assert
    table = pd.read_csv(path)
    assert list(table.columns) == ["p", "omega", "kernel"]
    assert len(table) == 45
    if j == 0:
        assert np.all(table["omega"] <= table["p"])
    else:
        assert np.all(table["omega"] >= table["p"])
    assert table["kernel"].to_numpy() == approx(spec.evaluate(table["p"].to_numpy(), table["omega"].to_numpy()))
