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
Unit test for the measurement simulation.

"""

import numpy as np
import pytest
from pytest import approx

from urt_tomo.urt_model.types import Image, ImageGrid, sparse_apply
from urt_tomo.urt_radon.curves import CurveSpec
from urt_tomo.urt_radon.forward_matrix import build_forward_matrix, default_sinogram_axes
from urt_tomo.urt_radon.simulation import NoiseSpec, forward_sinogram, perturb_matrix, simulate_data
from tests.urt_radon.conftest import get_upper_blob

GRID = ImageGrid(33)


@pytest.fixture(scope="module")
def operator():
    return build_forward_matrix(CurveSpec(j=0, s=2.0), GRID, two_sided=True)


def test_perturb_zero(operator):
    """
    Test that epsilon = 0 leaves the weights unchanged.
    """
    perturbed = perturb_matrix(operator, 0.0, 5)
    assert np.array_equal(perturbed.weights, operator.weights)


def test_perturb_bounds(operator):
    """
    Test the range, pattern and reproducibility of perturbed weights.
    """
    perturbed = perturb_matrix(operator, 0.1, 5)
    ratio = perturbed.weights / operator.weights
    assert np.all((ratio >= 0.9) & (ratio <= 1.1))
    assert np.array_equal(perturbed.col_indices, operator.col_indices)
    assert np.array_equal(perturbed.weights, perturb_matrix(operator, 0.1, 5).weights)
    assert not np.array_equal(perturbed.weights, perturb_matrix(operator, 0.1, 6).weights)


def test_perturb_invalid(operator):
    """
    Test rejection of epsilon outside [0, 1).
    """
    with pytest.raises(ValueError):
        perturb_matrix(operator, 1.0, 0)
    with pytest.raises(ValueError):
        NoiseSpec(gamma=-0.1)


def test_simulate_noise_free(operator):
    """
    Test that gamma = 0 gives exactly A x.
    """
    image = get_upper_blob(GRID)
    data = simulate_data(operator, image, NoiseSpec(gamma=0.0, epsilon=0.0, seed=1))
    assert np.array_equal(data, sparse_apply(operator, image.values))


def test_simulate_zero_image(operator):
    """
    Test that the zero image gives zero data at any noise level.
    """
    data = simulate_data(operator, Image.zeros(GRID), NoiseSpec(gamma=0.5, seed=1))
    assert np.all(data == 0.0)


def test_simulate_noise_level(operator):
    """
    Test the relative noise level.
    """
    image = get_upper_blob(GRID)
    clean = sparse_apply(operator, image.values)
    data = simulate_data(operator, image, NoiseSpec(gamma=0.05, seed=3))
    assert np.linalg.norm(data - clean) / np.linalg.norm(clean) == approx(0.05, rel=0.1)


def test_forward_sinogram(operator):
    """
    Test the sinogram layout of forward data.
    """
    image = get_upper_blob(GRID)
    sinogram = forward_sinogram(operator, image, default_sinogram_axes(GRID), 0, 2.0)
    assert sinogram.values.shape == (17, 65)
    assert sinogram.flat() == approx(sparse_apply(operator, image.values))
