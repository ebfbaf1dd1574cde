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
Unit test for the second kind Volterra solver.

"""

import numpy as np
import pytest
from pytest import approx

from urt_tomo.urt_abel.kernel_spec import TriangularKernelMatrix
from urt_tomo.urt_abel.volterra import second_kind_solve, trapezoid_weights
from urt_tomo.urt_model.errors import NeumannDivergenceError
from urt_tomo.urt_model.rng import STREAM_TEST, make_generator
from urt_tomo.urt_model.types import Grid1D


def test_trapezoid_weights():
    """
    Test the trapezoidal weights of both orientations.
    """
    grid = Grid1D(0.0, 1.0, 5)
    weights = trapezoid_weights(grid, 0)
    assert weights[0] == approx(np.zeros(5))
    assert weights[4] == approx([0.125, 0.25, 0.25, 0.25, 0.125])
    assert weights.sum(axis=1) == approx(grid.samples())
    mirrored = trapezoid_weights(grid, 1)
    assert mirrored.sum(axis=1) == approx(1.0 - grid.samples())


@pytest.mark.parametrize("j", [0, 1])
@pytest.mark.parametrize("method", ["substitution", "neumann"])
def test_second_kind_dense(method, j):
    """
    Test both methods against a dense direct solve.
    """
    # arrange
    rng = make_generator(11, STREAM_TEST)
    grid = Grid1D(0.0, 1.0, 5)
    values = rng.uniform(-0.1, 0.1, size=(5, 5))
    values = np.tril(values) if j == 0 else np.triu(values)
    kernel = TriangularKernelMatrix(grid, values, j)
    h = rng.standard_normal(5)
    expected = np.linalg.solve(np.eye(5) + trapezoid_weights(grid, j) * values, h)
    # act
    f = second_kind_solve(kernel, h, method=method, tol=1e-15)
    # assert
    assert f == approx(expected, abs=1e-12), "wrong result"


def test_second_kind_exponential():
    """
    Test f + int_0^r f = 1 with solution exp(-r).
    """
    grid = Grid1D(0.0, 1.0, 513)
    kernel = TriangularKernelMatrix.from_function(grid, 0, lambda r, w: np.ones(np.broadcast(r, w).shape))
    f = second_kind_solve(kernel, np.ones(513))
    assert f == approx(np.exp(-grid.samples()), abs=1e-5)


def test_neumann_divergence():
    """
    Test that a diverging Neumann series is reported.
    """
    grid = Grid1D(0.0, 1.0, 5)
    kernel = TriangularKernelMatrix.from_function(grid, 0, lambda r, w: np.full(np.broadcast(r, w).shape, -50.0))
    with pytest.raises(NeumannDivergenceError):
        second_kind_solve(kernel, np.ones(5), method="neumann")
    assert np.all(np.isfinite(second_kind_solve(kernel, np.ones(5), method="substitution")))


def test_second_kind_unknown_method():
    """
    Test rejection of unknown methods.
    """
    grid = Grid1D(0.0, 1.0, 5)
    kernel = TriangularKernelMatrix(grid, np.zeros((5, 5)), 0)
    with pytest.raises(ValueError):
        second_kind_solve(kernel, np.ones(5), method="gauss")
