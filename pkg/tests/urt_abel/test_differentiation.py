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
Unit test for the numerical differentiation of profiles.

"""

import numpy as np
import pytest
from pytest import approx

from urt_tomo.urt_abel.differentiation import differentiate_m
from urt_tomo.urt_model.types import Grid1D


def test_differentiate_quadratic():
    """
    Test that the derivative of p^2 is 2p.
    """
    grid = Grid1D(0.0, 2.0, 41)
    p = grid.samples()
    derivative = differentiate_m(p ** 2, 1, grid)
    assert derivative[1:-1] == approx(2.0 * p[1:-1], abs=1e-8), "wrong result"


def test_differentiate_twice():
    """
    Test the second derivative of p^3.
    """
    grid = Grid1D(0.0, 1.0, 201)
    p = grid.samples()
    derivative = differentiate_m(p ** 3, 2, grid)
    assert derivative[2:-2] == approx(6.0 * p[2:-2], abs=1e-3)


def test_differentiate_smoothed():
    """
    Test that smoothing keeps quadratic profiles intact.
    """
    grid = Grid1D(-1.0, 1.0, 51)
    p = grid.samples()
    derivative = differentiate_m(3.0 * p ** 2 + p, 1, grid, smooth=True)
    assert derivative == approx(6.0 * p + 1.0, abs=1e-8)


def test_differentiate_complex():
    """
    Test complex profiles.
    """
    grid = Grid1D(0.0, 1.0, 21)
    p = grid.samples()
    derivative = differentiate_m(p ** 2 + 1j * p, 1, grid, smooth=True)
    assert derivative.real == approx(2.0 * p, abs=1e-8)
    assert derivative.imag == approx(np.ones(21), abs=1e-8)


def test_differentiate_invalid():
    """
    Test rejection of invalid orders and coarse grids.
    """
    grid = Grid1D(0.0, 1.0, 5)
    with pytest.raises(ValueError):
        differentiate_m(np.zeros(5), 0, grid)
    with pytest.raises(ValueError):
        differentiate_m(np.zeros(5), 2, grid)
