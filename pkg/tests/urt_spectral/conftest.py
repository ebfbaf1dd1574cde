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
Test resources for the spectral inversion tests.

"""

from typing import Callable, Tuple

import numpy as np

from urt_tomo.urt_model.types import Grid1D, Sinogram
from urt_tomo.urt_radon.curves import CurveSpec, curve_points

BUMP_CENTRE = (0.0, 18.0)
BUMP_RADIUS = 12.0


def bump(x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """
    Smooth bump (1 - r^2 / R^2)^4 around BUMP_CENTRE.
    """
    return get_bump(BUMP_CENTRE, BUMP_RADIUS, 4)(x1, x2)


def get_bump(centre: Tuple[float, float], radius: float, power: int) -> Callable:
    """
    Create the bump (1 - r^2 / radius^2)^power around a centre.
    """

    def profile(x1, x2):
        r2 = ((x1 - centre[0]) ** 2 + (x2 - centre[1]) ** 2) / radius ** 2
        return np.clip(1.0 - r2, 0.0, None) ** power

    return profile


def get_phantom_bump(m: int) -> Callable:
    """
    Continuous version of the default smooth_bump phantom of an m x m image.
    """
    return get_bump((0.0, m / 4.0), m / 6.0, 3)


def bump_row_spectrum(xi: float, x2: np.ndarray) -> np.ndarray:
    """
    int bump(x1, x2) exp(-i xi x1) dx1 by a fine trapezoid rule.
    """
    x1 = np.linspace(-BUMP_RADIUS, BUMP_RADIUS, 4001)
    dx = x1[1] - x1[0]
    values = bump(x1[None, :], np.asarray(x2)[:, None])
    return dx * (values @ np.exp(-1j * xi * x1))


def synthetic_sinogram(
    p_axis: Grid1D, y_axis: Grid1D, s: float = 2.0, samples: int = 1000, profile: Callable = bump
) -> Sinogram:
    """
    Upper half ellipse integrals of a profile by dense quadrature on every curve.
    """
    curve = CurveSpec(j=0, s=s)
    y = y_axis.samples()
    values = np.zeros((p_axis.count, y_axis.count))
    for i, p in enumerate(p_axis.samples()):
        points = curve_points(curve, float(p), 0.0, samples)
        x1 = points[:, 0][None, :] + y[:, None]
        values[i] = profile(x1, points[:, 1][None, :]) @ points[:, 2]
    return Sinogram(p_axis, y_axis, values, j=0, s=s)
