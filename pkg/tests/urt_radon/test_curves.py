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
Unit test for the integration curves.

"""

import numpy as np
import pytest
from pytest import approx

from urt_tomo.urt_radon.curves import CurveSpec, curve_length, curve_points, make_nu, samples_for_curve


def test_circle_length():
    """
    Test that the sampled half circle has length pi p.
    """
    curve = CurveSpec(kind="ellipse", j=0, s=1.0)
    points = curve_points(curve, 5.0, 0.0, 101)
    assert points[:, 2].sum() == approx(5.0 * np.pi, rel=1e-12)
    assert np.hypot(points[:, 0], points[:, 1]) == approx(np.full(101, 5.0))


def test_ellipse_apex():
    """
    Test that the apex of an ellipse lies at x2 = p.
    """
    curve = CurveSpec(kind="ellipse", j=0, s=2.0)
    points = curve_points(curve, 3.0, 1.5, 33)
    assert points[16, 0] == approx(1.5, abs=1e-12)
    assert points[16, 1] == approx(3.0)
    assert np.all(points[:, 1] > 0)
    assert (points[:, 0] - 1.5) ** 2 / 2.0 + points[:, 1] ** 2 == approx(np.full(33, 9.0))


def test_hyperbola_points():
    """
    Test that hyperbola samples satisfy x2^2 / p^2 - (x1 - y1)^2 / (s p^2) = 1.
    """
    curve = CurveSpec(kind="hyperbola", j=1, s=2.0, truncation=20.0)
    points = curve_points(curve, 4.0, -2.0, 64)
    x1 = points[:, 0] + 2.0
    assert points[:, 1] ** 2 / 16.0 - x1 ** 2 / 32.0 == approx(np.ones(64))
    assert np.max(np.abs(x1)) <= 20.0
    assert np.all(points[:, 1] >= 4.0)


def test_hyperbola_height_limit():
    """
    Test that a hyperbola is cut at the top of the image.
    """
    curve = CurveSpec(kind="hyperbola", j=1, s=2.0, truncation=100.0)
    points = curve_points(curve, 4.0, 0.0, 64, x2_max=10.0)
    assert np.max(points[:, 1]) <= 10.0


def test_generalized_matches_ellipse():
    """
    Test that the generalized curve with nu = sqrt(s) sqrt(p + w) is the ellipse.
    """
    ellipse = CurveSpec(kind="ellipse", j=0, s=2.0)
    generalized = CurveSpec(kind="generalized", j=0, q=1, family="ellipse", params={"s": 2.0})
    points = curve_points(generalized, 6.0, 0.0, 400)
    assert points[:, 0] ** 2 / 2.0 + points[:, 1] ** 2 == approx(np.full(800, 36.0))
    assert curve_length(generalized, 6.0) == approx(curve_length(ellipse, 6.0), rel=1e-3)


def test_named_families():
    """
    Test the shape functions on the diagonal.
    """
    p = np.array([1.0, 2.0])
    assert make_nu("ellipse", s=2.0)(p, p) == approx(np.sqrt(4.0 * p))
    assert make_nu("teardrop")(p, p) == approx(np.ones(2))
    assert make_nu("cst")(p, p) == approx(np.sqrt((p * p + 1.0) / p))
    with pytest.raises(ValueError):
        make_nu("parabola")


def test_curve_spec_validation():
    """
    Test rejection of inconsistent curve specs.
    """
    assert CurveSpec(j=1).kind == "hyperbola"
    assert CurveSpec.from_payload({"j": 0, "s": 3.0}).s == 3.0
    with pytest.raises(ValueError):
        CurveSpec(kind="hyperbola", j=0)
    with pytest.raises(ValueError):
        CurveSpec(kind="ellipse", s=0.0)
    with pytest.raises(ValueError):
        curve_points(CurveSpec(), 0.0, 0.0, 10)


def test_samples_for_curve():
    """
    Test the node count of about eight nodes per pixel.
    """
    curve = CurveSpec(kind="ellipse", j=0, s=1.0)
    assert samples_for_curve(curve, 10.0, 1.0) == int(np.ceil(8 * 10.0 * np.pi))
    assert samples_for_curve(curve, 0.1, 1.0) == 16
