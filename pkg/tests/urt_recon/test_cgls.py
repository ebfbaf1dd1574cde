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
Unit test for the CGLS reconstruction.

"""

import numpy as np
import pytest
from pytest import approx

from urt_tomo.urt_model.types import ImageGrid, SparseOperator, sparse_apply, sparse_apply_adjoint
from urt_tomo.urt_phantom.metrics import reflection_correlation
from urt_tomo.urt_phantom.phantom import PhantomSpec, make_phantom
from urt_tomo.urt_radon.curves import CurveSpec
from urt_tomo.urt_radon.forward_matrix import build_forward_matrix
from urt_tomo.urt_recon.cgls import CglsMethod, cgls_tikhonov
from urt_tomo.urt_recon.recon_method import ReconConfig, ReconProblem
from tests.urt_recon.conftest import get_random_operator, get_random_vector


def test_identity_without_regularization():
    """
    Test that CGLS solves x = b at once.
    """
    # arrange
    a = SparseOperator.identity(9)
    b = np.arange(9.0) - 4.0
    # act
    result = cgls_tikhonov(a, b, ReconConfig(lam=0.0, tol=1e-12))
    # assert
    assert result.image.values == approx(b, abs=1e-10)
    assert result.iterations <= 2
    assert result.flag == "converged"


def test_identity_ridge():
    """
    Test the closed form ridge solution b / 2 for lambda = 1.
    """
    a = SparseOperator.identity(9)
    b = np.linspace(-1.0, 3.0, 9)
    result = cgls_tikhonov(a, b, ReconConfig(lam=1.0, tol=1e-12))
    assert result.image.values == approx(b / 2.0, abs=1e-12), "wrong result"


def test_matches_normal_equations():
    """
    Test against a dense solve of (A^T A + lambda I) x = A^T b.
    """
    # arrange
    a = get_random_operator(49, 49, seed=5)
    b = get_random_vector(49)
    lam = 0.1
    dense = a.csr.toarray()
    # act
    result = cgls_tikhonov(a, b, ReconConfig(lam=lam, max_iters=500, tol=1e-12))
    # assert
    expected = np.linalg.solve(dense.T @ dense + lam * np.eye(49), dense.T @ b)
    assert np.linalg.norm(result.image.values - expected) <= 1e-8 * np.linalg.norm(expected)


def test_augmented_residual_monotone():
    """
    Test that the augmented residual does not increase.
    """
    a = get_random_operator(81, 49, seed=2)
    b = get_random_vector(81)
    result = cgls_tikhonov(a, b, ReconConfig(lam=0.05, max_iters=40, tol=0.0))
    residual = result.log["residual"].to_numpy()
    assert list(result.log.columns) == ["iter", "objective", "residual", "step"]
    assert np.all(np.diff(residual) <= 1e-12 * residual[0])


def test_consistent_data():
    """
    Test that a full rank consistent system is solved to a tiny residual.
    """
    # arrange
    a = SparseOperator.from_scipy(get_random_operator(49, 49, seed=3).csr + 2.0 * SparseOperator.identity(49).csr)
    truth = get_random_vector(49, seed=4)
    b = sparse_apply(a, truth)
    # act
    result = cgls_tikhonov(a, b, ReconConfig(lam=0.0, max_iters=500, tol=1e-14))
    # assert
    assert np.linalg.norm(sparse_apply(a, result.image.values) - b) <= 1e-8


def test_normal_residual_stop():
    """
    Test that the returned iterate satisfies the stopping rule.
    """
    a = get_random_operator(49, 49, seed=6)
    b = get_random_vector(49)
    cfg = ReconConfig(lam=0.5, max_iters=500, tol=1e-6)
    result = cgls_tikhonov(a, b, cfg)
    x = result.image.values
    normal = sparse_apply_adjoint(a, b - sparse_apply(a, x)) - cfg.lam * x
    assert result.flag == "converged"
    assert np.linalg.norm(normal) <= 1e-5 * np.linalg.norm(sparse_apply_adjoint(a, b))


def test_dimension_mismatch():
    """
    Test the rejection of data of the wrong length.
    """
    with pytest.raises(ValueError):
        cgls_tikhonov(SparseOperator.identity(9), np.ones(8), ReconConfig())


def test_cgls_method():
    """
    Test the method wrapper.
    """
    # arrange
    grid = ImageGrid(3)
    problem = ReconProblem(SparseOperator.identity(9), np.ones(9), grid)
    # act
    result = CglsMethod().reconstruct(problem, ReconConfig(lam=0.0))
    # assert
    assert result.image.grid == grid
    assert result.image.values == approx(np.ones(9))


@pytest.fixture(scope="module")
def ellipse_operator():
    return build_forward_matrix(CurveSpec(j=0, s=2.0), ImageGrid(65), two_sided=True, workers=4)


@pytest.mark.parametrize("kind", ["annulus", "ellipses"])
def test_reflection_artifact(kind, ellipse_operator):
    """
    Test that noise-free CGLS on two-sided ellipse data mirrors the phantom into the lower half plane.
    """
    # arrange
    truth = make_phantom(PhantomSpec(kind=kind, m=65))
    b = sparse_apply(ellipse_operator, truth.values)
    # act
    result = cgls_tikhonov(ellipse_operator, b, ReconConfig(lam=1e-3), truth.grid)
    # assert
    assert reflection_correlation(result.image, truth) >= 0.5, "wrong result"
