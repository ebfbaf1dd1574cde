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
Unit test for the spectral reconstruction method.

"""

import numpy as np
import pytest

from urt_tomo.urt_model.types import ImageGrid, SparseOperator, sparse_apply
from urt_tomo.urt_phantom.metrics import delta_error
from urt_tomo.urt_radon.curves import CurveSpec
from urt_tomo.urt_radon.forward_matrix import build_forward_matrix, default_sinogram_axes
from urt_tomo.urt_recon.recon_method import ReconConfig, ReconProblem
from urt_tomo.urt_recon.spectral_method import SpectralMethod
from urt_tomo.urt_spectral.inversion import SpectralOptions
from tests.urt_radon.conftest import get_upper_blob


def test_spectral_method_blob():
    """
    Test the spectral method on data of the assembled operator.
    """
    # arrange
    grid = ImageGrid(33)
    axes = default_sinogram_axes(grid)
    a = build_forward_matrix(CurveSpec(j=0, s=2.0), grid, axes, two_sided=False)
    truth = get_upper_blob(grid, center=(0.0, 9.0), radius=5.0)
    problem = ReconProblem(
        a, sparse_apply(a, truth.values), grid, axes, 0, 2.0, (2.0, 16.0), SpectralOptions(cutoff=0.3)
    )
    # act
    result = SpectralMethod().reconstruct(problem, ReconConfig())
    # assert
    assert result.flag in ("converged", "frequencies_discarded")
    assert len(result.log) == 1
    assert delta_error(result.image, truth) < 0.5


def test_spectral_method_needs_axes():
    """
    Test that the spectral method refuses problems without sinogram axes.
    """
    problem = ReconProblem(SparseOperator.identity(9), np.ones(9), ImageGrid(3))
    with pytest.raises(ValueError):
        SpectralMethod().reconstruct(problem, ReconConfig())
