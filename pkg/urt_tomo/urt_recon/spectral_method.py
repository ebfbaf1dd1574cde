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
Reconstruction by Fourier inversion of the one-sided transform.

"""

import logging

import numpy as np

from urt_tomo.urt_model.types import Sinogram, sparse_apply
from urt_tomo.urt_recon.recon_method import ReconConfig, ReconProblem, ReconResult, ReconstructionMethod
from urt_tomo.urt_spectral.inversion import SpectralOptions, SupportBand, invert_R2d

__all__ = ["SpectralMethod"]


class SpectralMethod(ReconstructionMethod):
    """
    Frequency by frequency Abel inversion. Needs the sinogram axes of the
    problem and a support band; without a band the whole p axis is used.
    """

    def __init__(self):
        super().__init__(identifier="spectral", name="Spectral Abel inversion")

    def reconstruct(self, problem: ReconProblem, cfg: ReconConfig) -> ReconResult:
        if problem.sino_axes is None:
            raise ValueError("the spectral method needs the sinogram axes of the problem")
        p_axis, y_axis = problem.sino_axes
        sino = Sinogram(p_axis, y_axis, problem.data, problem.j, problem.s)
        band = SupportBand(*problem.band) if problem.band is not None else SupportBand(p_axis.lo, p_axis.hi)
        options = problem.spectral if problem.spectral is not None else SpectralOptions()
        inversion = invert_R2d(sino, band, options, problem.grid)

        residual = sparse_apply(problem.operator, inversion.image.values) - problem.data
        misfit = float(residual @ residual)
        log = ReconResult.make_log([(1, misfit, np.sqrt(misfit), np.nan)])
        flag = "frequencies_discarded" if inversion.failed_frequencies else "converged"
        if inversion.failed_frequencies:
            logging.info("spectral inversion discarded frequencies %s", inversion.failed_frequencies)
        return ReconResult(inversion.image, log, flag, 1)
