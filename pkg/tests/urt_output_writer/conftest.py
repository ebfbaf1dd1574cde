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
Resources for output writer unittest.

"""

import os

import numpy as np
import pandas as pd

from urt_tomo.urt_model.types import Grid1D, Image, ImageGrid, Sinogram

VERSION_FILE = os.path.join(os.path.dirname(__file__), "test_version.json")


def get_flat_manifest():
    """
    Get an example manifest in dotted key form.
    """
    return {
        "phantom.kind": "annulus",
        "phantom.m": 33,
        "curve.j": 0,
        "curve.s": 2.0,
        "noise.gamma": 0.01,
        "noise.epsilon": 0.05,
        "noise.seed": 7,
        "recon.lambda": 0.1,
        "recon.nonneg": True,
        "method": "cgls",
        "output_dir": "results",
    }


def get_test_image():
    """
    Get a small image with a gradient.
    """
    grid = ImageGrid(5)
    return Image(grid, np.linspace(0.0, 1.0, grid.size))


def get_test_sinogram():
    """
    Get a small sinogram.
    """
    return Sinogram(Grid1D(1.0, 3.0, 3), Grid1D(-5.0, 5.0, 9), np.arange(27.0) / 7.0)


def get_iteration_log():
    """
    Get an example iteration log.
    """
    return pd.DataFrame(
        {"iter": [0, 1, 2], "objective": [3.0, 1.5, 1.25], "residual": [2.0, 1.0, 0.75], "step": [0.0, 0.5, 0.25]}
    )
