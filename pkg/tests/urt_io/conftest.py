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
Test resources for the file format tests.

"""

import numpy as np
import pytest

from urt_tomo.urt_model.rng import STREAM_TEST, make_generator
from urt_tomo.urt_model.types import Grid1D, Image, ImageGrid, Sinogram, SparseOperator


@pytest.fixture(scope="session")
def io_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("urt_io")


def get_test_image(m: int = 9, seed: int = 0) -> Image:
    """
    Random non-negative image.
    """
    rng = make_generator(seed, STREAM_TEST)
    return Image(ImageGrid(m), rng.uniform(0.0, 3.0, m * m))


def get_test_sinogram(seed: int = 0) -> Sinogram:
    """
    Random sinogram on irregular looking axes.
    """
    rng = make_generator(seed, STREAM_TEST)
    p_axis = Grid1D(1.0, 5.0, 5)
    y_axis = Grid1D(-9.0 / 8.0 * 9, 9.0 / 8.0 * 9, 17)
    return Sinogram(p_axis, y_axis, rng.normal(size=(5, 17)) / 3.0, j=1, s=2.5)


def get_test_operator(seed: int = 0) -> SparseOperator:
    """
    Random sparse operator with a few empty rows.
    """
    rng = make_generator(seed, STREAM_TEST)
    dense = rng.uniform(size=(12, 7))
    dense[rng.uniform(size=(12, 7)) > 0.3] = 0.0
    dense[4] = 0.0
    return SparseOperator.from_scipy(dense)
