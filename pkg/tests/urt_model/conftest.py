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
Test resources for the domain model tests.

"""

import numpy as np

from urt_tomo.urt_model.rng import STREAM_TEST, make_generator
from urt_tomo.urt_model.types import SparseOperator


def get_random_operator(rows: int, cols: int, density: float = 0.2, seed: int = 0) -> SparseOperator:
    """
    Create a random sparse operator with non-negative weights.
    """
    rng = make_generator(seed, STREAM_TEST)
    dense = rng.uniform(0.0, 1.0, size=(rows, cols))
    dense[rng.uniform(size=(rows, cols)) > density] = 0.0
    return SparseOperator.from_scipy(dense)
