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
This file contains the seeded random number streams.

Every random draw of the tool comes from a counter based Philox generator
keyed by the user seed and a fixed stream identifier, so that the same
seed gives the same numbers on every platform.

"""

import numpy as np

__all__ = ["STREAM_PERTURBATION", "STREAM_NOISE", "STREAM_PHANTOM", "STREAM_TEST", "make_generator"]

STREAM_PERTURBATION = 0
STREAM_NOISE = 1
STREAM_PHANTOM = 2
STREAM_TEST = 3


def make_generator(seed: int, stream: int) -> np.random.Generator:
    """
    Create the random generator for a seed and a stream.

    Parameters
    ----------
        seed : int
            Non-negative user seed.

        stream : int
            Stream identifier, one of the STREAM_* constants.

    Returns
    -------
    Generator whose i-th draw is a pure function of (seed, stream, i).

    """

    if int(seed) < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    sequence = np.random.SeedSequence([int(seed), int(stream)])
    return np.random.Generator(np.random.Philox(sequence))
