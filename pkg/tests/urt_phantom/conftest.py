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
Test resources for the phantom tests.

"""

from urt_tomo.urt_phantom.phantom import AnnulusSpec, PhantomSpec, make_phantom


def get_disk_phantom(m: int = 33, radius: float = 6.0):
    """
    Disk of the given radius centred at (0, 8).
    """
    spec = PhantomSpec(kind="annulus", m=m, annulus=AnnulusSpec(center=(0.0, 8.0), r_inner=0.0, r_outer=radius))
    return make_phantom(spec)
