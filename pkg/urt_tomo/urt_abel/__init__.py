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
Abel module

This module includes the description of generalized Abel kernels, the
quadrature rules, the Volterra solvers and the Abel inversion.

"""

from urt_tomo.urt_abel.kernel_spec import *
from urt_tomo.urt_abel.quadrature import *
from urt_tomo.urt_abel.differentiation import *
from urt_tomo.urt_abel.volterra import *
from urt_tomo.urt_abel.abel_solver import *
