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
Reconstruction module

This module includes the reconstruction method interface, the method
factory and the CGLS, total variation and spectral methods.

"""

from urt_tomo.urt_recon.cgls import *
from urt_tomo.urt_recon.lambda_sweep import *
from urt_tomo.urt_recon.recon_factory import *
from urt_tomo.urt_recon.recon_method import *
from urt_tomo.urt_recon.spectral_method import *
from urt_tomo.urt_recon.total_variation import *
