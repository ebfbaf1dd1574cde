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
This file contains the constants of the file formats.

"""

### Images
PGM_MAXVAL = 65535
PGM_FORMATS = ("P5", "P2")

### CSV
FLOAT_FORMAT = "%.17g"
SINOGRAM_HEADER = ("transform", "p_axis", "y_axis")
PROFILE_AXIS = "p"
PROFILE_DATA = "g"

### Operator cache
OPERATOR_MAGIC = b"URTCSR01"
OPERATOR_INT = "<i8"
OPERATOR_FLOAT = "<f8"
