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
This file contains the constants required for the run output writer.

"""

FILE_PROVENANCE = "provenance.txt"
FILE_PHANTOM = "phantom"
FILE_RECONSTRUCTION = "reconstruction"
FILE_SINOGRAM_CLEAN = "sinogram_clean.csv"
FILE_DATA_NOISY = "data_noisy.csv"
FILE_ITERATIONS = "iterations.csv"
FILE_METRICS = "metrics.csv"
FILE_TABLES = "tables.csv"
FILE_SWEEP = "lambda_sweep.csv"

PROVENANCE_COMMENT = "#"
