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
This file contains the exceptions raised on numerical failures.

Usage errors (bad parameters, malformed files) are reported with the
builtin ValueError. Everything derived from NumericalError signals that
a well formed request could not be computed to the requested accuracy.

"""


class NumericalError(RuntimeError):
    """
    Base class for all numerical failures.
    """


class QuadratureError(NumericalError):
    """
    Raised when an adaptive quadrature does not reach its tolerance.
    """


class KernelValidationError(NumericalError):
    """
    Raised when an Abel kernel violates the solvability conditions.

    `report` holds the ValidationReport of the failed check, if any.
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class NeumannDivergenceError(NumericalError):
    """
    Raised when the Neumann series of a second kind equation diverges.
    """


class SolverBreakdown(NumericalError):
    """
    Raised when an iterative solver cannot continue, e.g. a vanishing
    curvature in CGLS or a failed line search.
    """
