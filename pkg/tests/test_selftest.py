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
Unit test for the self test.

"""

from functools import partial

import pandas as pd
import pytest

from urt_tomo.selftest import REPORT_COLUMNS, check_adjoint, default_checks, format_report, run_selftest
from urt_tomo.urt_model.types import sparse_apply_adjoint

CHEAP_CHECKS = ["adjoint", "leibniz_coeffs", "alpha_n", "cgls_normal_equations", "tv_gradient", "io_round_trips"]


def flipped_adjoint(a, y):
    return -sparse_apply_adjoint(a, y)


def test_all_checks_pass():
    """
    Test that the full self test passes.
    """
    # act
    report = run_selftest()
    # assert
    assert list(report.columns) == REPORT_COLUMNS
    assert list(report["check"]) == list(default_checks())
    assert (report["status"] == "pass").all(), format_report(report)


def test_injected_sign_error_fails():
    """
    Test that a sign error in the adjoint is reported.
    """
    # arrange
    checks = {"adjoint": partial(check_adjoint, adjoint=flipped_adjoint)}
    # act
    report = run_selftest(checks, names=["adjoint"])
    # assert
    assert len(report) == 1
    assert report["status"][0] == "fail"
    assert report["value"][0] > report["tolerance"][0]


def test_raising_check_is_an_error():
    def broken():
        raise ArithmeticError("broken")

    report = run_selftest({"broken": broken}, names=["broken", "alpha_n"])
    assert list(report["status"]) == ["error", "pass"]


def test_report_deterministic():
    """
    Test that two runs give identical reports.
    """
    first = run_selftest(names=CHEAP_CHECKS)
    second = run_selftest(names=CHEAP_CHECKS)
    pd.testing.assert_frame_equal(first, second)
    assert format_report(first) == format_report(second)


def test_unknown_check():
    with pytest.raises(LookupError):
        run_selftest(names=["no_such_check"])
