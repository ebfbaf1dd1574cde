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
Unit test for the provenance formatter.

"""

from urt_tomo.urt_output_writer.provenance_formatter import ProvenanceFormatter
from tests.urt_output_writer.conftest import get_flat_manifest


def test_version_header():
    """
    Test ProvenanceFormatter version header.
    """
    # arrange
    formatter = ProvenanceFormatter(version="v0.3", tool="TestTool", release="r1", commit_id="c123", company="TestComp")
    # act
    header = formatter.format_version_header()
    # assert
    assert header == [
        "# tool=TestTool",
        "# version=v0.3",
        "# release=r1",
        "# commit=c123",
        "# company=TestComp",
    ]
    assert ProvenanceFormatter(version="v0.3", tool="TestTool").format_version_header()[-1] == "# company=company"


def test_format_value():
    """
    Test ProvenanceFormatter value formatting.
    """
    formatter = ProvenanceFormatter(version="v0.3", tool="TestTool")
    assert formatter.format_value("annulus") == "annulus"
    assert formatter.format_value(True) == "true"
    assert formatter.format_value(None) == "null"
    assert formatter.format_value(0.1) == "0.1"
    assert formatter.format_value(33) == "33"
    assert formatter.format_value([0.01, 0.05]) == "[0.01, 0.05]"


def test_format_manifest_sorted():
    """
    Test that the manifest lines follow the header in key order.
    """
    # arrange
    formatter = ProvenanceFormatter(version="v0.3", tool="TestTool")
    manifest = get_flat_manifest()
    # act
    lines = formatter.format_manifest(manifest).splitlines()
    # assert
    body = [line for line in lines if not line.startswith("#")]
    assert len(lines) == len(manifest) + 4
    assert body == sorted(body)
    assert "noise.seed=7" in body
    assert "recon.nonneg=true" in body


def test_format_manifest_deterministic():
    """
    Test that formatting twice gives the same text.
    """
    manifest = get_flat_manifest()
    first = ProvenanceFormatter(version="v0.3", tool="TestTool").format_manifest(manifest)
    second = ProvenanceFormatter(version="v0.3", tool="TestTool").format_manifest(dict(reversed(list(manifest.items()))))
    assert first == second
    assert first.endswith("\n")
