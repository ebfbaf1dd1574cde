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
This file contains the provenance formatter of the run outputs.

"""

import json
from typing import Dict, List

from urt_tomo.urt_output_writer import constants

__all__ = ["ProvenanceFormatter", "format_manifest_value"]


def _to_builtin(value):
    # numpy scalars and arrays
    if hasattr(value, "tolist"):
        return value.tolist()
    raise TypeError(f"cannot write {type(value).__name__} into a manifest")


def format_manifest_value(value) -> str:
    """
    Format one manifest value; everything but strings is written as a JSON literal.
    """
    if isinstance(value, str):
        return value
    return json.dumps(value, default=_to_builtin)


class ProvenanceFormatter:
    """
    Formatter for the provenance records.

    The record starts with comment lines naming the tool and its version
    followed by the manifest as sorted key=value lines. It carries no
    timestamp, so the same manifest always gives the same text.

    Attributes
    ----------
        _version : str
            Version used for the header.
        _tool : str
            Tool name used for the header.
        _release : str
            Release used for the header.
        _commit_id : str
            Commit id used for the header.
        _company : str
            Company providing the tool.

    """

    def __init__(
        self, version: str, tool: str, release: str = "r0", commit_id: str = "commit_id", company: str = "company"
    ):
        """
        Setup of formatter.

        Parameters
        ----------
            version : str
                Tool version.
            tool : str
                Tool name.
            release : str
                Software release.
            commit_id : str
                Git commit id.
            company : str
                Company providing the tool.

        """
        self._version = version
        self._tool = tool
        self._release = release
        self._commit_id = commit_id
        self._company = company

    def format_version_header(self) -> List[str]:
        """
        Create the header lines.

        Returns
        -------
            Comment lines with tool, version, release, commit and company.

        """
        comment = constants.PROVENANCE_COMMENT
        return [
            f"{comment} tool={self._tool}",
            f"{comment} version={self._version}",
            f"{comment} release={self._release}",
            f"{comment} commit={self._commit_id}",
            f"{comment} company={self._company}",
        ]

    def format_value(self, value) -> str:
        return format_manifest_value(value)

    def format_manifest(self, flat_manifest: Dict[str, object]) -> str:
        """
        Format a flat manifest as provenance text.

        Parameters
        ----------
            flat_manifest : Dict[str, object]
                Dotted keys mapped to values.

        Returns
        -------
            Header and sorted key=value lines, newline terminated.

        """
        lines = self.format_version_header()
        for key in sorted(flat_manifest):
            lines.append(f"{key}={self.format_value(flat_manifest[key])}")
        return "\n".join(lines) + "\n"
