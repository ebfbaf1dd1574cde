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
This file contains the output writer for the experiment runs.

"""

import json
import logging
import os
from typing import Dict, Union

import pandas as pd

from urt_tomo.urt_io.constants import FLOAT_FORMAT
from urt_tomo.urt_io.image_io import write_image_csv, write_pgm
from urt_tomo.urt_io.sinogram_io import write_sinogram_csv
from urt_tomo.urt_model.types import Image, Sinogram
from urt_tomo.urt_output_writer import constants
from urt_tomo.urt_output_writer.provenance_formatter import ProvenanceFormatter

__all__ = ["RunWriter"]


class RunWriter:
    """
    Output writer for experiment runs.

    Attributes
    ----------
        _company_name : str
            Company name, written to the provenance header.
        _tool : str
            Tool identifer.
        _release : str
            Software release.
        _commit_id : str
            Git commit id.
        _version : str
            Version string.
        _formatter : ProvenanceFormatter
            The formatter object that is used for the provenance records.
        _output_dir : str
            Folder holding one sub folder per run.
        _dry_run : bool
            If set, nothing is written.

    """

    def __init__(
        self,
        version_fpath: Union[str, None] = None,
        output_dir: Union[str, None] = None,
        dry_run: bool = False,
    ):
        """
        Setup of the run writer.

        All files of a run are written into the folder

            <output_dir>/<run_name>

        Parameters
        ----------
            version_fpath : str
                Path to file containing version information provided in the
                provenance records.
            output_dir : str
                Output folder.
            dry_run : bool
                Only log the files that would be written.

        """
        # initialize version information
        try:
            if version_fpath is None:
                version_fpath = ""
            with open(version_fpath) as v_fpath:
                version_info = json.load(v_fpath)

            self._company_name = version_info.get("COMPANY_NAME", "company")
            self._tool = version_info.get("TOOL", "tool")
            self._release = version_info.get("RELEASE", "r0")
            self._commit_id = version_info.get("COMMIT_ID", "commit_id")
            self._version = version_info.get("VERSION", "v0.0")

        except IOError:
            logging.warning("Version file could not be found, using defaults")
            self._company_name = "company"
            self._tool = "tool"
            self._release = "r0"
            self._commit_id = "commit_id"
            self._version = "v0.0"

        self._formatter = ProvenanceFormatter(
            version=self._version,
            tool=self._tool,
            release=self._release,
            commit_id=self._commit_id,
            company=self._company_name,
        )
        self._output_dir = output_dir if output_dir is not None else ""
        self._dry_run = dry_run

    @property
    def tool(self) -> str:
        return self._tool

    @property
    def version(self) -> str:
        return self._version

    @property
    def dry_run(self) -> bool:
        return self._dry_run

    def run_path(self, run_name: str) -> str:
        """
        Folder of one run.

        Parameters
        ----------
            run_name : str
                Name of the run, used as folder name.

        Returns
        -------
            Run folder path.

        """
        if not run_name or "/" in run_name or run_name in (".", ".."):
            raise ValueError(f"invalid run name '{run_name}'")
        return os.path.join(self._output_dir, run_name).replace(os.sep, "/")

    def file_path(self, run_name: str, file_name: str) -> str:
        return self.run_path(run_name) + "/" + file_name

    def format_provenance(self, flat_manifest: Dict[str, object]) -> str:
        return self._formatter.format_manifest(flat_manifest)

    def write_provenance(self, run_name: str, flat_manifest: Dict[str, object]) -> str:
        """
        Write the provenance record of a run.

        Parameters
        ----------
            run_name : str
                Name of the run.
            flat_manifest : Dict[str, object]
                Manifest as dotted keys.

        Returns
        -------
            Path of the record.

        """
        path = self.file_path(run_name, constants.FILE_PROVENANCE)
        self.write_text(file_path=path, text=self.format_provenance(flat_manifest))
        return path

    def write_image(self, run_name: str, stem: str, image: Image) -> None:
        """
        Write an image as <stem>.pgm and <stem>.csv.
        """
        pgm_path = self.file_path(run_name, stem + ".pgm")
        csv_path = self.file_path(run_name, stem + ".csv")
        if self._skip(pgm_path) or self._skip(csv_path):
            return
        self._make_dirs(pgm_path)
        write_pgm(image, pgm_path)
        write_image_csv(image, csv_path)

    def write_phantom(self, run_name: str, image: Image) -> None:
        self.write_image(run_name, constants.FILE_PHANTOM, image)

    def write_reconstruction(self, run_name: str, image: Image) -> None:
        self.write_image(run_name, constants.FILE_RECONSTRUCTION, image)

    def write_sinograms(self, run_name: str, clean: Sinogram, noisy: Sinogram) -> None:
        """
        Write the clean sinogram and the perturbed noisy data of a run.
        """
        for file_name, sino in ((constants.FILE_SINOGRAM_CLEAN, clean), (constants.FILE_DATA_NOISY, noisy)):
            path = self.file_path(run_name, file_name)
            if self._skip(path):
                continue
            self._make_dirs(path)
            write_sinogram_csv(sino, path)

    def write_iterations(self, run_name: str, log: pd.DataFrame) -> None:
        self.write_frame(self.file_path(run_name, constants.FILE_ITERATIONS), log)

    def write_metrics(self, run_name: str, metrics: Dict[str, object]) -> None:
        """
        Write the metrics of a run as a one row CSV table.
        """
        frame = pd.DataFrame([metrics])
        self.write_frame(self.file_path(run_name, constants.FILE_METRICS), frame)

    def write_sweep(self, run_name: str, sweep: pd.DataFrame) -> None:
        self.write_frame(self.file_path(run_name, constants.FILE_SWEEP), sweep)

    def write_tables(self, tables: pd.DataFrame) -> str:
        """
        Write the summary table of an experiment set into the output folder.
        """
        path = os.path.join(self._output_dir, constants.FILE_TABLES).replace(os.sep, "/")
        self.write_frame(path, tables)
        return path

    def write_frame(self, file_path: str, frame: pd.DataFrame) -> None:
        """
        Write a data frame as CSV.

        Parameters
        ----------
            file_path : str
                Path of the file to write.
            frame : pd.DataFrame
                Table to write.

        """
        if self._skip(file_path):
            return
        self._make_dirs(file_path)
        frame.to_csv(file_path, index=False, float_format=FLOAT_FORMAT)

    def write_text(self, file_path: str, text: str) -> None:
        """
        Write a string into a file.

        Parameters
        ----------
            file_path : str
                Path of the file to write.
            text : str
                String to write into file.

        """
        if self._skip(file_path):
            return
        self._make_dirs(file_path)
        with open(file_path, "w") as outfile:
            outfile.write(text)

    def _skip(self, file_path: str) -> bool:
        if self._dry_run:
            logging.info("Dry-run, not writing %s", file_path)
        return self._dry_run

    def _make_dirs(self, file_path: str) -> None:
        # make directory if not exist
        out_path = os.path.dirname(file_path)
        if out_path and not os.path.exists(out_path):
            os.makedirs(out_path)
