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
This file contains the configuration loader of the URT tomography tool as
well as dataclasses for the sections that have no home in a sub-package.

A configuration is either a JSON file with one object per section or a
flat manifest with one dotted key per line:

    # annulus, curve family j = 1
    phantom.kind=annulus
    curve.j=1
    noise.gamma=0.05

Values are read as JSON literals when possible and kept as strings
otherwise.
"""

import dataclasses
import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from urt_tomo.urt_output_writer.provenance_formatter import format_manifest_value
from urt_tomo.urt_phantom.phantom import PhantomSpec
from urt_tomo.urt_radon.curves import CurveSpec
from urt_tomo.urt_radon.simulation import NoiseSpec
from urt_tomo.urt_recon.lambda_sweep import DEFAULT_LAMBDAS
from urt_tomo.urt_recon.recon_factory import ReconstructionMethodFactory
from urt_tomo.urt_recon.recon_method import ReconConfig
from urt_tomo.urt_spectral.inversion import SpectralOptions

TOP_LEVEL_KEYS = ("method", "output_dir", "run_name")

SECTION_KEYS = {
    "phantom": ("kind", "m", "annulus", "ellipses", "bump"),
    "curve": ("kind", "j", "s", "q", "family", "params", "truncation"),
    "noise": ("gamma", "epsilon", "seed"),
    "recon": ("lambda", "beta_smooth", "max_iters", "tol", "nonneg", "seed", "tv_norm", "normalize"),
    "spectral": (
        "cutoff",
        "growth_limit",
        "workers",
        "solver",
        "regularization",
        "abel",
        "smooth",
        "band_a",
        "band_b",
    ),
    "operator": ("two_sided", "workers", "cache_dir"),
    "sweep": ("enabled", "lambdas"),
    "writer": ("version_file",),
}


def parse_value(text: str):
    """
    Read a manifest value as JSON literal, or keep it as string.
    """
    text = text.strip()
    try:
        return json.loads(text)
    except ValueError:
        return text


def set_dotted(config: dict, key: str, value) -> None:
    """
    Store a value under a dotted key, creating nested sections.

    Parameters
    ----------
        config : dict
            Nested configuration to update.

        key : str
            Dotted key, e.g. "curve.params.h".

        value : object
            Value to store.
    """

    parts = key.strip().split(".")
    if not all(parts):
        raise ValueError(f"malformed manifest key '{key}'")
    node = config
    for part in parts[:-1]:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ValueError(f"manifest key '{key}' nests below the value of '{part}'")
        node = child
    node[parts[-1]] = value


def flatten(payload: dict, prefix: str = "") -> Dict[str, object]:
    """
    Flatten nested sections into dotted keys; empty sections vanish.
    """
    flat = {}
    for key, value in payload.items():
        dotted = f"{prefix}.{key}" if prefix else str(key)
        if isinstance(value, dict):
            flat.update(flatten(value, dotted))
        else:
            flat[dotted] = value
    return flat


def parse_manifest_text(text: str) -> dict:
    """
    Parse a flat key=value manifest into nested sections.
    """
    config = {}
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"manifest line {number} is not of the form key=value: '{line}'")
        key, value = line.split("=", 1)
        set_dotted(config, key, parse_value(value))
    return config


@dataclass
class OperatorConfig(object):
    """
    Dataclass for the forward operator assembly.

    Parameters
    ----------
        two_sided : bool
            Assemble the two-sided operator; if omitted, every method but
            the spectral one uses the two-sided operator.

        workers : int
            Number of threads assembling the operator.

        cache_dir : str
            Folder of the operator cache; no caching if omitted.
    """

    two_sided: Optional[bool] = None
    workers: int = 1
    cache_dir: Optional[str] = None

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError(f"number of workers must be positive, got {self.workers}")

    @classmethod
    def from_payload(cls, payload: dict):
        two_sided = payload.get("two_sided", None)
        return cls(
            two_sided=None if two_sided is None else bool(two_sided),
            workers=int(payload.get("workers", 1)),
            cache_dir=payload.get("cache_dir", None),
        )

    def to_payload(self) -> dict:
        return {"two_sided": self.two_sided, "workers": self.workers, "cache_dir": self.cache_dir}


@dataclass
class SpectralConfig(object):
    """
    Dataclass for the spectral reconstruction method.

    Parameters
    ----------
        options : SpectralOptions
            Options of the Fourier inversion.

        band : (float, float)
            Band a <= x2 <= b containing the support; the whole p axis if
            omitted.
    """

    options: SpectralOptions = field(default_factory=SpectralOptions)
    band: Optional[Tuple[float, float]] = None

    @classmethod
    def from_payload(cls, payload: dict):
        band = None
        if "band_a" in payload or "band_b" in payload:
            if "band_a" not in payload or "band_b" not in payload:
                raise ValueError("the support band needs both band_a and band_b")
            band = (float(payload["band_a"]), float(payload["band_b"]))
            if not 0.0 < band[0] < band[1]:
                raise ValueError(f"support band needs 0 < a < b, got {band}")
        return cls(options=SpectralOptions.from_payload(payload), band=band)

    def to_payload(self) -> dict:
        payload = dataclasses.asdict(self.options)
        if self.band is not None:
            payload["band_a"], payload["band_b"] = self.band
        return payload


@dataclass
class SweepConfig(object):
    """
    Dataclass for the regularization weight sweep.

    Parameters
    ----------
        enabled : bool
            Sweep the weights and keep the reconstruction with the smallest
            error.

        lambdas : List[float]
            Weights to try.
    """

    enabled: bool = False
    lambdas: List[float] = field(default_factory=lambda: [float(lam) for lam in DEFAULT_LAMBDAS])

    def __post_init__(self):
        if not self.lambdas or any(lam < 0 for lam in self.lambdas):
            raise ValueError(f"sweep needs a non-empty list of non-negative weights, got {self.lambdas}")

    @classmethod
    def from_payload(cls, payload: dict):
        lambdas = payload.get("lambdas", None)
        return cls(
            enabled=bool(payload.get("enabled", False)),
            lambdas=[float(lam) for lam in (DEFAULT_LAMBDAS if lambdas is None else np.atleast_1d(lambdas))],
        )

    def to_payload(self) -> dict:
        return {"enabled": self.enabled, "lambdas": list(self.lambdas)}


@dataclass
class WriterConfig(object):
    """
    Dataclass for writer module configuration.

    Parameters
    ----------
        version_file : str
            Filepath of the version file.
    """

    version_file: str = "version.json"

    @classmethod
    def from_payload(cls, payload: dict):
        return cls(version_file=payload.get("version_file", "version.json"))


@dataclass
class ExperimentManifest(object):
    """
    Dataclass holding everything one experiment run depends on.

    Parameters
    ----------
        phantom : PhantomSpec
            True image.

        curve : CurveSpec
            Curve family of the transform.

        noise : NoiseSpec
            Operator perturbation and data noise.

        recon : ReconConfig
            Solver configuration.

        method : str
            Identifier of the reconstruction method.

        output_dir : str
            Folder receiving one sub folder per run.

        run_name : str
            Name of the run folder; derived from the manifest if omitted.

        operator : OperatorConfig
            Operator assembly.

        spectral : SpectralConfig
            Spectral method configuration.

        sweep : SweepConfig
            Regularization weight sweep.
    """

    phantom: PhantomSpec = field(default_factory=PhantomSpec)
    curve: CurveSpec = field(default_factory=CurveSpec)
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    recon: ReconConfig = field(default_factory=ReconConfig)
    method: str = "cgls"
    output_dir: str = "results"
    run_name: Optional[str] = None
    operator: OperatorConfig = field(default_factory=OperatorConfig)
    spectral: SpectralConfig = field(default_factory=SpectralConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)

    def __post_init__(self):
        if self.method not in ReconstructionMethodFactory.identifiers():
            raise ValueError(
                f"unknown method '{self.method}', expected one of {ReconstructionMethodFactory.identifiers()}"
            )
        if self.method == "spectral":
            if self.operator.two_sided:
                raise ValueError("the spectral method inverts one-sided data, set operator.two_sided=false")
            if self.curve.kind == "generalized":
                raise ValueError("the spectral method supports ellipses and hyperbolas only")
        if self.run_name is None:
            self.run_name = self.default_run_name()

    @property
    def two_sided(self) -> bool:
        if self.operator.two_sided is None:
            return self.method != "spectral"
        return self.operator.two_sided

    def default_run_name(self) -> str:
        return f"{self.phantom.kind}_j{self.curve.j}_gamma{self.noise.gamma:g}_{self.method}"

    @classmethod
    def from_payload(cls, payload: dict):
        """
        Method to create the manifest from a nested configuration.

        Parameters
        ----------
            payload : dict
                Dictionary with all sections.

        Returns
        -------
        Experiment manifest.
        """

        check_manifest_keys(payload)
        return cls(
            phantom=PhantomSpec.from_payload(payload.get("phantom", {})),
            curve=CurveSpec.from_payload(payload.get("curve", {})),
            noise=NoiseSpec.from_payload(payload.get("noise", {})),
            recon=ReconConfig.from_payload(payload.get("recon", {})),
            method=payload.get("method", "cgls"),
            output_dir=str(payload.get("output_dir", "results")),
            run_name=payload.get("run_name", None),
            operator=OperatorConfig.from_payload(payload.get("operator", {})),
            spectral=SpectralConfig.from_payload(payload.get("spectral", {})),
            sweep=SweepConfig.from_payload(payload.get("sweep", {})),
        )

    def to_payload(self) -> dict:
        return {
            "phantom": self.phantom.to_payload(),
            "curve": self.curve.to_payload(),
            "noise": self.noise.to_payload(),
            "recon": self.recon.to_payload(),
            "method": self.method,
            "output_dir": self.output_dir,
            "run_name": self.run_name,
            "operator": self.operator.to_payload(),
            "spectral": self.spectral.to_payload(),
            "sweep": self.sweep.to_payload(),
        }

    def to_flat_dict(self) -> Dict[str, object]:
        return flatten(self.to_payload())

    def to_text(self) -> str:
        """
        The manifest as sorted key=value lines; reading the text back gives
        the same manifest.
        """
        flat = self.to_flat_dict()
        return "".join(f"{key}={format_manifest_value(flat[key])}\n" for key in sorted(flat))


def check_manifest_keys(payload: dict) -> None:
    """
    Raise ValueError for sections and keys the tool does not know.
    """
    for key, value in payload.items():
        if key in TOP_LEVEL_KEYS:
            continue
        if key not in SECTION_KEYS:
            raise ValueError(f"unknown manifest key '{key}'")
        if not isinstance(value, dict):
            raise ValueError(f"manifest section '{key}' must hold keys, got '{value}'")
        for inner in value:
            if inner not in SECTION_KEYS[key]:
                raise ValueError(f"unknown manifest key '{key}.{inner}'")


class ConfigLoader(object):
    """
    Class for loading and handling configuration files.

    Parameters
    ----------
        config : dict
            Dictionary containing the loaded configuration.
    """

    def __init__(self, config_filepath: Optional[str] = None):
        """
        Opens the configuration file on init and loads it; without a file
        all sections take their defaults.
        """

        self.config = {}
        if config_filepath is None:
            return
        with open(config_filepath, "r") as config_file:
            text = config_file.read()
        if text.lstrip().startswith("{"):
            self.config = json.loads(text)
        else:
            self.config = parse_manifest_text(text)
        logging.debug("loaded configuration %s", config_filepath)

    def apply_overrides(self, overrides: Optional[List[str]]) -> None:
        """
        Apply key=value overrides on top of the loaded configuration.

        Parameters
        ----------
            overrides : List[str]
                Dotted assignments, e.g. "recon.lambda=0.1".
        """

        for override in overrides or []:
            if "=" not in override:
                raise ValueError(f"override '{override}' is not of the form key=value")
            key, value = override.split("=", 1)
            set_dotted(self.config, key, parse_value(value))
            logging.debug("override %s", override)

    def _section(self, name: str) -> dict:
        section = self.config.get(name, {})
        if not isinstance(section, dict):
            raise ValueError(f"manifest section '{name}' must hold keys, got '{section}'")
        return section

    def get_phantom_config(self) -> PhantomSpec:
        return PhantomSpec.from_payload(self._section("phantom"))

    def get_curve_config(self) -> CurveSpec:
        return CurveSpec.from_payload(self._section("curve"))

    def get_noise_config(self) -> NoiseSpec:
        return NoiseSpec.from_payload(self._section("noise"))

    def get_recon_config(self) -> ReconConfig:
        return ReconConfig.from_payload(self._section("recon"))

    def get_spectral_config(self) -> SpectralConfig:
        return SpectralConfig.from_payload(self._section("spectral"))

    def get_writer_config(self) -> WriterConfig:
        """
        Get writer module configuration.

        Returns
        -------
        Writer module configuration.
        """

        return WriterConfig.from_payload(self._section("writer"))

    def get_manifest(self) -> ExperimentManifest:
        """
        Get the manifest of the configured experiment.

        Returns
        -------
        Validated experiment manifest.
        """

        return ExperimentManifest.from_payload(self.config)
