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
This file contains the functions driving the experiments: operator
assembly with caching, data simulation, reconstruction, the weight sweep,
the default experiment set and the Abel equation utilities.
"""

import dataclasses
import hashlib
import json
import logging
import os
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from urt_tomo.config_loader import ExperimentManifest
from urt_tomo.urt_abel.abel_solver import AbelSolveOptions, abel_solve
from urt_tomo.urt_abel.kernel_spec import validate_kernel
from urt_tomo.urt_abel.quadrature import abel_forward_apply
from urt_tomo.urt_io.image_io import read_image_csv
from urt_tomo.urt_io.operator_cache import read_operator_cache, write_operator_cache
from urt_tomo.urt_io.profile_io import read_profile_csv, write_profile_csv
from urt_tomo.urt_io.sinogram_io import read_sinogram_csv
from urt_tomo.urt_model.errors import KernelValidationError
from urt_tomo.urt_model.types import Grid1D, Image, Sinogram, SparseOperator
from urt_tomo.urt_output_writer import constants as writer_constants
from urt_tomo.urt_output_writer.run_writer import RunWriter
from urt_tomo.urt_phantom.metrics import delta_error, reflection_correlation
from urt_tomo.urt_phantom.phantom import make_phantom
from urt_tomo.urt_radon.forward_matrix import build_forward_matrix, default_sinogram_axes
from urt_tomo.urt_radon.simulation import forward_sinogram, perturb_matrix, simulate_data
from urt_tomo.urt_recon.lambda_sweep import lambda_sweep
from urt_tomo.urt_recon.recon_factory import ReconstructionMethodFactory
from urt_tomo.urt_recon.recon_method import ReconProblem
from urt_tomo.urt_spectral.families import KernelFamily, build_kernel_family
from urt_tomo.urt_spectral.inversion import dump_kernel

TABLE_PHANTOMS = ("annulus", "ellipses")
TABLE_FAMILIES = (0, 1)
TABLE_NOISE_LEVELS = (0.01, 0.05)
TABLE_METHODS = ("cgls", "tv")
REFINE_STEPS = 20

OperatorStore = Dict[str, Tuple[SparseOperator, Tuple[Grid1D, Grid1D]]]


@dataclass
class SimulationResult(object):
    """
    Phantom, unperturbed operator and the simulated data of one run.
    """

    phantom: Image
    operator: SparseOperator
    clean: Sinogram
    noisy: Sinogram


def list_methods() -> None:
    """
    This function lists all implemented reconstruction methods.
    """

    print("Available reconstruction methods:")
    for method in ReconstructionMethodFactory.get_all_methods():
        print("-", method.name, "(ID:", method.identifier + ")")


def operator_key(manifest: ExperimentManifest) -> str:
    """
    Hash of everything the forward operator of a manifest depends on.
    """
    p_axis, y_axis = default_sinogram_axes(manifest.phantom.grid)
    description = {
        "curve": manifest.curve.to_payload(),
        "m": manifest.phantom.m,
        "two_sided": manifest.two_sided,
        "axes": [[axis.lo, axis.hi, axis.count] for axis in (p_axis, y_axis)],
    }
    text = json.dumps(description, sort_keys=True)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def build_operator(
    manifest: ExperimentManifest, store: Optional[OperatorStore] = None, dry_run: bool = False
) -> Tuple[SparseOperator, Tuple[Grid1D, Grid1D]]:
    """
    Get the unperturbed forward operator of a manifest.

    The operator is taken from the in-memory store, then from the cache
    folder of the manifest, and assembled only if neither holds it.

    Parameters
    ----------
        manifest : ExperimentManifest
            Experiment definition.

        store : dict
            In-memory operators shared between runs, keyed by operator_key.

        dry_run : bool
            Do not write the cache file.

    Returns
    -------
    Operator and its sinogram axes.

    """

    key = operator_key(manifest)
    if store is not None and key in store:
        return store[key]
    axes = default_sinogram_axes(manifest.phantom.grid)
    cache_path = None
    operator = None
    if manifest.operator.cache_dir:
        cache_path = os.path.join(manifest.operator.cache_dir, f"operator_{key[:16]}.bin")
        if os.path.exists(cache_path):
            operator = read_operator_cache(cache_path)
            logging.info("read operator from cache %s", cache_path)
    if operator is None:
        operator = build_forward_matrix(
            manifest.curve, manifest.phantom.grid, axes, manifest.two_sided, manifest.operator.workers
        )
        if cache_path is not None and not dry_run:
            os.makedirs(manifest.operator.cache_dir, exist_ok=True)
            write_operator_cache(operator, cache_path)
    if store is not None:
        store[key] = (operator, axes)
    return operator, axes


def simulate(
    manifest: ExperimentManifest, writer: Optional[RunWriter] = None, store: Optional[OperatorStore] = None
) -> SimulationResult:
    """
    Create the phantom and the clean and noisy data of a run.

    Parameters
    ----------
        manifest : ExperimentManifest
            Experiment definition.

        writer : RunWriter
            Writes provenance, phantom and sinograms if given.

        store : dict
            In-memory operators shared between runs.

    Returns
    -------
    SimulationResult of the run.

    """

    dry_run = writer.dry_run if writer is not None else False
    phantom = make_phantom(manifest.phantom)
    operator, axes = build_operator(manifest, store, dry_run)
    j, s = manifest.curve.j, manifest.curve.s
    clean = forward_sinogram(operator, phantom, axes, j, s)
    perturbed = perturb_matrix(operator, manifest.noise.epsilon, manifest.noise.seed)
    noisy = clean.with_values(simulate_data(perturbed, phantom, manifest.noise))
    logging.info(
        "simulated %s data of a %s phantom (epsilon %g, gamma %g)",
        "two-sided" if manifest.two_sided else "one-sided",
        manifest.phantom.kind,
        manifest.noise.epsilon,
        manifest.noise.gamma,
    )

    if writer is not None:
        writer.write_provenance(manifest.run_name, manifest.to_flat_dict())
        writer.write_phantom(manifest.run_name, phantom)
        writer.write_sinograms(manifest.run_name, clean, noisy)
    return SimulationResult(phantom, operator, clean, noisy)


def load_simulation(
    manifest: ExperimentManifest, writer: RunWriter, store: Optional[OperatorStore] = None
) -> Optional[SimulationResult]:
    """
    Read the simulation outputs of a run if they were written for the same
    manifest; returns None otherwise.
    """
    run = manifest.run_name
    paths = [
        writer.file_path(run, name)
        for name in (
            writer_constants.FILE_PROVENANCE,
            writer_constants.FILE_PHANTOM + ".csv",
            writer_constants.FILE_SINOGRAM_CLEAN,
            writer_constants.FILE_DATA_NOISY,
        )
    ]
    if writer.dry_run or not all(os.path.exists(path) for path in paths):
        return None
    with open(paths[0], "r") as infile:
        if infile.read() != writer.format_provenance(manifest.to_flat_dict()):
            logging.info("simulation outputs of %s belong to another manifest, simulating again", run)
            return None
    phantom = read_image_csv(paths[1])
    clean = read_sinogram_csv(paths[2])
    noisy = read_sinogram_csv(paths[3])
    operator, _ = build_operator(manifest, store)
    logging.info("read simulation outputs of %s", run)
    return SimulationResult(phantom, operator, clean, noisy)


def make_problem(manifest: ExperimentManifest, simulation: SimulationResult) -> ReconProblem:
    return ReconProblem(
        operator=simulation.operator,
        data=simulation.noisy.flat(),
        grid=manifest.phantom.grid,
        sino_axes=simulation.noisy.axes,
        j=manifest.curve.j,
        s=manifest.curve.s,
        band=manifest.spectral.band,
        spectral=manifest.spectral.options,
    )


def reconstruct(
    manifest: ExperimentManifest, simulation: SimulationResult, writer: Optional[RunWriter] = None
) -> Dict[str, object]:
    """
    Run the reconstruction method of a manifest on simulated data.

    The data were simulated with the perturbed operator, the method sees
    the unperturbed one. With the sweep enabled the weight with the
    smallest error is used.

    Parameters
    ----------
        manifest : ExperimentManifest
            Experiment definition.

        simulation : SimulationResult
            Phantom, operator and data.

        writer : RunWriter
            Writes reconstruction, iteration log and metrics if given.

    Returns
    -------
    Metrics of the run: delta, reflection correlation, iterations,
    runtime, flag and the weight used.

    """

    method = ReconstructionMethodFactory.get_method(manifest.method)
    problem = make_problem(manifest, simulation)
    cfg = manifest.recon
    started = time.perf_counter()
    if manifest.sweep.enabled and manifest.method != "spectral":
        table, best = lambda_sweep(method, problem, simulation.phantom, cfg, manifest.sweep.lambdas)
        cfg = dataclasses.replace(cfg, lam=best)
        if writer is not None:
            writer.write_sweep(manifest.run_name, table)
    result = method.reconstruct(problem, cfg)
    runtime = time.perf_counter() - started

    metrics = {
        "run": manifest.run_name,
        "method": manifest.method,
        "lambda": cfg.lam,
        "delta": delta_error(result.image, simulation.phantom),
        "reflection_correlation": reflection_correlation(result.image, simulation.phantom),
        "iterations": result.iterations,
        "runtime": runtime,
        "flag": result.flag,
    }
    logging.info(
        "%s: delta %.4f with lambda %.3e after %d iterations (%s)",
        manifest.run_name,
        metrics["delta"],
        cfg.lam,
        result.iterations,
        result.flag,
    )
    if writer is not None:
        writer.write_reconstruction(manifest.run_name, result.image)
        writer.write_iterations(manifest.run_name, result.log)
        writer.write_metrics(manifest.run_name, metrics)
    return metrics


def run_experiment(
    manifest: ExperimentManifest, writer: Optional[RunWriter] = None, store: Optional[OperatorStore] = None
) -> Dict[str, object]:
    """
    Reconstruct a run, reusing its simulation outputs when they match the manifest.
    """
    simulation = load_simulation(manifest, writer, store) if writer is not None else None
    if simulation is None:
        simulation = simulate(manifest, writer, store)
    return reconstruct(manifest, simulation, writer)


def sweep(
    manifest: ExperimentManifest, writer: Optional[RunWriter] = None, store: Optional[OperatorStore] = None
) -> Tuple[pd.DataFrame, float]:
    """
    Sweep the regularization weights of a manifest against its phantom.

    Returns
    -------
    Sweep table and the weight with the smallest error.

    """

    simulation = load_simulation(manifest, writer, store) if writer is not None else None
    if simulation is None:
        simulation = simulate(manifest, writer, store)
    method = ReconstructionMethodFactory.get_method(manifest.method)
    table, best = lambda_sweep(
        method, make_problem(manifest, simulation), simulation.phantom, manifest.recon, manifest.sweep.lambdas
    )
    if writer is not None:
        writer.write_sweep(manifest.run_name, table)
    return table, best


def default_experiment_set(base: ExperimentManifest) -> List[ExperimentManifest]:
    """
    The 16 runs {annulus, ellipses} x {j = 0, 1} x {gamma = 0.01, 0.05} x
    {cgls, tv} derived from a base manifest, each with the weight sweep.
    """

    manifests = []
    for kind in TABLE_PHANTOMS:
        for j in TABLE_FAMILIES:
            for gamma in TABLE_NOISE_LEVELS:
                for method in TABLE_METHODS:
                    payload = base.to_payload()
                    payload["phantom"]["kind"] = kind
                    payload["curve"].update({"kind": None, "j": j, "q": 1, "family": "ellipse", "params": {}})
                    payload["noise"]["gamma"] = gamma
                    payload["method"] = method
                    payload["run_name"] = None
                    payload["operator"]["two_sided"] = None
                    payload["sweep"]["enabled"] = True
                    manifests.append(ExperimentManifest.from_payload(payload))
    return manifests


def run_tables(base: ExperimentManifest, writer: Optional[RunWriter] = None) -> pd.DataFrame:
    """
    Run the default experiment set and collect its errors in one table.

    Parameters
    ----------
        base : ExperimentManifest
            Manifest providing image size, noise seed, perturbation and
            solver settings.

        writer : RunWriter
            Writes every run and the summary table if given.

    Returns
    -------
    Table with one row per run.

    """

    store: OperatorStore = {}
    rows = []
    for manifest in default_experiment_set(base):
        logging.info("# Run %s", manifest.run_name)
        metrics = run_experiment(manifest, writer, store)
        rows.append(
            {
                "phantom": manifest.phantom.kind,
                "j": manifest.curve.j,
                "gamma": manifest.noise.gamma,
                **metrics,
            }
        )
    tables = pd.DataFrame(rows)
    summary = tables.pivot_table(index=["phantom", "method"], columns=["j", "gamma"], values="delta")
    logging.info("errors of the experiment set:\n%s", summary.to_string(float_format=lambda v: f"{v:.2f}"))
    if writer is not None:
        writer.write_tables(tables)
    return tables


def synthetic_profile(x: np.ndarray) -> np.ndarray:
    """
    Smooth positive profile used when no data file is given.
    """
    return 2.0 + np.sin(3.0 * x)


def invert_abel(
    family: KernelFamily,
    grid: Grid1D,
    options: Optional[AbelSolveOptions] = None,
    data_path: Optional[str] = None,
    output_path: Optional[str] = None,
    dry_run: bool = False,
) -> Tuple[pd.DataFrame, float]:
    """
    Solve the Abel equation of a kernel family for a data profile.

    Parameters
    ----------
        family : KernelFamily
            Named kernel and its parameters.

        grid : Grid1D
            Grid of data and solution.

        options : AbelSolveOptions
            Solver options; REFINE_STEPS defect correction steps if omitted.

        data_path : str
            CSV file with the data; synthetic data of a smooth profile are
            used if omitted.

        output_path : str
            CSV file receiving p, f, g and the forward applied solution.

        dry_run : bool
            Do not write the output file.

    Returns
    -------
    Profile table and the relative residual of the forward applied solution.

    Raises
    ------
    KernelValidationError
        If the kernel fails the solvability conditions on the grid.

    """

    spec = build_kernel_family(family)
    report = validate_kernel(spec, grid)
    if not report.ok:
        logging.error(report.to_text())
        raise KernelValidationError(f"kernel {spec.name} fails the solvability conditions", report)
    logging.info("kernel %s: %s", spec.name, report.to_text())
    if options is None:
        options = AbelSolveOptions(refine_steps=REFINE_STEPS)

    if data_path:
        g = read_profile_csv(data_path, grid)
    else:
        logging.info("no data file given, using synthetic data")
        g = abel_forward_apply(spec, synthetic_profile(grid.samples()), grid)
    f = abel_solve(spec, g, grid, options)
    fitted = abel_forward_apply(spec, f, grid)
    scale = np.linalg.norm(g)
    residual = float(np.linalg.norm(fitted - g) / (scale if scale > 0 else 1.0))
    logging.info("relative residual of the forward applied solution: %.3e", residual)

    columns = {"f": f, "g": g, "g_fit": fitted}
    if output_path:
        frame = write_profile_csv(output_path, grid, columns, dry_run)
        logging.info("wrote solution to %s", output_path)
    else:
        frame = write_profile_csv("", grid, columns, dry_run=True)
    return frame, residual


def dump_kernel_file(family: KernelFamily, grid: Grid1D, path: str, dry_run: bool = False) -> Optional[pd.DataFrame]:
    """
    Write the kernel values of a family on the triangle of a grid.
    """
    spec = build_kernel_family(family)
    if dry_run:
        logging.info("Dry-run, not writing %s", path)
        return None
    return dump_kernel(spec, grid, path)
