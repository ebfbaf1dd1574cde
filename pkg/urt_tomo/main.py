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
Entry file for the URT tomography tool

"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

import urt_tomo.config_loader as urt_config
import urt_tomo.experiment_processing as urt_processing
import urt_tomo.selftest as urt_selftest
from urt_tomo.urt_abel.abel_solver import AbelSolveOptions
from urt_tomo.urt_model.errors import NumericalError
from urt_tomo.urt_model.types import Grid1D
from urt_tomo.urt_output_writer.run_writer import RunWriter
from urt_tomo.urt_spectral.families import KernelFamily

EXIT_SUCCESS = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

PACKAGE_DIR = os.path.dirname(os.path.abspath(__file__))
DEFAULT_CONFIG = os.path.join(PACKAGE_DIR, "config.json")
DEFAULT_VERSION_FILE = os.path.join(PACKAGE_DIR, "version.json")


class _ArgumentParser(argparse.ArgumentParser):
    """
    Argument parser reporting usage errors with exit code 1.
    """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_family_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--family", type=str, default="one", help="Name of the kernel family.")
    parser.add_argument("--alpha", type=float, default=-0.5, help="Exponent of the singular factor.")
    parser.add_argument("--j", type=int, default=0, choices=[0, 1], help="Orientation of the kernel.")
    parser.add_argument(
        "--param", action="append", default=[], metavar="KEY=VALUE", help="Further family parameter, repeatable."
    )
    parser.add_argument("--lo", type=float, default=1.0, help="Left end of the grid.")
    parser.add_argument("--hi", type=float, default=2.0, help="Right end of the grid.")
    parser.add_argument("--count", type=int, default=257, help="Number of grid samples.")


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(description="URT Tomography Tool")
    parser.add_argument("--dryrun", action="store_true", help="Dry-run mode will not write any files.")
    parser.add_argument(
        "-l",
        "--logfile",
        type=str,
        help="When a log file is set, then file logging is enabled.",
    )
    parser.add_argument("-c", "--config", type=str, help="Configuration file, JSON or key=value manifest.")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override a manifest key, e.g. recon.lambda=0.1; repeatable.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Verbose output")

    commands = parser.add_subparsers(dest="command", metavar="command")
    commands.required = True
    commands.add_parser("simulate", help="Simulate phantom and data of the configured run.")
    reconstruct = commands.add_parser("reconstruct", help="Reconstruct the configured run.")
    reconstruct.add_argument("-m", "--method", type=str, help="Reconstruction method, see list-methods.")
    commands.add_parser("sweep-lambda", help="Sweep the regularization weight of the configured run.")
    commands.add_parser("tables", help="Run the default experiment set of 16 runs.")
    selftest = commands.add_parser("selftest", help="Check the numerical invariants.")
    selftest.add_argument(
        "--check", dest="checks", action="append", metavar="NAME", help="Run only this check, repeatable."
    )
    commands.add_parser("list-methods", help="List all available reconstruction methods.")

    invert = commands.add_parser("invert-abel", help="Solve an Abel equation of a kernel family.")
    _add_family_arguments(invert)
    invert.add_argument("--data", type=str, help="CSV file with the data profile; synthetic data if omitted.")
    invert.add_argument("--output", type=str, help="CSV file receiving the solution.")
    invert.add_argument(
        "--solver", type=str, default="substitution", help="Second kind solver, substitution or neumann."
    )
    invert.add_argument("--smooth", action="store_true", help="Smooth the data before differentiating.")
    invert.add_argument(
        "--refine",
        type=int,
        default=urt_processing.REFINE_STEPS,
        help="Number of defect correction steps after the first solve.",
    )

    dump = commands.add_parser("dump-kernel", help="Write the kernel values of a family to a CSV file.")
    _add_family_arguments(dump)
    dump.add_argument("--output", type=str, default="kernel.csv", help="CSV file receiving the kernel values.")
    return parser


def _parse_args(argv: Optional[List[str]] = None):
    """
    Parses the given program arguments.

    Apart from parsing the program arguments, the function configures the
    logger used for outputs.

    Returns
    -------
    Parsed arguments.
    """

    arguments = _build_parser().parse_args(argv)

    # file logging configuration
    log_format = "[%(asctime)s] %(levelname)-8s %(name)-12s %(message)s"

    # Configurate logging level in dependency of the verbose flag
    logging_level = logging.INFO
    if arguments.verbose:
        logging_level = logging.DEBUG

    # switch between file and command line logging
    if arguments.logfile:
        try:
            # Test if log file can be created
            Path(arguments.logfile).touch()
            logging.basicConfig(filename=arguments.logfile, level=logging_level, format=log_format)
        except OSError as e:
            logging.error("Cannot create log file. Error: %s", e)
            sys.exit(EXIT_USAGE)
    else:
        # command line logging
        logging.basicConfig(level=logging_level, format=log_format)

    return arguments


def _load_config(args, extra_overrides: Optional[List[str]] = None) -> urt_config.ConfigLoader:
    logging.info("# Reading configuration")
    config_path = args.config if args.config else DEFAULT_CONFIG
    config_loader = urt_config.ConfigLoader(config_path)
    config_loader.apply_overrides(args.overrides)
    config_loader.apply_overrides(extra_overrides)
    logging.info("# Read configuration %s", config_path)
    return config_loader


def _make_writer(config_loader: urt_config.ConfigLoader, output_dir: str, dry_run: bool) -> RunWriter:
    version_file = config_loader.get_writer_config().version_file
    if not os.path.exists(version_file):
        version_file = DEFAULT_VERSION_FILE
    return RunWriter(version_fpath=version_file, output_dir=output_dir, dry_run=dry_run)


def _family_from_args(args) -> KernelFamily:
    params = {}
    for item in args.param:
        if "=" not in item:
            raise ValueError(f"family parameter '{item}' is not of the form key=value")
        key, value = item.split("=", 1)
        params[key.strip()] = urt_config.parse_value(value)
    return KernelFamily(family=args.family, alpha=args.alpha, j=args.j, params=params)


def _cmd_simulate(args) -> int:
    config_loader = _load_config(args)
    manifest = config_loader.get_manifest()
    writer = _make_writer(config_loader, manifest.output_dir, args.dryrun)
    logging.info("# Simulating data of run %s", manifest.run_name)
    urt_processing.simulate(manifest, writer)
    logging.info("# Simulated data of run %s", manifest.run_name)
    return EXIT_SUCCESS


def _cmd_reconstruct(args) -> int:
    config_loader = _load_config(args, [f"method={args.method}"] if args.method else None)
    manifest = config_loader.get_manifest()
    writer = _make_writer(config_loader, manifest.output_dir, args.dryrun)
    logging.info("# Reconstructing run %s with %s", manifest.run_name, manifest.method)
    metrics = urt_processing.run_experiment(manifest, writer)
    logging.info("# Reconstructed run %s", manifest.run_name)
    if args.verbose:
        print(f"delta {metrics['delta']:.4f} after {metrics['iterations']} iterations ({metrics['flag']})")
    return EXIT_SUCCESS


def _cmd_sweep(args) -> int:
    config_loader = _load_config(args)
    manifest = config_loader.get_manifest()
    writer = _make_writer(config_loader, manifest.output_dir, args.dryrun)
    logging.info("# Sweeping lambda for run %s", manifest.run_name)
    _, best = urt_processing.sweep(manifest, writer)
    logging.info("# Swept lambda, best lambda %.3e", best)
    return EXIT_SUCCESS


def _cmd_tables(args) -> int:
    config_loader = _load_config(args)
    base = config_loader.get_manifest()
    writer = _make_writer(config_loader, base.output_dir, args.dryrun)
    logging.info("# Running the default experiment set")
    urt_processing.run_tables(base, writer)
    logging.info("# Ran the default experiment set")
    return EXIT_SUCCESS


def _cmd_selftest(args) -> int:
    logging.info("# Running self test")
    report = urt_selftest.run_selftest(names=args.checks)
    print(urt_selftest.format_report(report))
    failed = report[report["status"] != "pass"]
    if len(failed) > 0:
        logging.error("self test failed: %s", ", ".join(failed["check"]))
        return EXIT_NUMERICAL
    logging.info("# Self test passed")
    return EXIT_SUCCESS


def _cmd_list_methods(args) -> int:
    urt_processing.list_methods()
    return EXIT_SUCCESS


def _cmd_invert_abel(args) -> int:
    family = _family_from_args(args)
    grid = Grid1D(args.lo, args.hi, args.count)
    options = AbelSolveOptions(method=args.solver, smooth=args.smooth, refine_steps=args.refine)
    logging.info("# Solving Abel equation of family %s", family.family)
    _, residual = urt_processing.invert_abel(family, grid, options, args.data, args.output, args.dryrun)
    logging.info("# Solved Abel equation, relative residual %.3e", residual)
    return EXIT_SUCCESS


def _cmd_dump_kernel(args) -> int:
    family = _family_from_args(args)
    grid = Grid1D(args.lo, args.hi, args.count)
    urt_processing.dump_kernel_file(family, grid, args.output, args.dryrun)
    return EXIT_SUCCESS


COMMANDS = {
    "simulate": _cmd_simulate,
    "reconstruct": _cmd_reconstruct,
    "sweep-lambda": _cmd_sweep,
    "tables": _cmd_tables,
    "selftest": _cmd_selftest,
    "list-methods": _cmd_list_methods,
    "invert-abel": _cmd_invert_abel,
    "dump-kernel": _cmd_dump_kernel,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main routine

    Returns
    -------
    Exit code: 0 on success, 1 on usage errors, 2 on numerical failures.
    """

    # argument parsing
    args = _parse_args(argv)

    logging.info("### URT Tomography Tool")

    # Show configuration
    if args.dryrun:
        logging.info("# Dry-run enabled.")
    if args.verbose:
        logging.info("# Verbose mode enabled.")

    try:
        exit_code = COMMANDS[args.command](args)
    except NumericalError as e:
        logging.error("Numerical failure: %s", e)
        exit_code = EXIT_NUMERICAL
    except (ValueError, LookupError, OSError) as e:
        logging.error("%s", e)
        exit_code = EXIT_USAGE

    logging.info("# Done")
    logging.info("###")
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
