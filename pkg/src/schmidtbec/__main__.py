"""Entry point for schmidtbec when run as a module or via the console script."""

import argparse
import logging
import os
import sys
from typing import Optional, Sequence

from dotenv import find_dotenv, load_dotenv

from . import __version__
from .bench.commands import cmd_ground_state, cmd_scales, cmd_sweep, cmd_verify
from .core.config import ConfigError, ConfigurationManager, RunConfig
from .core.errors import NumericalError, SchmidtBecError
from .core.logging_config import LoggingConfig

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

logger = logging.getLogger("schmidtbec")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schmidtbec",
        description="Schmidt-decomposition model of anisotropic condensates: "
                    "analytic formulas, variational benchmark and 3D GP solver.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="run configuration JSON layered over config/")
    parser.add_argument("--config-dir", help="directory of per-section configuration files")
    parser.add_argument("--out", help="output path")
    parser.add_argument("--workers", type=int, help="worker processes for sweeps")
    parser.add_argument("--mem-cap", type=float, dest="mem_cap", help="memory cap in GiB")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("scales", help="critical atom numbers, expansion parameter and radii")
    sub.add_parser("sweep", help="run every enabled method over the atom-number sweep")
    gs = sub.add_parser("ground-state", help="relax one 3D ground state and store the field")
    gs.add_argument("-N", "--atom-number", type=float, required=True, dest="atom_number")
    verify = sub.add_parser("verify", help="check norm and symmetry of a stored field")
    verify.add_argument("path")
    return parser


def load_run_config(config_path: Optional[str], config_dir: Optional[str]) -> RunConfig:
    """Defaults, then config/ files, then ``--config``, all read strictly."""
    manager = ConfigurationManager(config_dir, strict=True)
    manager.load_all()
    if config_path:
        manager.load_run_file(config_path)
    run = manager.run_config()
    run.validate()
    return run


def _setup_logging(run: Optional[RunConfig], override: Optional[str]) -> None:
    section = run.logging if run is not None else None
    level = override or os.environ.get("SCHMIDTBEC_LOG_LEVEL") or (
        section.level if section else "INFO")
    LoggingConfig.setup_logging(
        log_level=level,
        log_to_console=True,
        log_to_file=bool(section and section.to_file),
        log_dir=section.log_dir if section else None,
        detailed_format=bool(section and section.detailed),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    # .env in the working directory; variables already set win
    load_dotenv(find_dotenv(usecwd=True))
    run: Optional[RunConfig] = None
    try:
        if args.command != "verify":
            run = load_run_config(args.config, args.config_dir)
        _setup_logging(run, args.log_level)

        if args.command == "scales":
            cmd_scales(run, args.out)
        elif args.command == "sweep":
            cmd_sweep(run, args.out, args.workers, args.mem_cap)
        elif args.command == "ground-state":
            cmd_ground_state(run, args.atom_number, args.out or "results/ground_state.fld",
                             args.mem_cap)
        elif args.command == "verify":
            if not cmd_verify(args.path).ok():
                return EXIT_NUMERICAL
        return EXIT_OK
    except ConfigError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as e:
        print(f"Numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (SchmidtBecError, ValueError) as e:
        print(f"Invalid input: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except KeyboardInterrupt:
        print("\nInterrupted by user.", file=sys.stderr)
        return EXIT_UNEXPECTED
    except Exception as e:
        logger.exception("unexpected failure")
        print(f"An error occurred: {e}", file=sys.stderr)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
