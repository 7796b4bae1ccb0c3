#!/usr/bin/env python3
"""
🚀 KREIN COMMAND-LINE RUNNER
============================================================
krein solve|split|sweep|wavefunction --config <run.json>
      [--out <path>] [--quad-order N] [--tol T]
      [--log-level LEVEL] [--threads N] [--settings <yaml>]

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
Failures are reported on stderr as one JSON line.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional

from ..utils.errors import ConfigError, KreinError, ModelError
from ..utils.logging_setup import setup_logging
from ..utils.settings import DEFAULT_SETTINGS_FILE, load_settings
from .commands import cmd_solve, cmd_split, cmd_sweep, cmd_wavefunction, write_csv, write_json
from .config import RunConfig, parse_config

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', required=True, help='Run document (JSON)')
    common.add_argument('--out', help='Write the report to this file instead of stdout')
    common.add_argument('--quad-order', type=int, help='Gauss order for curve quadrature')
    common.add_argument('--tol', type=float, help='Relative tolerance of the root searches')
    common.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Console log level (default from settings)')
    common.add_argument('--threads', type=int, help='Worker threads for sweeps (default: KREIN_THREADS)')
    common.add_argument('--settings', default=DEFAULT_SETTINGS_FILE, help='Runtime settings (YAML)')

    parser = argparse.ArgumentParser(prog='krein',
                                     description="🔷 Bound states and tunneling splittings of δ-interactions")
    commands = parser.add_subparsers(dest='command', required=True)
    commands.add_parser('solve', parents=[common], help='Bound-state energies, eigenvectors, normalizations')
    commands.add_parser('split', parents=[common], help='Perturbative tunneling shifts with oracles')
    commands.add_parser('sweep', parents=[common], help='Exact vs first-order splitting table (CSV)')
    commands.add_parser('wavefunction', parents=[common], help='Wavefunction on a grid (CSV)')
    return parser


def _fail(error: Exception, exit_code: int, logger) -> int:
    logger.error(f"❌ {type(error).__name__}: {error}")
    payload = {'error': type(error).__name__, 'message': str(error), 'exit_code': exit_code}
    sys.stderr.write(json.dumps(payload, ensure_ascii=False) + '\n')
    sys.stderr.flush()
    return exit_code


def _read_config(path: str, settings: dict) -> RunConfig:
    try:
        text = Path(path).read_text(encoding='utf-8')
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"cannot read run document: {e}", path) from None
    return parse_config(text, path, settings['numerics'])


def run(command: str, config: RunConfig, threads: int) -> None:
    """Execute one command and emit its output"""
    handlers: Dict[str, Callable[[], None]] = {
        'solve': lambda: write_json(cmd_solve(config), config.output.path),
        'split': lambda: write_json(cmd_split(config), config.output.path),
        'sweep': lambda: write_csv(cmd_sweep(config, threads), config.output.path),
        'wavefunction': lambda: write_csv(cmd_wavefunction(config), config.output.path),
    }
    handlers[command]()


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point; returns the process exit code"""
    args = build_parser().parse_args(argv)
    settings = load_settings(args.settings)
    logger = setup_logging(settings['logging'], args.log_level)
    threads = args.threads if args.threads and args.threads > 0 else settings['parallel']['threads']

    try:
        config = _read_config(args.config, settings)
        config = config.with_overrides(quad_order=args.quad_order, tol=args.tol, out=args.out)
        logger.info(f"🚀 krein {args.command} --config {args.config}")
        run(args.command, config, threads)
    except (ConfigError, ModelError) as e:
        return _fail(e, EXIT_CONFIG, logger)
    except KreinError as e:
        return _fail(e, EXIT_NUMERICAL, logger)

    logger.info(f"✅ krein {args.command} completed")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
