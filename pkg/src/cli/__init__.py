"""Command-line surface: run documents, commands and the krein runner"""

from .commands import (cmd_solve, cmd_split, cmd_sweep, cmd_wavefunction, render_csv, render_json,
                       sweep_point, write_csv, write_json)
from .config import (NumericsConfig, OutputConfig, RunConfig, SolveConfig, SplitConfig, SweepConfig,
                     WavefunctionConfig, parse_config)
from .runner import build_parser, main

__all__ = [
    "cmd_solve", "cmd_split", "cmd_sweep", "cmd_wavefunction", "render_csv", "render_json",
    "sweep_point", "write_csv", "write_json",
    "NumericsConfig", "OutputConfig", "RunConfig", "SolveConfig", "SplitConfig", "SweepConfig",
    "WavefunctionConfig", "parse_config",
    "build_parser", "main",
]
