#!/usr/bin/env python3
"""
🔷 KREIN - BOUND STATES OF SINGULAR INTERACTIONS
============================================================
Runner for the solve, split, sweep and wavefunction commands.

    python krein.py solve --config config/runs/solve_point1d.json
"""

import sys
from pathlib import Path

# Add project root to Python path
project_root = Path(__file__).resolve().parent
sys.path.insert(0, str(project_root))

from src.cli.runner import main

if __name__ == "__main__":
    sys.exit(main())
