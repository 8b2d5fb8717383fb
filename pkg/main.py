#!/usr/bin/env python3
"""
vfkit - Main Entry Point.

Runs the command-line interface without installing the package:

    python main.py validate app/data/fixtures/z2_z3.json
    python main.py intersect app/data/fixtures/f2_rose.json h_mixed k_mixed
"""
import os
import sys

# Ensure project root is in path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from app.cli import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
