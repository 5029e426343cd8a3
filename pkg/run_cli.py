#!/usr/bin/env python3
"""
Development launcher for semifix

Runs the command line from a source checkout without installing the package.
"""

import sys

from semifix.main import main

if __name__ == "__main__":
    sys.exit(main())
