#!/usr/bin/env python3
"""
Slant submersion verification engine
Command-line entry point
"""

import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
