#!/usr/bin/env python3
"""
prime-ratio-lab - Main Entry Point
"""

import sys
import os

# Add the repository root to path so `config` and `src` import
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.cli.app import main

if __name__ == '__main__':
    sys.exit(main())
