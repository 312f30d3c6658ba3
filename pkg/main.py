#!/usr/bin/env python3
"""
🔁 Even Cycles - command line entry point

    python main.py find-cycle graph.txt --k 3
    python main.py ex --n 7 --k 2
"""
import sys
import os

# Add project root to Python path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
