# This file makes config directory a Python package