# This file makes src directory a Python package