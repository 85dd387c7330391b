"""Skew-Aztec Kernels.

Domino tilings of skew-Aztec rectangles: exact finite-size kernels by three
routes, the pre-limit kernel, the discrete tacnode kernel and the cusp-Airy kernel.
"""

from skew_aztec_kernels.cli.main import main

__version__ = "0.1.0"
__all__ = ["main"]
