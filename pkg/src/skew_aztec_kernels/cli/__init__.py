"""Command-line interface for skew-aztec-kernels."""
