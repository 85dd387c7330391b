"""Application use cases for skew-aztec-kernels."""
