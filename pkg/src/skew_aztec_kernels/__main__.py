"""Main entry point for skew-aztec-kernels package."""

from skew_aztec_kernels.cli.main import main

if __name__ == "__main__":
    main()
