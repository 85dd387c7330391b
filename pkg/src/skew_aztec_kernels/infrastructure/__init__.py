"""Infrastructure layer: configuration and result files."""
