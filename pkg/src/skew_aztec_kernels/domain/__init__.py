"""Domain layer: value models, exceptions and numerical services."""
