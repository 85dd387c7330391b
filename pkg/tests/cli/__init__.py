"""CLI layer tests."""
