"""Bundled example pair sets with their expected results."""
