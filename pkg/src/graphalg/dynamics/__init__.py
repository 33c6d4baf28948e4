"""Infinite words, transducers and the path-space action."""
