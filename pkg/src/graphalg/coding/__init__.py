"""Coding graphs, splitting and synchronization."""
