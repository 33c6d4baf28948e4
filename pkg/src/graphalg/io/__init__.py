"""File formats, DOT output and bundled fixtures."""
