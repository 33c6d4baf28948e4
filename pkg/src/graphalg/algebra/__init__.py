"""Leavitt path algebra arithmetic and polynomial unitaries."""
