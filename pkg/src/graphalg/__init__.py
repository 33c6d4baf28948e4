"""graphalg – polynomial endomorphisms of Leavitt path algebras, coding graphs and transducers."""

__version__ = "0.1.0"
