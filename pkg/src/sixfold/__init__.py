"""Order-6 symmetries of marked surfaces, their curves, and Dehn twist certificates."""

__version__ = "0.1.0"
