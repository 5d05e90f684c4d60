"""Large-scale isoperimetry on metric measure graphs."""

__version__ = "0.1.0"
