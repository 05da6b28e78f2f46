"""Space-filling design construction and evaluation package."""

__version__ = "0.1.0"
