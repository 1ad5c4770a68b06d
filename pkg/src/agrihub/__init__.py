"""agrihub: a self-contained semantic data platform for agricultural data."""

__version__ = "0.1.0"
