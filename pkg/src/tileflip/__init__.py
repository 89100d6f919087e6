"""Random sampling of tilings by two sizes of squares via local flip chains."""

__version__ = "0.1.0"
