"""Task offloading over LEO constellations via shortest paths on state graphs."""

__version__ = "0.1.0"
