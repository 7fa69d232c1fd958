"""SkewForge - metric adjusted skew information and entanglement detection."""

__version__ = "0.1.0"
