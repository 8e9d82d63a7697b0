"""Fractional tackles: contact windows, window values and defender credit from tracking data."""

__all__ = [
    "analytics",
    "attribution",
    "data",
    "harness",
    "kinematics",
    "valuation",
    "windows",
]
