"""Contact threshold calibration and contact-window detection."""

__all__ = [
    "calibration",
    "detection",
]
