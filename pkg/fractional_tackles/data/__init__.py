"""Tracking data loading, validation and standardization."""

__all__ = [
    "tracking_data",
]
