"""Division of window value across frames and defenders."""

__all__ = [
    "credit",
]
