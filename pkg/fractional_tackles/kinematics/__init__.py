"""End-zone directed velocity and ball-carrier tracks."""

__all__ = [
    "velocity",
]
