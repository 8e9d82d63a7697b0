"""Window values from the ball-carrier velocity landmarks."""

__all__ = [
    "window_value",
]
