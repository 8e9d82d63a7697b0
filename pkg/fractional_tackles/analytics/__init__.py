"""Leaderboards, window summaries and validation statistics."""

__all__ = [
    "leaderboard",
    "summaries",
    "validation",
]
