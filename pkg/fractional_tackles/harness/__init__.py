"""Synthetic plays with known ground truth and brute-force oracles."""

__all__ = [
    "oracle",
    "synthetic",
]
