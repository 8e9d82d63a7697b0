from __future__ import annotations

from collections import Counter
from typing import Sequence

import numpy as np

from models.entities import ContactWindow, WindowSummary
from utils.config import settings

DURATION_BIN_SECONDS = 0.5


def window_summaries(windows: Sequence[ContactWindow]) -> WindowSummary:
    """Duration histogram (seconds), windows per play and defenders per window."""
    if not windows:
        return WindowSummary(
            window_count=0,
            mean_duration=0.0,
            duration_bin_edges=(),
            duration_counts=(),
            windows_per_play={},
            defenders_per_window={},
        )

    durations = np.array([w.T for w in windows], dtype=float) / settings.FRAME_RATE_HZ
    top = np.ceil(durations.max() / DURATION_BIN_SECONDS) * DURATION_BIN_SECONDS
    edges = np.arange(0.0, top + DURATION_BIN_SECONDS / 2, DURATION_BIN_SECONDS)
    if edges.size < 2:
        edges = np.array([0.0, DURATION_BIN_SECONDS])
    counts, edges = np.histogram(durations, bins=edges)

    per_play = Counter(Counter(w.play_key for w in windows).values())
    per_window = Counter(len(w.defenders) for w in windows)
    return WindowSummary(
        window_count=len(windows),
        mean_duration=float(durations.mean()),
        duration_bin_edges=tuple(float(e) for e in edges),
        duration_counts=tuple(int(c) for c in counts),
        windows_per_play=dict(sorted(per_play.items())),
        defenders_per_window=dict(sorted(per_window.items())),
    )


__all__ = ["window_summaries"]
