from __future__ import annotations

import logging
from typing import List, Tuple

import numpy as np

from models.entities import BallCarrierTrack, ContactWindow, DefenderPositions, StandardizedPlay

logger = logging.getLogger(__name__)


def defender_positions(play: StandardizedPlay, track: BallCarrierTrack) -> DefenderPositions:
    """Defensive-team coordinates as (T, K) arrays aligned with ``track``; NaN where absent."""
    frames = play.frames
    rows = frames.loc[
        (frames["club"].astype(str) == play.meta.defensive_team)
        & frames["nflId"].notna()
        & frames["frameId"].isin(track.frame_ids)
    ]
    if rows.empty:
        empty = np.empty((track.T, 0), dtype=float)
        return DefenderPositions(ids=(), x=empty, y=empty.copy())

    x = rows.pivot(index="frameId", columns="nflId", values="x").reindex(track.frame_ids)
    y = rows.pivot(index="frameId", columns="nflId", values="y").reindex(index=track.frame_ids, columns=x.columns)
    ids = tuple(int(c) for c in x.columns)
    return DefenderPositions(ids=ids, x=x.to_numpy(dtype=float), y=y.to_numpy(dtype=float))


def defender_distances(track: BallCarrierTrack, defenders: DefenderPositions) -> np.ndarray:
    """Euclidean ball-carrier to defender distances, shape (T, K); +inf where a defender is absent."""
    dist = np.hypot(defenders.x - track.x[:, None], defenders.y - track.y[:, None])
    return np.where(np.isnan(dist), np.inf, dist)


def nearest_distances(track: BallCarrierTrack, defenders: DefenderPositions) -> np.ndarray:
    dist = defender_distances(track, defenders)
    if dist.shape[1] == 0:
        return np.full(track.T, np.inf)
    return dist.min(axis=1)


def contact_runs(mask: np.ndarray) -> List[Tuple[int, int]]:
    """Maximal runs of True as inclusive (start, end) index pairs."""
    flags = np.asarray(mask, dtype=bool)
    if flags.size == 0:
        return []
    edges = np.diff(np.concatenate(([0], flags.astype(np.int8), [0])))
    starts = np.flatnonzero(edges == 1)
    ends = np.flatnonzero(edges == -1) - 1
    return [(int(s), int(e)) for s, e in zip(starts, ends)]


def detect_windows(
    track: BallCarrierTrack,
    defenders: DefenderPositions,
    d: float,
) -> List[ContactWindow]:
    """Contact windows of one play, in frame order.

    A window is a maximal run of frames with at least one defender within ``d``.
    ``v_pre`` scans from the first track frame; ``v_post`` looks strictly after
    the window and is ``-inf`` when the window ends the play.
    """
    within = defender_distances(track, defenders) <= d
    v = track.v_toward
    running_max = np.maximum.accumulate(v) if v.size else v
    ids = np.asarray(defenders.ids, dtype=np.int64)

    windows: List[ContactWindow] = []
    for j, (s, e) in enumerate(contact_runs(within.any(axis=1)), start=1):
        peak_to_start = float(running_max[s])
        peak_to_end = float(running_max[e])
        inside = peak_to_end > peak_to_start
        windows.append(
            ContactWindow(
                play_key=track.play_key,
                window_index=j,
                start_frame=int(track.frame_ids[s]),
                end_frame=int(track.frame_ids[e]),
                per_frame_defenders=tuple(
                    frozenset(int(k) for k in ids[within[t]]) for t in range(s, e + 1)
                ),
                v_start=float(v[s]),
                v_end=float(v[e]),
                v_pre=peak_to_end if inside else peak_to_start,
                v_post=float(v[e + 1:].max()) if e + 1 < v.size else float("-inf"),
                pre_peak_inside_window=inside,
            )
        )
    return windows


__all__ = [
    "defender_positions",
    "defender_distances",
    "nearest_distances",
    "contact_runs",
    "detect_windows",
]
