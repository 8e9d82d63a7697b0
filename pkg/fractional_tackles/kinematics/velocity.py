from __future__ import annotations

import logging
from typing import Dict, Union

import numpy as np

from models.entities import BallCarrierTrack, StandardizedPlay, play_key_str
from utils.config import settings
from utils.errors import TrackError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def velocity_toward_endzone(s: ArrayLike, direction: ArrayLike) -> ArrayLike:
    """Component of the velocity along +x.

    ``direction`` is in degrees clockwise from +y, so the x component is
    ``s * sin(dir)``. Works on scalars and numpy arrays alike.
    """
    out = np.asarray(s, dtype=float) * np.sin(np.deg2rad(np.asarray(direction, dtype=float)))
    return float(out) if out.ndim == 0 else out


def build_track(play: StandardizedPlay) -> BallCarrierTrack:
    """Ball-carrier frames from snap to end of play, one row per frame."""
    frames = play.frames
    carrier_id = play.meta.ball_carrier_id
    span = (frames["frameId"] >= play.snap_frame) & (frames["frameId"] <= play.end_frame)
    rows = frames.loc[span & (frames["nflId"] == carrier_id)].sort_values("frameId")

    frame_ids = rows["frameId"].to_numpy(dtype=np.int64)
    expected = np.arange(play.snap_frame, play.end_frame + 1, dtype=np.int64)
    if frame_ids.shape != expected.shape or not np.array_equal(frame_ids, expected):
        missing = sorted(set(expected.tolist()) - set(frame_ids.tolist()))
        raise TrackError(
            f"play {play_key_str(play.key)}: ball-carrier {carrier_id} missing at frames {missing[:10]}"
        )

    v_toward = velocity_toward_endzone(rows["s"].to_numpy(dtype=float), rows["dir"].to_numpy(dtype=float))
    return BallCarrierTrack(
        play_key=play.key,
        frame_ids=frame_ids,
        x=rows["x"].to_numpy(dtype=float),
        y=rows["y"].to_numpy(dtype=float),
        v_toward=np.atleast_1d(np.asarray(v_toward, dtype=float)),
    )


def finite_difference_velocity(track: BallCarrierTrack) -> np.ndarray:
    """Positional x-velocity (yd/s): central differences inside, one-sided at the ends."""
    if track.T < 2:
        return np.full(track.T, np.nan)
    return np.gradient(track.x, 1.0 / settings.FRAME_RATE_HZ)


def velocity_gap(track: BallCarrierTrack) -> Dict[str, float]:
    """Mean and max absolute gap between provider-derived and positional velocity."""
    positional = finite_difference_velocity(track)
    gap = np.abs(track.v_toward - positional)
    if track.T < 2 or not np.isfinite(gap).any():
        return {"mean": float("nan"), "max": float("nan")}
    result = {"mean": float(np.nanmean(gap)), "max": float(np.nanmax(gap))}
    logger.debug("velocity gap for %s: %s", play_key_str(track.play_key), result)
    return result


__all__ = [
    "velocity_toward_endzone",
    "build_track",
    "finite_difference_velocity",
    "velocity_gap",
]
