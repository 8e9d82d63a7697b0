"""Brute-force reference for windows, window values and player credits.

Everything here is plain Python over ``TrackingFrame`` records, written
frame by frame so it can be compared against the vectorized pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from models.entities import TrackingFrame

EPSILON = 1e-6


@dataclass
class OracleWindow:
    window_index: int
    start_frame: int
    end_frame: int
    defenders: List[List[int]]
    v_start: float
    v_end: float
    v_pre: float
    v_post: float
    peak_inside: bool
    w: float = 0.0
    case: str = "plain"
    credits: Dict[int, float] = field(default_factory=dict)
    frames_involved: Dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, object]:
        return {
            "windowIndex": self.window_index,
            "startFrame": self.start_frame,
            "endFrame": self.end_frame,
            "defenders": self.defenders,
            "vStart": self.v_start,
            "vEnd": self.v_end,
            "vPre": self.v_pre,
            "vPost": None if self.v_post == -math.inf else self.v_post,
            "prePeakInsideWindow": self.peak_inside,
            "w": self.w,
            "caseTag": self.case,
        }


def window_value_reference(
    v_start: float,
    v_end: float,
    v_pre: float,
    v_post: float,
    peak_inside: bool,
    epsilon: float = EPSILON,
) -> Tuple[float, str]:
    """Apply the valuation rules one at a time, first match wins."""
    clamped_start = v_start if v_start > 0 else 0.0
    clamped_end = v_end if v_end > 0 else 0.0
    clamped_post = v_post if v_post > 0 else 0.0

    if v_pre <= epsilon:
        return 0.0, "degeneratePeak"

    if peak_inside:
        a = v_pre if v_pre > 0 else 0.0
    else:
        a = clamped_start

    if clamped_post >= v_pre:
        return 0.0, "fullRecovery"

    if clamped_end <= clamped_post and clamped_post < v_pre:
        b = clamped_post
        case = "partialRecovery"
    else:
        b = clamped_end
        case = "peakInside" if peak_inside else "plain"

    ratio = (a - b) / v_pre
    if ratio < 0:
        ratio = 0.0
    if ratio > 1:
        ratio = 1.0
    return ratio, case


def scan_windows(inside: Sequence[List[int]]) -> List[Tuple[int, int]]:
    """Index spans (inclusive) of consecutive positions with a nonempty defender list."""
    spans: List[Tuple[int, int]] = []
    start: Optional[int] = None
    for i, present in enumerate(inside):
        if present and start is None:
            start = i
        elif not present and start is not None:
            spans.append((start, i - 1))
            start = None
    if start is not None:
        spans.append((start, len(inside) - 1))
    return spans


def oracle_credits(
    frames: Sequence[TrackingFrame],
    d: float,
    *,
    ball_carrier_id: int,
    defensive_team: str,
    snap_frame: int,
    end_frame: int,
    epsilon: float = EPSILON,
) -> List[OracleWindow]:
    """Windows, values and per-player credits for one standardized play."""
    by_frame: Dict[int, List[TrackingFrame]] = {}
    for rec in frames:
        by_frame.setdefault(rec.frame_id, []).append(rec)

    velocity: List[float] = []
    close: List[List[int]] = []
    frame_ids: List[int] = []
    for frame_id in range(snap_frame, end_frame + 1):
        records = by_frame.get(frame_id, [])
        carrier = [r for r in records if r.nfl_id == ball_carrier_id]
        if not carrier:
            return []
        c = carrier[0]
        velocity.append(c.s * math.sin(math.radians(c.dir)))
        near = []
        for r in records:
            if r.nfl_id is None or r.club != defensive_team:
                continue
            if math.hypot(r.x - c.x, r.y - c.y) <= d:
                near.append(r.nfl_id)
        close.append(sorted(near))
        frame_ids.append(frame_id)

    windows: List[OracleWindow] = []
    for j, (s, e) in enumerate(scan_windows(close), start=1):
        peak_before = max(velocity[: s + 1])
        peak_through = max(velocity[: e + 1])
        after = velocity[e + 1:]
        win = OracleWindow(
            window_index=j,
            start_frame=frame_ids[s],
            end_frame=frame_ids[e],
            defenders=[list(close[t]) for t in range(s, e + 1)],
            v_start=velocity[s],
            v_end=velocity[e],
            v_pre=peak_through if peak_through > peak_before else peak_before,
            v_post=max(after) if after else -math.inf,
            peak_inside=peak_through > peak_before,
        )
        win.w, win.case = window_value_reference(
            win.v_start, win.v_end, win.v_pre, win.v_post, win.peak_inside, epsilon
        )
        n_frames = e - s + 1
        for present in win.defenders:
            for k in present:
                win.credits[k] = win.credits.get(k, 0.0) + win.w / n_frames / len(present)
                win.frames_involved[k] = win.frames_involved.get(k, 0) + 1
        windows.append(win)
    return windows


def credit_rows(play_key: str, windows: Sequence[OracleWindow]) -> List[Dict[str, object]]:
    return [
        {
            "playKey": play_key,
            "windowIndex": win.window_index,
            "defenderId": k,
            "wPlayer": win.credits[k],
            "framesInvolved": win.frames_involved[k],
        }
        for win in windows
        for k in sorted(win.credits)
    ]


__all__ = [
    "OracleWindow",
    "window_value_reference",
    "scan_windows",
    "oracle_credits",
    "credit_rows",
]
