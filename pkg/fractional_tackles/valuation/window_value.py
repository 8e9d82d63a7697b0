from __future__ import annotations

import math

from models.entities import CaseTag, ContactWindow, WindowValue, play_key_str
from utils.errors import WindowValueError

EPSILON_PEAK = 1e-6


def _check_landmarks(window: ContactWindow) -> None:
    finite = {"v_start": window.v_start, "v_end": window.v_end, "v_pre": window.v_pre}
    bad = [name for name, value in finite.items() if not math.isfinite(value)]
    # v_post may be -inf when the window ends the play
    if math.isnan(window.v_post) or window.v_post == math.inf:
        bad.append("v_post")
    if bad:
        raise WindowValueError(
            f"window {window.window_index} of play {play_key_str(window.play_key)}: "
            f"non-finite landmark(s) {bad}"
        )


def value_window(window: ContactWindow, epsilon: float = EPSILON_PEAK) -> WindowValue:
    """Fraction of peak end-zone velocity taken away during a contact window.

    Start, end and post velocities are clamped at zero; the peak is not. A peak
    at or below ``epsilon`` yields 0. Full recovery after the window yields 0.
    A partial recovery replaces the end velocity with the recovered one.
    """
    _check_landmarks(window)
    v_pre = window.v_pre

    def _value(w: float, tag: CaseTag) -> WindowValue:
        return WindowValue(play_key=window.play_key, window_index=window.window_index, w=w, case_tag=tag)

    if v_pre <= epsilon:
        return _value(0.0, CaseTag.DEGENERATE_PEAK)

    v_start = max(window.v_start, 0.0)
    v_end = max(window.v_end, 0.0)
    v_post = max(window.v_post, 0.0)

    start = max(v_pre, 0.0) if window.pre_peak_inside_window else v_start
    if v_post >= v_pre:
        return _value(0.0, CaseTag.FULL_RECOVERY)

    partial = v_end <= v_post < v_pre
    end = v_post if partial else v_end
    w = min(max((start - end) / v_pre, 0.0), 1.0)

    if partial:
        tag = CaseTag.PARTIAL_RECOVERY
    elif window.pre_peak_inside_window:
        tag = CaseTag.PEAK_INSIDE
    else:
        tag = CaseTag.PLAIN
    return _value(w, tag)


__all__ = ["EPSILON_PEAK", "value_window"]
