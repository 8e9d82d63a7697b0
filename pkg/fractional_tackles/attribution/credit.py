from __future__ import annotations

from typing import Dict, List, Tuple

from models.entities import ContactWindow, FrameCredit, PlayerWindowCredit, WindowValue, play_key_str
from utils.errors import InvariantViolation


def attribute(
    window: ContactWindow, value: WindowValue
) -> Tuple[List[FrameCredit], List[PlayerWindowCredit]]:
    """Split ``value.w`` equally across the window's frames, then across each frame's defenders.

    Player totals are summed in frame order. Player credits come back sorted by defender id.
    """
    if value.play_key != window.play_key or value.window_index != window.window_index:
        raise InvariantViolation(
            f"value for window {value.window_index} applied to window {window.window_index} "
            f"of play {play_key_str(window.play_key)}"
        )

    w_frame = value.w / window.T
    frame_credits: List[FrameCredit] = []
    totals: Dict[int, float] = {}
    involved: Dict[int, int] = {}

    for frame_id, defenders in zip(window.frame_ids, window.per_frame_defenders):
        if not defenders:
            raise InvariantViolation(
                f"empty defender set at frame {frame_id} of play {play_key_str(window.play_key)}"
            )
        share = w_frame / len(defenders)
        shares = {k: share for k in sorted(defenders)}
        for k in shares:
            totals[k] = totals.get(k, 0.0) + share
            involved[k] = involved.get(k, 0) + 1
        frame_credits.append(
            FrameCredit(
                play_key=window.play_key,
                window_index=window.window_index,
                frame_id=frame_id,
                w_frame=w_frame,
                defender_shares=shares,
            )
        )

    player_credits = [
        PlayerWindowCredit(
            play_key=window.play_key,
            window_index=window.window_index,
            defender_id=k,
            w_player=totals[k],
            frames_involved=involved[k],
        )
        for k in sorted(totals)
    ]
    return frame_credits, player_credits


__all__ = ["attribute"]
