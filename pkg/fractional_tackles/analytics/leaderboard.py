"""Per-defender aggregation of fractional tackles and box-score joins."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from models.entities import (
    BoxScore,
    PlayMeta,
    PlayResult,
    PlayerAggregate,
    PlayerMeta,
    PositionGroup,
    play_key_str,
    position_group,
)
from utils.errors import DatasetError

logger = logging.getLogger(__name__)

PlayFilter = Callable[[PlayMeta], bool]
SORT_KEYS = ("total", "average")


@dataclass
class PlayerTally:
    """Mergeable per-defender accumulator."""

    plays: int = 0
    windows: int = 0
    total_ft: float = 0.0
    tackles: int = 0
    assists: int = 0
    forced_fumbles: int = 0
    missed_tackles: int = 0

    def merge(self, other: "PlayerTally") -> "PlayerTally":
        return PlayerTally(
            plays=self.plays + other.plays,
            windows=self.windows + other.windows,
            total_ft=self.total_ft + other.total_ft,
            tackles=self.tackles + other.tackles,
            assists=self.assists + other.assists,
            forced_fumbles=self.forced_fumbles + other.forced_fumbles,
            missed_tackles=self.missed_tackles + other.missed_tackles,
        )


def play_tallies(
    result: PlayResult,
    boxscores: Mapping[Tuple[int, int, int], BoxScore],
) -> Dict[int, PlayerTally]:
    """Contribution of one play to each of its defenders."""
    tallies = {k: PlayerTally(plays=1) for k in sorted(result.defender_ids)}
    for credit in result.player_credits:
        tally = tallies.get(credit.defender_id)
        if tally is None:
            raise DatasetError(
                f"credit for defender {credit.defender_id} who is not on defense in play "
                f"{play_key_str(result.key)}"
            )
        if credit.frames_involved > 0:
            tally.windows += 1
        tally.total_ft += credit.w_player

    game_id, play_id = result.key
    for k, tally in tallies.items():
        box = boxscores.get((game_id, play_id, k))
        if box is None:
            continue
        tally.tackles += box.tackle
        tally.assists += box.assist
        tally.forced_fumbles += box.forced_fumble
        tally.missed_tackles += box.missed_tackle
    return tallies


def merge_tallies(parts: Iterable[Mapping[int, PlayerTally]]) -> Dict[int, PlayerTally]:
    merged: Dict[int, PlayerTally] = {}
    for part in parts:
        for k in sorted(part):
            merged[k] = merged[k].merge(part[k]) if k in merged else part[k]
    return merged


def aggregate(
    results: Sequence[PlayResult],
    boxscores: Mapping[Tuple[int, int, int], BoxScore],
    players: Mapping[int, PlayerMeta],
    play_filter: Optional[PlayFilter] = None,
) -> List[PlayerAggregate]:
    """One row per defender on defense in at least one selected play, sorted by total descending."""
    selected = sorted(
        (r for r in results if play_filter is None or play_filter(r.meta)),
        key=lambda r: r.key,
    )
    merged = merge_tallies(play_tallies(r, boxscores) for r in selected)

    unknown = sorted(k for k, t in merged.items() if t.windows and k not in players)
    if unknown:
        raise DatasetError(f"credits reference defender id(s) missing from players.csv: {unknown[:10]}")

    rows: List[PlayerAggregate] = []
    for k in sorted(merged):
        tally = merged[k]
        meta = players.get(k)
        rows.append(
            PlayerAggregate(
                defender_id=k,
                display_name=meta.display_name if meta else "",
                position=meta.position if meta else "",
                plays=tally.plays,
                windows=tally.windows,
                total_ft=tally.total_ft,
                avg_ft=tally.total_ft / tally.plays,
                combined_tackles=tally.tackles + tally.assists / 2.0,
                tackles=tally.tackles,
                assists=tally.assists,
                forced_fumbles=tally.forced_fumbles,
                missed_tackles=tally.missed_tackles,
            )
        )
    rows.sort(key=lambda a: (-a.total_ft, a.defender_id))
    logger.info("Aggregated %d defenders over %d plays", len(rows), len(selected))
    return rows


def leaderboard(
    aggregates: Sequence[PlayerAggregate],
    *,
    top: Optional[int] = None,
    min_plays: int = 0,
    sort: str = "total",
) -> List[PlayerAggregate]:
    if sort not in SORT_KEYS:
        raise ValueError(f"sort must be one of {SORT_KEYS}, got {sort!r}")
    rows = [a for a in aggregates if a.plays >= min_plays]
    if sort == "total":
        rows.sort(key=lambda a: (-a.total_ft, a.defender_id))
    else:
        rows.sort(key=lambda a: (-a.avg_ft, a.defender_id))
    return rows if top is None else rows[: max(top, 0)]


def position_summary(aggregates: Sequence[PlayerAggregate]) -> List[Dict[str, Any]]:
    """Player count and mean total/average fractional tackles per position group."""
    buckets: Dict[str, List[PlayerAggregate]] = {}
    for agg in aggregates:
        group = position_group(agg.position)
        buckets.setdefault(group.value if group else "other", []).append(agg)

    order = [g.value for g in PositionGroup if g is not PositionGroup.OVERALL] + ["other"]
    return [
        {
            "group": name,
            "players": len(buckets[name]),
            "meanTotalFT": float(np.mean([a.total_ft for a in buckets[name]])),
            "meanAvgFT": float(np.mean([a.avg_ft for a in buckets[name]])),
        }
        for name in order
        if buckets.get(name)
    ]


def identity_line_summary(aggregates: Sequence[PlayerAggregate]) -> Dict[str, Any]:
    """How many players sit below the y = x line of fractional vs combined tackles."""
    if not aggregates:
        return {"players": 0, "belowShare": 0.0, "meanGap": 0.0}
    total = np.array([a.total_ft for a in aggregates])
    combined = np.array([a.combined_tackles for a in aggregates])
    return {
        "players": len(aggregates),
        "belowShare": float(np.mean(total < combined)),
        "meanGap": float(np.mean(combined - total)),
    }


def _play_statistic(box: Optional[BoxScore]) -> str:
    if box is None:
        return ""
    labels = [
        label
        for label, flag in (
            ("Tackle", box.tackle),
            ("Assist", box.assist),
            ("Forced fumble", box.forced_fumble),
            ("Missed tackle", box.missed_tackle),
        )
        if flag
    ]
    return "/".join(labels)


def play_credit_table(
    result: PlayResult,
    players: Mapping[int, PlayerMeta],
    boxscores: Mapping[Tuple[int, int, int], BoxScore],
) -> List[Dict[str, Any]]:
    """Per-play summary: one row per defender per window, with the box-score statistic."""
    game_id, play_id = result.key
    rows = []
    for credit in sorted(result.player_credits, key=lambda c: (c.window_index, c.defender_id)):
        meta = players.get(credit.defender_id)
        rows.append(
            {
                "defenderId": credit.defender_id,
                "displayName": meta.display_name if meta else "",
                "position": meta.position if meta else "",
                "windowIndex": credit.window_index,
                "fractionalTackles": credit.w_player,
                "statistic": _play_statistic(boxscores.get((game_id, play_id, credit.defender_id))),
            }
        )
    return rows


__all__ = [
    "PlayerTally",
    "SORT_KEYS",
    "play_tallies",
    "merge_tallies",
    "aggregate",
    "leaderboard",
    "position_summary",
    "identity_line_summary",
    "play_credit_table",
]
