from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Tuple

import numpy as np
import pandas as pd

# (gameId, playId)
PlayKey = Tuple[int, int]


def play_key_str(key: PlayKey) -> str:
    return f"{key[0]}-{key[1]}"


# ======================================================================
# ENUMS
# ======================================================================

class PlayDirection(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class CaseTag(str, Enum):
    PLAIN = "plain"
    PEAK_INSIDE = "peakInside"
    FULL_RECOVERY = "fullRecovery"
    PARTIAL_RECOVERY = "partialRecovery"
    DEGENERATE_PEAK = "degeneratePeak"


class PositionGroup(str, Enum):
    OVERALL = "overall"
    DEFENSIVE_BACKS = "defensiveBacks"
    DEFENSIVE_LINE = "defensiveLine"
    LINEBACKERS = "linebackers"


POSITION_GROUPS: Dict[str, PositionGroup] = {
    "CB": PositionGroup.DEFENSIVE_BACKS,
    "FS": PositionGroup.DEFENSIVE_BACKS,
    "SS": PositionGroup.DEFENSIVE_BACKS,
    "DB": PositionGroup.DEFENSIVE_BACKS,
    "DT": PositionGroup.DEFENSIVE_LINE,
    "DE": PositionGroup.DEFENSIVE_LINE,
    "NT": PositionGroup.DEFENSIVE_LINE,
    "ILB": PositionGroup.LINEBACKERS,
    "OLB": PositionGroup.LINEBACKERS,
    "MLB": PositionGroup.LINEBACKERS,
    "LB": PositionGroup.LINEBACKERS,
}


def position_group(position: Optional[str]) -> Optional[PositionGroup]:
    if not position:
        return None
    return POSITION_GROUPS.get(position.strip().upper())


# ======================================================================
# INGEST
# ======================================================================

@dataclass(frozen=True)
class TrackingFrame:
    game_id: int
    play_id: int
    nfl_id: Optional[int]  # None = il pallone
    frame_id: int
    club: str
    play_direction: str
    x: float
    y: float
    s: float
    a: float
    dis: float
    o: float
    dir: float
    event: Optional[str] = None


@dataclass(frozen=True)
class PlayMeta:
    game_id: int
    play_id: int
    week: int
    ball_carrier_id: int
    possession_team: str
    defensive_team: str
    is_rush: bool
    description: str = ""

    @property
    def key(self) -> PlayKey:
        return (self.game_id, self.play_id)


@dataclass(frozen=True)
class PlayerMeta:
    nfl_id: int
    display_name: str
    position: str


@dataclass(frozen=True)
class BoxScore:
    game_id: int
    play_id: int
    nfl_id: int
    tackle: int = 0
    assist: int = 0
    forced_fumble: int = 0
    missed_tackle: int = 0


@dataclass(frozen=True)
class Reject:
    file: str
    reason: str
    line: Optional[int] = None
    play_key: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"file": self.file}
        if self.line is not None:
            payload["line"] = self.line
        if self.play_key is not None:
            payload["playKey"] = self.play_key
        payload["reason"] = self.reason
        return payload


@dataclass(frozen=True)
class StandardizedPlay:
    """One play with offense moving toward +x.

    ``frames`` holds every tracking row of the play (22 players + ball),
    sorted by (frameId, nflId) with the ball rows last in each frame.
    """

    meta: PlayMeta
    frames: pd.DataFrame = field(repr=False, compare=False)
    snap_frame: int
    end_frame: int

    @property
    def key(self) -> PlayKey:
        return self.meta.key


# ======================================================================
# KINEMATICS / WINDOWS
# ======================================================================

@dataclass(frozen=True)
class BallCarrierTrack:
    play_key: PlayKey
    frame_ids: np.ndarray = field(compare=False)
    x: np.ndarray = field(compare=False)
    y: np.ndarray = field(compare=False)
    v_toward: np.ndarray = field(compare=False)

    @property
    def T(self) -> int:
        return int(self.frame_ids.shape[0])

    def __len__(self) -> int:
        return self.T

    @property
    def frames(self) -> List[Tuple[int, Tuple[float, float], float]]:
        return [
            (int(f), (float(px), float(py)), float(v))
            for f, px, py, v in zip(self.frame_ids, self.x, self.y, self.v_toward)
        ]


@dataclass(frozen=True)
class DefenderPositions:
    """Defender coordinates aligned row-by-row with a BallCarrierTrack.

    ``x`` and ``y`` have shape (T, K); NaN marks a defender absent at a frame.
    """

    ids: Tuple[int, ...]
    x: np.ndarray = field(compare=False)
    y: np.ndarray = field(compare=False)


@dataclass(frozen=True)
class CalibrationConfig:
    percentile: float = 0.95
    override_d: Optional[float] = None

    def __post_init__(self) -> None:
        if not 0.0 < self.percentile < 1.0:
            raise ValueError(f"percentile must be strictly between 0 and 1, got {self.percentile}")
        if self.override_d is not None and not self.override_d > 0.0:
            raise ValueError("override_d must be > 0")


@dataclass(frozen=True)
class CalibrationResult:
    d: float
    percentile: float
    samples: Mapping[str, Tuple[float, ...]] = field(compare=False)
    overridden: bool = False


@dataclass(frozen=True)
class ContactWindow:
    play_key: PlayKey
    window_index: int
    start_frame: int
    end_frame: int
    per_frame_defenders: Tuple[FrozenSet[int], ...]
    v_start: float
    v_end: float
    v_pre: float
    v_post: float
    pre_peak_inside_window: bool

    @property
    def T(self) -> int:
        return self.end_frame - self.start_frame + 1

    @property
    def frame_ids(self) -> range:
        return range(self.start_frame, self.end_frame + 1)

    @property
    def defenders(self) -> FrozenSet[int]:
        return frozenset().union(*self.per_frame_defenders)


# ======================================================================
# VALUATION / ATTRIBUTION
# ======================================================================

@dataclass(frozen=True)
class WindowValue:
    play_key: PlayKey
    window_index: int
    w: float
    case_tag: CaseTag


@dataclass(frozen=True)
class FrameCredit:
    play_key: PlayKey
    window_index: int
    frame_id: int
    w_frame: float
    defender_shares: Mapping[int, float] = field(compare=False)


@dataclass(frozen=True)
class PlayerWindowCredit:
    play_key: PlayKey
    window_index: int
    defender_id: int
    w_player: float
    frames_involved: int


@dataclass(frozen=True)
class PlayResult:
    """Everything computed for one accepted play."""

    meta: PlayMeta
    defender_ids: FrozenSet[int]
    track_length: int
    windows: Tuple[ContactWindow, ...] = ()
    values: Tuple[WindowValue, ...] = ()
    frame_credits: Tuple[FrameCredit, ...] = ()
    player_credits: Tuple[PlayerWindowCredit, ...] = ()

    @property
    def key(self) -> PlayKey:
        return self.meta.key


# ======================================================================
# ANALYTICS
# ======================================================================

@dataclass(frozen=True)
class PlayerAggregate:
    defender_id: int
    display_name: str
    position: str
    plays: int
    windows: int
    total_ft: float
    avg_ft: float
    combined_tackles: float
    tackles: int = 0
    assists: int = 0
    forced_fumbles: int = 0
    missed_tackles: int = 0


@dataclass(frozen=True)
class CorrelationReport:
    label: str
    n: int
    r: float
    ci95: Tuple[float, float]
    grouping: PositionGroup = PositionGroup.OVERALL

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "grouping": self.grouping.value,
            "n": self.n,
            "r": self.r,
            "ci95": list(self.ci95),
        }


@dataclass(frozen=True)
class WindowSummary:
    window_count: int
    mean_duration: float
    duration_bin_edges: Tuple[float, ...]
    duration_counts: Tuple[int, ...]
    windows_per_play: Mapping[int, int]
    defenders_per_window: Mapping[int, int]


__all__ = [
    "PlayKey",
    "play_key_str",
    "PlayDirection",
    "CaseTag",
    "PositionGroup",
    "POSITION_GROUPS",
    "position_group",
    "TrackingFrame",
    "PlayMeta",
    "PlayerMeta",
    "BoxScore",
    "Reject",
    "StandardizedPlay",
    "BallCarrierTrack",
    "DefenderPositions",
    "CalibrationConfig",
    "CalibrationResult",
    "ContactWindow",
    "WindowValue",
    "FrameCredit",
    "PlayerWindowCredit",
    "PlayResult",
    "PlayerAggregate",
    "CorrelationReport",
    "WindowSummary",
]
