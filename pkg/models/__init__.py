# models/__init__.py
from .entities import (  # noqa: F401
    PlayKey, PlayDirection, CaseTag, PositionGroup, TrackingFrame, PlayMeta, PlayerMeta, BoxScore, Reject,
    StandardizedPlay, BallCarrierTrack, DefenderPositions, CalibrationConfig, CalibrationResult, ContactWindow,
    WindowValue, FrameCredit, PlayerWindowCredit, PlayResult,
    PlayerAggregate, CorrelationReport, WindowSummary, play_key_str, position_group,
)
