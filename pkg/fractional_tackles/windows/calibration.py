from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from models.entities import CalibrationConfig, CalibrationResult, StandardizedPlay
from utils.config import settings
from utils.errors import DatasetError

logger = logging.getLogger(__name__)

CALIBRATION_EVENTS: Tuple[str, ...] = ("first_contact", "tackle")
_INDEX_TOL = 1e-9


def event_distances(
    play: StandardizedPlay,
    events: Sequence[str] = CALIBRATION_EVENTS,
) -> Dict[str, List[float]]:
    """Ball-carrier to nearest-defender distance at the first frame carrying each event."""
    frames = play.frames
    out: Dict[str, List[float]] = {event: [] for event in events}
    labelled = frames.loc[frames["event"].notna(), ["frameId", "event"]]
    labelled = labelled.assign(event=labelled["event"].astype(str))
    carrier = frames.loc[frames["nflId"] == play.meta.ball_carrier_id].set_index("frameId")
    defense = frames.loc[
        (frames["club"].astype(str) == play.meta.defensive_team) & frames["nflId"].notna()
    ]

    for event in events:
        hits = labelled.loc[labelled["event"] == event, "frameId"]
        if hits.empty:
            continue
        frame_id = int(hits.min())
        if frame_id not in carrier.index:
            continue
        cx, cy = float(carrier.at[frame_id, "x"]), float(carrier.at[frame_id, "y"])
        at_frame = defense.loc[defense["frameId"] == frame_id]
        if at_frame.empty:
            continue
        dist = np.hypot(at_frame["x"].to_numpy(dtype=float) - cx, at_frame["y"].to_numpy(dtype=float) - cy)
        out[event].append(float(dist.min()))
    return out


def merge_samples(
    parts: Iterable[Mapping[str, Sequence[float]]],
    events: Sequence[str] = CALIBRATION_EVENTS,
) -> Dict[str, Tuple[float, ...]]:
    """Concatenate per-play samples in input order."""
    merged: Dict[str, List[float]] = {event: [] for event in events}
    for part in parts:
        for event in events:
            merged[event].extend(part.get(event, ()))
    return {event: tuple(values) for event, values in merged.items()}


def sample_quantile(samples: Sequence[float], percentile: float) -> float:
    """Smallest sample value with at least ``percentile`` of the samples at or below it."""
    ordered = np.sort(np.asarray(samples, dtype=float))
    if ordered.size == 0:
        raise DatasetError("cannot take a quantile of an empty sample")
    idx = math.ceil(percentile * ordered.size - _INDEX_TOL) - 1
    return float(ordered[min(max(idx, 0), ordered.size - 1)])


def round_up_tenth(value: float) -> float:
    # round() first so 1.9000000000000001 stays 1.9
    return math.ceil(round(value * 10.0, 9)) / 10.0


def threshold_from_samples(samples: Mapping[str, Sequence[float]], percentile: float) -> float:
    """Joint-percentile threshold: covers ``percentile`` of every non-empty distribution."""
    quantiles = {event: sample_quantile(values, percentile) for event, values in samples.items() if len(values)}
    if not quantiles:
        raise DatasetError("no first_contact or tackle frames found; pass an explicit threshold")
    for event, values in samples.items():
        if not len(values):
            logger.warning("No %s frames found; calibrating on the remaining event(s)", event)
    return round_up_tenth(max(quantiles.values()))


def calibrate_threshold(
    plays: Sequence[StandardizedPlay],
    config: CalibrationConfig = CalibrationConfig(),
    *,
    threads: Optional[int] = None,
) -> CalibrationResult:
    """Calibrate D from event-frame distances over ``plays``; ``override_d`` skips the scan."""
    if config.override_d is not None:
        logger.info("Using threshold override D=%.3f", config.override_d)
        return CalibrationResult(
            d=float(config.override_d),
            percentile=config.percentile,
            samples={event: () for event in CALIBRATION_EVENTS},
            overridden=True,
        )

    workers = max(1, threads or settings.THREADS)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(event_distances, plays))
    samples = merge_samples(parts)
    d = threshold_from_samples(samples, config.percentile)
    logger.info(
        "Calibrated D=%.1f at percentile %.3f (%s)",
        d,
        config.percentile,
        ", ".join(f"{event}: {len(values)} samples" for event, values in samples.items()),
    )
    return CalibrationResult(d=d, percentile=config.percentile, samples=samples)


__all__ = [
    "CALIBRATION_EVENTS",
    "event_distances",
    "merge_samples",
    "sample_quantile",
    "round_up_tenth",
    "threshold_from_samples",
    "calibrate_threshold",
]
