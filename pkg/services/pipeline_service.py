from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from tqdm.auto import tqdm

from fractional_tackles.attribution.credit import attribute
from fractional_tackles.data.tracking_data import RejectLog, TrackingDataset, filter_rb_runs, load_dataset, standardize
from fractional_tackles.kinematics.velocity import build_track
from fractional_tackles.valuation.window_value import value_window
from fractional_tackles.windows.calibration import calibrate_threshold
from fractional_tackles.windows.detection import defender_positions, detect_windows
from models.entities import (
    CalibrationConfig,
    CalibrationResult,
    ContactWindow,
    FrameCredit,
    PlayerWindowCredit,
    PlayResult,
    Reject,
    StandardizedPlay,
    WindowValue,
    play_key_str,
)
from utils.config import RunConfig, settings
from utils.errors import DatasetError, PlayRejected, WindowValueError

logger = logging.getLogger(__name__)


@dataclass
class PipelineRun:
    """Everything one CLI invocation computed, in play-key order."""

    dataset: Optional[TrackingDataset] = None
    plays: List[StandardizedPlay] = field(default_factory=list)
    calibration: Optional[CalibrationResult] = None
    results: List[PlayResult] = field(default_factory=list)
    funnel: Dict[str, int] = field(default_factory=dict)

    @property
    def windows(self) -> List[ContactWindow]:
        return [w for r in self.results for w in r.windows]

    @property
    def values(self) -> List[WindowValue]:
        return [v for r in self.results for v in r.values]

    @property
    def player_credits(self) -> List[PlayerWindowCredit]:
        return [c for r in self.results for c in r.player_credits]


class PipelineService:
    """Load, filter, calibrate and score plays with a thread pool over plays."""

    def __init__(self, config: RunConfig, *, threads: Optional[int] = None, progress: Optional[bool] = None):
        self.config = config
        self.threads = max(1, threads or settings.THREADS)
        self.progress = settings.PROGRESS if progress is None else progress
        self.rejects = RejectLog()
        self.timings: Dict[str, float] = {}

    @contextmanager
    def _stage(self, name: str) -> Iterator[None]:
        started = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = round(time.perf_counter() - started, 6)
            logger.info("[PipelineService] stage %s took %.3fs", name, self.timings[name])

    # ---------------------------------------------------------
    #  caricamento + filtro
    # ---------------------------------------------------------
    def load(self) -> TrackingDataset:
        with self._stage("load"):
            dataset = load_dataset(self.config.data_dir, self.config.weeks, rejects=self.rejects, threads=self.threads)
        logger.info(
            "[PipelineService] load → %d games, %d plays, %d frames",
            dataset.game_count,
            len(dataset.plays),
            dataset.frame_count,
        )
        return dataset

    def select(self, dataset: TrackingDataset, funnel: Optional[Dict[str, int]] = None) -> List[StandardizedPlay]:
        with self._stage("filter"):
            return filter_rb_runs(dataset, rejects=self.rejects, funnel=funnel)

    def calibrate(self, plays: Sequence[StandardizedPlay]) -> CalibrationResult:
        cal_config = CalibrationConfig(percentile=self.config.percentile, override_d=self.config.threshold_d)
        with self._stage("calibrate"):
            return calibrate_threshold(plays, cal_config, threads=self.threads)

    # ---------------------------------------------------------
    #  per-play scoring
    # ---------------------------------------------------------
    def process_play(self, play: StandardizedPlay, d: float) -> Tuple[PlayResult, List[Reject]]:
        """Windows, values and credits for one play; bad windows are dropped and reported."""
        track = build_track(play)
        defenders = defender_positions(play, track)
        windows: List[ContactWindow] = []
        values: List[WindowValue] = []
        frame_credits: List[FrameCredit] = []
        player_credits: List[PlayerWindowCredit] = []
        rejects: List[Reject] = []

        for window in detect_windows(track, defenders, d):
            try:
                value = value_window(window, self.config.epsilon_peak)
            except WindowValueError as exc:
                logger.warning("[PipelineService] %s", exc)
                rejects.append(
                    Reject(file="tracking", play_key=play_key_str(play.key), reason="non_finite_landmark")
                )
                continue
            frames, players = attribute(window, value)
            windows.append(window)
            values.append(value)
            frame_credits.extend(frames)
            player_credits.extend(players)

        result = PlayResult(
            meta=play.meta,
            defender_ids=frozenset(defenders.ids),
            track_length=track.T,
            windows=tuple(windows),
            values=tuple(values),
            frame_credits=tuple(frame_credits),
            player_credits=tuple(player_credits),
        )
        return result, rejects

    def _safe_process(self, play: StandardizedPlay, d: float) -> Tuple[Optional[PlayResult], List[Reject]]:
        try:
            return self.process_play(play, d)
        except PlayRejected as exc:
            return None, [Reject(file="tracking", play_key=play_key_str(play.key), reason=exc.reason)]

    def process(self, plays: Sequence[StandardizedPlay], d: float) -> List[PlayResult]:
        """Parallel map over plays; results keep the input order."""
        results: List[PlayResult] = []
        with self._stage("score"), ThreadPoolExecutor(max_workers=self.threads) as pool:
            outcomes = pool.map(lambda p: self._safe_process(p, d), plays)
            for result, rejects in tqdm(
                outcomes, total=len(plays), desc="Scoring plays", unit="play", disable=not self.progress
            ):
                self.rejects.extend(rejects)
                if result is not None:
                    results.append(result)
        logger.info(
            "[PipelineService] process → %d plays scored, %d windows",
            len(results),
            sum(len(r.windows) for r in results),
        )
        return results

    # ---------------------------------------------------------
    #  PUBLIC: orchestrazione
    # ---------------------------------------------------------
    def run(self, *, score: bool = True) -> PipelineRun:
        run = PipelineRun()
        run.dataset = self.load()
        run.plays = self.select(run.dataset, run.funnel)
        run.calibration = self.calibrate(run.plays)
        if score:
            run.results = self.process(run.plays, run.calibration.d)
        return run

    def score_single(self, dataset: TrackingDataset, game_id: int, play_id: int, d: float) -> Tuple[StandardizedPlay, PlayResult]:
        """Score one play by key, whether or not it passes the RB run filter."""
        key = (game_id, play_id)
        meta = dataset.plays.get(key)
        if meta is None:
            raise DatasetError(f"play {play_key_str(key)} not found in the requested weeks")
        try:
            play = standardize(meta, dataset.play_frames(key))
            result, rejects = self.process_play(play, d)
        except PlayRejected as exc:
            raise DatasetError(f"play {play_key_str(key)} cannot be scored: {exc.reason}") from exc
        self.rejects.extend(rejects)
        return play, result


__all__ = ["PipelineRun", "PipelineService"]
