"""Subcommand handlers. Each one reads its inputs, runs the pipeline pieces it needs and writes artifacts."""

from __future__ import annotations

import argparse
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from fractional_tackles.analytics.leaderboard import (
    SORT_KEYS,
    aggregate,
    identity_line_summary,
    leaderboard,
    play_credit_table,
    position_summary,
)
from fractional_tackles.analytics.summaries import window_summaries
from fractional_tackles.analytics.validation import METRICS, correlate, paired_periods, stability
from fractional_tackles.harness.synthetic import barkley_fixture, generate, random_spec
from fractional_tackles.kinematics.velocity import build_track, finite_difference_velocity, velocity_gap
from models.entities import PlayerAggregate, play_key_str, position_group
from services.pipeline_service import PipelineRun, PipelineService
from services.report_service import ReportService
from utils.config import RunConfig, settings
from utils.errors import UndefinedCorrelationError

logger = logging.getLogger(__name__)

WINDOW_COLUMNS = [
    "playKey", "windowIndex", "startFrame", "endFrame", "T",
    "vStart", "vEnd", "vPre", "vPost", "prePeakInsideWindow", "w", "caseTag",
]
CREDIT_COLUMNS = ["playKey", "windowIndex", "defenderId", "wPlayer", "framesInvolved"]
LEADERBOARD_COLUMNS = [
    "rank", "defenderId", "displayName", "position", "plays", "windows", "totalFT", "avgFT",
    "combinedTackles", "tackles", "assists", "forcedFumbles", "missedTackles",
]
TRACK_COLUMNS = ["frameId", "x", "y", "vToward", "vPositional"]
PLAY_CREDIT_COLUMNS = ["defenderId", "displayName", "position", "windowIndex", "fractionalTackles", "statistic"]
FRAME_CREDIT_COLUMNS = ["windowIndex", "frameId", "wFrame", "defenderId", "share"]
CORRELATION_SCATTER_COLUMNS = ["defenderId", "displayName", "position", "group", "totalFT", "combinedTackles"]
STABILITY_SCATTER_COLUMNS = ["defenderId", "displayName", "position", "group", "metric", "periodA", "periodB"]
DECILES = tuple(round(0.1 * i, 1) for i in range(1, 10))


@dataclass
class CommandContext:
    args: argparse.Namespace
    config: RunConfig
    report: ReportService
    pipeline: Optional[PipelineService] = None
    row_counts: Dict[str, Any] = field(default_factory=dict)
    inputs: List[Path] = field(default_factory=list)
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def timings(self) -> Dict[str, float]:
        return dict(self.pipeline.timings) if self.pipeline else {}


def _pipeline(ctx: CommandContext) -> PipelineService:
    if ctx.pipeline is None:
        ctx.pipeline = PipelineService(ctx.config)
    return ctx.pipeline


def _run(ctx: CommandContext, *, score: bool = True) -> PipelineRun:
    service = _pipeline(ctx)
    try:
        run = service.run(score=score)
    finally:
        ctx.report.write_rejects(service.rejects.items)
        if service.rejects:
            logger.warning("Rejects by reason: %s", dict(service.rejects.reasons()))
    ctx.inputs = run.dataset.input_files()
    ctx.row_counts = {"files": dict(run.dataset.row_counts), "funnel": dict(run.funnel)}
    if run.calibration is not None:
        ctx.extra["thresholdD"] = run.calibration.d
    return run


def _window_rows(run: PipelineRun) -> List[Dict[str, Any]]:
    rows = []
    for result in run.results:
        for window, value in zip(result.windows, result.values):
            rows.append(
                {
                    "playKey": play_key_str(result.key),
                    "windowIndex": window.window_index,
                    "startFrame": window.start_frame,
                    "endFrame": window.end_frame,
                    "T": window.T,
                    "vStart": window.v_start,
                    "vEnd": window.v_end,
                    "vPre": window.v_pre,
                    "vPost": window.v_post,
                    "prePeakInsideWindow": window.pre_peak_inside_window,
                    "w": value.w,
                    "caseTag": value.case_tag.value,
                }
            )
    return rows


def _credit_rows(run: PipelineRun) -> List[Dict[str, Any]]:
    return [
        {
            "playKey": play_key_str(c.play_key),
            "windowIndex": c.window_index,
            "defenderId": c.defender_id,
            "wPlayer": c.w_player,
            "framesInvolved": c.frames_involved,
        }
        for c in run.player_credits
    ]


def _aggregate_row(rank: int, agg: PlayerAggregate) -> Dict[str, Any]:
    return {
        "rank": rank,
        "defenderId": agg.defender_id,
        "displayName": agg.display_name,
        "position": agg.position,
        "plays": agg.plays,
        "windows": agg.windows,
        "totalFT": agg.total_ft,
        "avgFT": agg.avg_ft,
        "combinedTackles": agg.combined_tackles,
        "tackles": agg.tackles,
        "assists": agg.assists,
        "forcedFumbles": agg.forced_fumbles,
        "missedTackles": agg.missed_tackles,
    }


# =======================
# Handlers
# =======================
def cmd_calibrate(ctx: CommandContext) -> None:
    run = _run(ctx, score=False)
    cal = run.calibration
    payload = {
        "D": cal.d,
        "percentile": cal.percentile,
        "overridden": cal.overridden,
        "sampleCount": {event: len(values) for event, values in cal.samples.items()},
        "deciles": {
            event: [float(q) for q in np.quantile(values, DECILES)] if len(values) else []
            for event, values in cal.samples.items()
        },
        "plays": len(run.plays),
    }
    ctx.report.write_json("calibration.json", payload)


def cmd_windows(ctx: CommandContext) -> None:
    run = _run(ctx)
    ctx.report.write_table("windows", _window_rows(run), WINDOW_COLUMNS)
    summary = window_summaries(run.windows)
    ctx.report.write_json(
        "window_summary.json",
        {
            "plays": len(run.results),
            "playsWithWindows": sum(1 for r in run.results if r.windows),
            "windowCount": summary.window_count,
            "meanDurationSeconds": summary.mean_duration,
            "durationBinEdges": list(summary.duration_bin_edges),
            "durationCounts": list(summary.duration_counts),
            "windowsPerPlay": summary.windows_per_play,
            "defendersPerWindow": summary.defenders_per_window,
            "caseTags": _case_counts(run),
        },
    )


def _case_counts(run: PipelineRun) -> Dict[str, int]:
    counts: Dict[str, int] = {}
    for value in run.values:
        counts[value.case_tag.value] = counts.get(value.case_tag.value, 0) + 1
    return dict(sorted(counts.items()))


def cmd_credit(ctx: CommandContext) -> None:
    run = _run(ctx)
    ctx.report.write_table("credits", _credit_rows(run), CREDIT_COLUMNS)


def cmd_leaderboard(ctx: CommandContext) -> None:
    run = _run(ctx)
    aggregates = aggregate(run.results, run.dataset.boxscores, run.dataset.players)
    rows = leaderboard(aggregates, top=ctx.args.top, min_plays=ctx.config.min_plays, sort=ctx.args.sort)
    ctx.report.write_table(
        "leaderboard", [_aggregate_row(i, agg) for i, agg in enumerate(rows, start=1)], LEADERBOARD_COLUMNS
    )
    qualified = [a for a in aggregates if a.plays >= ctx.config.min_plays]
    ctx.report.write_json("position_summary.json", position_summary(qualified))


def cmd_validate(ctx: CommandContext) -> None:
    run = _run(ctx)
    box, players = run.dataset.boxscores, run.dataset.players
    aggregates = [a for a in aggregate(run.results, box, players) if a.plays >= ctx.config.min_plays]
    correlation = correlate(
        [a.total_ft for a in aggregates],
        [a.combined_tackles for a in aggregates],
        label="totalFT~combinedTackles",
    )

    split = settings.SPLIT_WEEK
    min_plays = ctx.config.min_plays
    period_a = [
        a for a in aggregate(run.results, box, players, play_filter=lambda m: m.week <= split) if a.plays >= min_plays
    ]
    period_b = [
        a for a in aggregate(run.results, box, players, play_filter=lambda m: m.week > split) if a.plays >= min_plays
    ]
    reports: Dict[str, List[Dict[str, Any]]] = {}
    skipped: Dict[str, str] = {}
    for metric in METRICS:
        if not period_a or not period_b:
            skipped[metric] = f"no qualifying players in period {'A' if not period_a else 'B'} (split week {split})"
        else:
            try:
                reports[metric] = [r.to_dict() for r in stability(period_a, period_b, metric)]
            except UndefinedCorrelationError as exc:
                skipped[metric] = str(exc)
        if metric in skipped:
            logger.warning("Skipping %s stability: %s", metric, skipped[metric])
            reports[metric] = []

    ctx.report.write_json(
        "validation.json",
        {
            "correlation": correlation.to_dict(),
            "stability": reports,
            "stabilitySkipped": skipped,
            "splitWeek": split,
            "periodPlayers": {"A": len(period_a), "B": len(period_b)},
            "missingPeriodRule": "zero-filled",
            "identityLine": identity_line_summary(aggregates),
            "positionSummary": position_summary(aggregates),
        },
    )

    scatter = []
    for agg in aggregates:
        group = position_group(agg.position)
        scatter.append(
            {
                "defenderId": agg.defender_id,
                "displayName": agg.display_name,
                "position": agg.position,
                "group": group.value if group else "other",
                "totalFT": agg.total_ft,
                "combinedTackles": agg.combined_tackles,
            }
        )
    ctx.report.write_table("scatter_correlation", scatter, CORRELATION_SCATTER_COLUMNS)
    stability_rows = [
        row for metric in METRICS if metric not in skipped for row in paired_periods(period_a, period_b, metric)
    ]
    ctx.report.write_table("scatter_stability", stability_rows, STABILITY_SCATTER_COLUMNS)


def cmd_export_play(ctx: CommandContext) -> None:
    service = _pipeline(ctx)
    try:
        dataset = service.load()
        if ctx.config.threshold_d is None:
            d = service.calibrate(service.select(dataset)).d
        else:
            d = ctx.config.threshold_d
        play, result = service.score_single(dataset, ctx.args.game_id, ctx.args.play_id, d)
    finally:
        ctx.report.write_rejects(service.rejects.items)
    ctx.inputs = dataset.input_files()
    ctx.row_counts = {"files": dict(dataset.row_counts)}
    ctx.extra["thresholdD"] = d

    key = play_key_str(play.key)
    track = build_track(play)
    positional = finite_difference_velocity(track)
    track_rows = [
        {"frameId": int(f), "x": float(x), "y": float(y), "vToward": float(v), "vPositional": float(p)}
        for f, x, y, v, p in zip(track.frame_ids, track.x, track.y, track.v_toward, positional)
    ]
    ctx.report.write_csv(f"play_{key}_track.csv", track_rows, TRACK_COLUMNS)
    ctx.report.write_table(
        f"play_{key}_credits", play_credit_table(result, dataset.players, dataset.boxscores), PLAY_CREDIT_COLUMNS
    )
    frame_rows = [
        {"windowIndex": fc.window_index, "frameId": fc.frame_id, "wFrame": fc.w_frame,
         "defenderId": defender, "share": share}
        for fc in result.frame_credits
        for defender, share in fc.defender_shares.items()
    ]
    ctx.report.write_table(f"play_{key}_frames", frame_rows, FRAME_CREDIT_COLUMNS)
    ctx.report.write_json(
        f"play_{key}_summary.json",
        {
            "playKey": key,
            "thresholdD": d,
            "snapFrame": play.snap_frame,
            "endFrame": play.end_frame,
            "trackLength": track.T,
            "velocityGap": velocity_gap(track),
            "windows": [
                {
                    "windowIndex": w.window_index,
                    "startFrame": w.start_frame,
                    "endFrame": w.end_frame,
                    "defenders": [sorted(s) for s in w.per_frame_defenders],
                    "vStart": w.v_start,
                    "vEnd": w.v_end,
                    "vPre": w.v_pre,
                    "vPost": w.v_post,
                    "w": v.w,
                    "caseTag": v.case_tag.value,
                }
                for w, v in zip(result.windows, result.values)
            ],
        },
    )


def cmd_synth(ctx: CommandContext) -> None:
    args = ctx.args
    specs = [
        random_spec(
            args.seed + i,
            game_id=2022090800 + (i % 9) + 1,
            play_id=i + 1,
            d=ctx.config.threshold_d or 1.5,
            week=(i % 9) + 1,
        )
        for i in range(args.plays)
    ]
    if args.include_example:
        specs.append(barkley_fixture(ctx.config.threshold_d or 1.5))
    out_dir = Path(args.out_dir) if args.out_dir else ctx.report.out_dir
    fixture = generate(specs, out_dir)
    ctx.report.artifacts.extend(fixture.files)
    ctx.row_counts = {"plays": len(specs), "windows": sum(len(p["windows"]) for p in fixture.sidecar["plays"])}


COMMANDS: Dict[str, Callable[[CommandContext], None]] = {
    "calibrate": cmd_calibrate,
    "windows": cmd_windows,
    "credit": cmd_credit,
    "leaderboard": cmd_leaderboard,
    "validate": cmd_validate,
    "export-play": cmd_export_play,
    "synth": cmd_synth,
}


__all__ = ["COMMANDS", "CommandContext", "SORT_KEYS"]
