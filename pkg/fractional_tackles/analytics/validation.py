"""Correlation with box-score tackles and split-period stability."""

from __future__ import annotations

import logging
import math
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np
from scipy import stats

from models.entities import CorrelationReport, PlayerAggregate, PositionGroup, position_group
from utils.errors import UndefinedCorrelationError

logger = logging.getLogger(__name__)

METRICS = ("fractionalTackles", "combinedTackles")
_MIN_PAIRS = 4


def fisher_ci(r: float, n: int, confidence: float = 0.95) -> Tuple[float, float]:
    """Confidence interval for Pearson r through z = atanh(r)."""
    z_crit = stats.norm.ppf(0.5 + confidence / 2.0)
    half = z_crit / math.sqrt(n - 3)
    with np.errstate(divide="ignore"):
        z = float(np.arctanh(r))
    return float(np.tanh(z - half)), float(np.tanh(z + half))


def correlate(
    xs: Sequence[float],
    ys: Sequence[float],
    *,
    label: str = "",
    grouping: PositionGroup = PositionGroup.OVERALL,
) -> CorrelationReport:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape:
        raise UndefinedCorrelationError(f"{label}: paired vectors differ in length ({x.size} vs {y.size})")
    if x.size < _MIN_PAIRS:
        raise UndefinedCorrelationError(f"{label}: need at least {_MIN_PAIRS} pairs, got {x.size}")
    if np.ptp(x) == 0.0 or np.ptp(y) == 0.0:
        raise UndefinedCorrelationError(f"{label}: zero variance")

    r = float(np.clip(stats.pearsonr(x, y)[0], -1.0, 1.0))
    lo, hi = fisher_ci(r, int(x.size))
    return CorrelationReport(label=label, n=int(x.size), r=r, ci95=(min(lo, r), max(hi, r)), grouping=grouping)


def metric_value(agg: PlayerAggregate, metric: str) -> float:
    if metric == "fractionalTackles":
        return agg.total_ft
    if metric == "combinedTackles":
        return agg.combined_tackles
    raise ValueError(f"unknown metric {metric!r}")


def _residualize(values: Mapping[int, float], groups: Mapping[int, PositionGroup]) -> Dict[int, float]:
    """Subtract the position-group mean from each player's value."""
    means: Dict[PositionGroup, float] = {}
    for group in set(groups.values()):
        members = [values[k] for k in values if groups[k] is group]
        means[group] = float(np.mean(members))
    return {k: values[k] - means[groups[k]] for k in values}


def paired_periods(
    period_a: Sequence[PlayerAggregate],
    period_b: Sequence[PlayerAggregate],
    metric: str,
) -> List[Dict[str, object]]:
    """One row per player seen in either period; a missing period counts as 0."""
    a = {agg.defender_id: agg for agg in period_a}
    b = {agg.defender_id: agg for agg in period_b}
    rows = []
    for k in sorted(set(a) | set(b)):
        ref = a.get(k) or b[k]
        group = position_group(ref.position)
        rows.append(
            {
                "defenderId": k,
                "displayName": ref.display_name,
                "position": ref.position,
                "group": group.value if group else "other",
                "metric": metric,
                "periodA": metric_value(a[k], metric) if k in a else 0.0,
                "periodB": metric_value(b[k], metric) if k in b else 0.0,
            }
        )
    return rows


def stability(
    period_a: Sequence[PlayerAggregate],
    period_b: Sequence[PlayerAggregate],
    metric: str = "fractionalTackles",
) -> List[CorrelationReport]:
    """Period A vs period B correlation: overall, then within each position group on residuals."""
    rows = paired_periods(period_a, period_b, metric)
    reports = [
        correlate(
            [row["periodA"] for row in rows],
            [row["periodB"] for row in rows],
            label=f"{metric}:stability",
            grouping=PositionGroup.OVERALL,
        )
    ]

    grouped = {
        int(row["defenderId"]): PositionGroup(row["group"])
        for row in rows
        if row["group"] != "other"
    }
    res_a = _residualize({int(r["defenderId"]): float(r["periodA"]) for r in rows if int(r["defenderId"]) in grouped}, grouped)
    res_b = _residualize({int(r["defenderId"]): float(r["periodB"]) for r in rows if int(r["defenderId"]) in grouped}, grouped)

    for group in (PositionGroup.DEFENSIVE_BACKS, PositionGroup.DEFENSIVE_LINE, PositionGroup.LINEBACKERS):
        members = sorted(k for k, g in grouped.items() if g is group)
        try:
            reports.append(
                correlate(
                    [res_a[k] for k in members],
                    [res_b[k] for k in members],
                    label=f"{metric}:stability",
                    grouping=group,
                )
            )
        except UndefinedCorrelationError as exc:
            logger.warning("Skipping %s stability for %s: %s", metric, group.value, exc)
    return reports


__all__ = [
    "METRICS",
    "fisher_ci",
    "correlate",
    "metric_value",
    "paired_periods",
    "stability",
]
