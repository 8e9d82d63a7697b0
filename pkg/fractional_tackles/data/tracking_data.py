"""Loading, validation and standardization of Big Data Bowl style tracking files."""

from __future__ import annotations

import csv
import logging
import threading
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Mapping, MutableMapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from tqdm.auto import tqdm

from models.entities import (
    BoxScore,
    PlayDirection,
    PlayKey,
    PlayMeta,
    PlayerMeta,
    Reject,
    StandardizedPlay,
    TrackingFrame,
    play_key_str,
)
from utils.config import settings
from utils.errors import DatasetError, PlayRejected

logger = logging.getLogger(__name__)

SNAP_EVENT = "ball_snap"
HANDOFF_EVENT = "handoff"
PASS_EVENT_PREFIX = "pass"
_TRUTHY = {"1", "true", "yes", "t", "y"}

COLUMN_ALIASES: Dict[str, str] = {
    "pffMissedTackle": "missedTackle",
    "playDescription": "description",
}


@dataclass(frozen=True)
class _TableSpec:
    name: str
    required: Tuple[str, ...]
    int_cols: Tuple[str, ...] = ()
    float_cols: Tuple[str, ...] = ()
    text_cols: Tuple[str, ...] = ()
    nullable: Tuple[str, ...] = ()
    binary_cols: Tuple[str, ...] = ()
    non_negative: Tuple[str, ...] = ()
    angle_cols: Tuple[str, ...] = ()
    key: Tuple[str, ...] = ()
    optional: Tuple[str, ...] = ()
    # (col, cond): col is required on rows where cond is present
    required_when: Tuple[Tuple[str, str], ...] = ()


GAMES = _TableSpec(
    name="games.csv",
    required=("gameId", "week"),
    int_cols=("gameId", "week"),
    key=("gameId",),
)
PLAYS = _TableSpec(
    name="plays.csv",
    required=("gameId", "playId", "ballCarrierId", "possessionTeam", "defensiveTeam"),
    int_cols=("gameId", "playId", "ballCarrierId"),
    text_cols=("possessionTeam", "defensiveTeam", "description", "isRush"),
    nullable=("description", "isRush"),
    key=("gameId", "playId"),
    optional=("description", "isRush"),
)
PLAYERS = _TableSpec(
    name="players.csv",
    required=("nflId", "displayName", "position"),
    int_cols=("nflId",),
    text_cols=("displayName", "position"),
    key=("nflId",),
)
TACKLES = _TableSpec(
    name="tackles.csv",
    required=("gameId", "playId", "nflId", "tackle", "assist", "forcedFumble", "missedTackle"),
    int_cols=("gameId", "playId", "nflId", "tackle", "assist", "forcedFumble", "missedTackle"),
    binary_cols=("tackle", "assist", "forcedFumble", "missedTackle"),
    key=("gameId", "playId", "nflId"),
)
TRACKING_COLUMNS = (
    "gameId", "playId", "nflId", "frameId", "club", "playDirection",
    "x", "y", "s", "a", "dis", "o", "dir", "event",
)


def _tracking_spec(week: int) -> _TableSpec:
    return _TableSpec(
        name=f"tracking_week_{week}.csv",
        required=TRACKING_COLUMNS,
        int_cols=("gameId", "playId", "nflId", "frameId"),
        float_cols=("x", "y", "s", "a", "dis", "o", "dir"),
        text_cols=("club", "playDirection", "event"),
        # o/dir mancano per il pallone
        nullable=("nflId", "o", "dir", "event"),
        non_negative=("s", "a", "dis"),
        angle_cols=("o", "dir"),
        key=("gameId", "playId", "nflId", "frameId"),
        required_when=(("o", "nflId"), ("dir", "nflId")),
    )


# =======================
# Reject bookkeeping
# =======================
class RejectLog:
    """Thread-safe collector for rejected rows and plays."""

    def __init__(self) -> None:
        self._items: List[Reject] = []
        self._lock = threading.Lock()

    def add(self, reject: Reject) -> None:
        with self._lock:
            self._items.append(reject)

    def extend(self, rejects: Iterable[Reject]) -> None:
        with self._lock:
            self._items.extend(rejects)

    @property
    def items(self) -> Tuple[Reject, ...]:
        with self._lock:
            return tuple(self._items)

    def reasons(self) -> Counter:
        return Counter(r.reason for r in self.items)

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class TrackingDataset:
    root: Path
    weeks: FrozenSet[int]
    plays: Mapping[PlayKey, PlayMeta]
    players: Mapping[int, PlayerMeta]
    boxscores: Mapping[Tuple[int, int, int], BoxScore]
    tracking: pd.DataFrame = field(repr=False, compare=False)
    frame_index: Mapping[PlayKey, np.ndarray] = field(repr=False, compare=False)
    row_counts: Mapping[str, Mapping[str, int]] = field(compare=False)
    rejects: Tuple[Reject, ...] = ()

    @property
    def frame_count(self) -> int:
        return int(len(self.tracking))

    @property
    def game_count(self) -> int:
        return len({key[0] for key in self.plays})

    def play_frames(self, key: PlayKey) -> pd.DataFrame:
        idx = self.frame_index.get(key)
        if idx is None:
            return self.tracking.iloc[0:0]
        return self.tracking.iloc[idx]

    def input_files(self) -> List[Path]:
        names = ["games.csv", "plays.csv", "players.csv", "tackles.csv"]
        names += [f"tracking_week_{w}.csv" for w in sorted(self.weeks)]
        return [self.root / n for n in names]


# =======================
# Parsing helpers
# =======================
@dataclass
class _RecordScan:
    """Physical layout of the data records of one CSV file."""

    header_lines: int = 1
    count: int = 0
    # record position -> structural reject reason
    problems: Dict[int, str] = field(default_factory=dict)
    # record position -> physical lines spanned beyond the first (quoted newlines)
    spans: Dict[int, int] = field(default_factory=dict)

    def lines(self, positions: np.ndarray) -> np.ndarray:
        base = positions + self.header_lines + 1
        if not self.spans:
            return base
        idx = np.fromiter(sorted(self.spans), dtype=np.int64)
        extra = np.concatenate(([0], np.cumsum([self.spans[int(i)] for i in idx])))
        return base + extra[np.searchsorted(idx, positions, side="left")]


def _scan_records(path: Path) -> _RecordScan:
    # pandas does not expose per-record field counts or physical line numbers
    scan = _RecordScan()
    with path.open("r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header is None:
            return scan
        width = len(header)
        scan.header_lines = reader.line_num
        previous = reader.line_num
        for pos, fields in enumerate(reader):
            span = reader.line_num - previous - 1
            previous = reader.line_num
            if span:
                scan.spans[pos] = span
            if not any(f.strip() for f in fields):
                scan.problems[pos] = "empty_row"
            elif len(fields) != width:
                scan.problems[pos] = "malformed_row"
            scan.count = pos + 1
    return scan


def _read_csv(path: Path, spec: _TableSpec) -> Tuple[pd.DataFrame, _RecordScan]:
    if not path.is_file():
        raise DatasetError(f"Missing input file '{path}'")
    text_cols = set(spec.text_cols)
    text_cols |= {alias for alias, target in COLUMN_ALIASES.items() if target in text_cols}
    dtypes = {col: "string" for col in text_cols}
    if spec.name.startswith("tracking_week_"):
        # le colonne testuali ripetute vanno come category per limitare la memoria
        dtypes.update({"club": "category", "playDirection": "category", "event": "category"})
    wanted = set(spec.required) | set(spec.optional)
    wanted |= {alias for alias, target in COLUMN_ALIASES.items() if target in wanted}
    try:
        df = pd.read_csv(
            path,
            usecols=lambda col: col in wanted,
            dtype=dtypes,
            encoding="utf-8",
            float_precision="round_trip",
            skip_blank_lines=False,
            low_memory=False,
        )
    except pd.errors.EmptyDataError as exc:
        raise DatasetError(f"Input file '{path}' has no header row") from exc
    except pd.errors.ParserError as exc:
        raise DatasetError(f"Input file '{path}' could not be parsed: {exc}") from exc

    scan = _scan_records(path)
    if scan.count != len(df):
        logger.warning(
            "%s: %d csv records but %d parsed rows; line numbers are positional",
            spec.name, scan.count, len(df),
        )
        scan = _RecordScan(count=len(df))

    df = df.rename(columns={k: v for k, v in COLUMN_ALIASES.items() if k in df.columns})
    missing = [col for col in spec.required if col not in df.columns]
    if missing:
        raise DatasetError(f"File '{spec.name}' is missing required column(s): {missing}")
    keep = [c for c in (*spec.required, *spec.optional) if c in df.columns]
    return df[keep].copy(), scan


def _parse_table(
    path: Path, spec: _TableSpec, rejects: RejectLog
) -> Tuple[pd.DataFrame, Dict[str, int]]:
    """Validate one file; malformed/duplicate rows are rejected with their line number."""
    df, scan = _read_csv(path, spec)
    n_raw = scan.count
    reason = pd.Series(pd.NA, index=df.index, dtype="string")

    def _flag(mask: pd.Series, why: str) -> None:
        fresh = mask & reason.isna()
        if fresh.any():
            reason[fresh] = why

    if scan.problems:
        reason.iloc[list(scan.problems)] = list(scan.problems.values())
        logger.warning("%s: %d structurally broken row(s)", spec.name, len(scan.problems))

    for col in (*spec.int_cols, *spec.float_cols):
        if col not in df.columns:
            continue
        raw = df[col]
        if raw.dtype == object or pd.api.types.is_string_dtype(raw):
            present = raw.notna() & (raw.astype(str).str.strip() != "")
            parsed = pd.to_numeric(raw.astype(object).where(present, None), errors="coerce")
            _flag(present & parsed.isna(), f"malformed_numeric:{col}")
            values = parsed.astype(float)
        else:
            values = raw.astype(float)
        if col in spec.int_cols:
            _flag(values.notna() & (np.floor(values) != values), f"malformed_numeric:{col}")
        if col not in spec.nullable:
            _flag(values.isna(), f"missing_value:{col}")
        if col in spec.non_negative:
            _flag(values < 0, f"negative_value:{col}")
        if col in spec.angle_cols:
            _flag((values < 0) | (values > 360), f"angle_out_of_range:{col}")
            # 360 and 0 are the same heading
            values = values % 360
        if col in spec.binary_cols:
            _flag(values.notna() & ~values.isin([0.0, 1.0]), f"non_binary:{col}")
        df[col] = values

    for col, cond in spec.required_when:
        _flag(df[col].isna() & df[cond].notna(), f"missing_value:{col}")

    for col in spec.text_cols:
        if col in df.columns and col not in spec.nullable:
            text = df[col].astype("string").fillna("")
            _flag((text.str.strip() == "").astype(bool), f"missing_value:{col}")

    if spec.key:
        candidates = reason.isna()
        dup = (
            df.loc[candidates]
            .duplicated(subset=list(spec.key), keep="first")
            .reindex(df.index, fill_value=False)
        )
        _flag(dup, "duplicate_key")

    bad = reason.notna()
    if bad.any():
        lines = scan.lines(np.flatnonzero(bad.to_numpy())).tolist()
        rejects.extend(
            Reject(file=spec.name, line=int(line), reason=str(why))
            for line, why in zip(lines, reason[bad].tolist())
        )

    accepted = df.loc[~bad].reset_index(drop=True)
    for col in spec.int_cols:
        # colonne senza buchi -> int64; nflId del pallone resta float con NaN
        if col in accepted.columns and not accepted[col].isna().any():
            accepted[col] = accepted[col].astype("int64")
    counts = {"raw": n_raw, "accepted": int(len(accepted)), "rejected": int(bad.sum())}
    return accepted, counts


def _parse_tracking(path: Path, week: int, rejects: RejectLog) -> Tuple[pd.DataFrame, Dict[str, int]]:
    spec = _tracking_spec(week)
    df, counts = _parse_table(path, spec, rejects)
    if "nflId" in df.columns:
        df["nflId"] = df["nflId"].astype(float)
    out_of_bounds = (
        (df["x"] < 0) | (df["x"] > settings.FIELD_LENGTH)
        | (df["y"] < 0) | (df["y"] > settings.FIELD_WIDTH)
    )
    if out_of_bounds.any():
        logger.warning(
            "%s: %d frame(s) with coordinates outside the field", spec.name, int(out_of_bounds.sum())
        )
    return df, counts


def _truthy(value: object) -> Optional[bool]:
    if value is None or value is pd.NA:
        return None
    text = str(value).strip().lower()
    if not text or text == "nan":
        return None
    return text in _TRUTHY


def _text(value: object) -> str:
    if value is None or value is pd.NA or (isinstance(value, float) and np.isnan(value)):
        return ""
    return str(value)


def _derive_rush_flags(tracking: pd.DataFrame) -> Dict[PlayKey, bool]:
    """A play is a rush when a handoff is recorded before any pass event."""
    events = tracking.loc[tracking["event"].notna(), ["gameId", "playId", "frameId", "event"]]
    if events.empty:
        return {}
    events = events.assign(event=events["event"].astype(str)).drop_duplicates()
    handoffs = events[events["event"] == HANDOFF_EVENT].groupby(["gameId", "playId"])["frameId"].min()
    passes = (
        events[events["event"].str.startswith(PASS_EVENT_PREFIX)]
        .groupby(["gameId", "playId"])["frameId"]
        .min()
    )
    flags: Dict[PlayKey, bool] = {}
    for (game_id, play_id), handoff_frame in handoffs.items():
        pass_frame = passes.get((game_id, play_id))
        flags[(int(game_id), int(play_id))] = pass_frame is None or handoff_frame < pass_frame
    return flags


# =======================
# Public API
# =======================
def load_dataset(
    root_dir: str | Path,
    weeks: Iterable[int],
    *,
    rejects: Optional[RejectLog] = None,
    threads: Optional[int] = None,
) -> TrackingDataset:
    """Parse, validate and join the five input file families under ``root_dir``."""
    root = Path(root_dir).expanduser().resolve()
    if not root.is_dir():
        raise DatasetError(f"Data directory '{root}' does not exist")
    week_set = frozenset(int(w) for w in weeks)
    rejects = rejects if rejects is not None else RejectLog()
    row_counts: Dict[str, Dict[str, int]] = {}

    games, row_counts[GAMES.name] = _parse_table(root / GAMES.name, GAMES, rejects)
    plays, row_counts[PLAYS.name] = _parse_table(root / PLAYS.name, PLAYS, rejects)
    players, row_counts[PLAYERS.name] = _parse_table(root / PLAYERS.name, PLAYERS, rejects)
    tackles, row_counts[TACKLES.name] = _parse_table(root / TACKLES.name, TACKLES, rejects)

    workers = max(1, min(threads or settings.THREADS, len(week_set) or 1))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parsed = list(
            pool.map(
                lambda w: (w, _parse_tracking(root / f"tracking_week_{w}.csv", w, rejects)),
                sorted(week_set),
            )
        )
    frames = []
    for week, (df, counts) in parsed:
        row_counts[f"tracking_week_{week}.csv"] = counts
        if len(df):
            frames.append(df)
    tracking = (
        pd.concat(frames, ignore_index=True)
        if frames
        else pd.DataFrame(columns=list(TRACKING_COLUMNS))
    )

    week_of_game = {int(g): int(w) for g, w in zip(games["gameId"], games["week"])}
    derived_rush = _derive_rush_flags(tracking) if len(tracking) else {}

    play_map: Dict[PlayKey, PlayMeta] = {}
    for row in plays.itertuples(index=False):
        key = (int(row.gameId), int(row.playId))
        week = week_of_game.get(key[0])
        if week is None:
            rejects.add(Reject(file=PLAYS.name, play_key=play_key_str(key), reason="unknown_game"))
            continue
        if week not in week_set:
            continue
        if str(row.possessionTeam) == str(row.defensiveTeam):
            rejects.add(Reject(file=PLAYS.name, play_key=play_key_str(key), reason="same_team"))
            continue
        explicit = _truthy(getattr(row, "isRush", None))
        play_map[key] = PlayMeta(
            game_id=key[0],
            play_id=key[1],
            week=week,
            ball_carrier_id=int(row.ballCarrierId),
            possession_team=str(row.possessionTeam),
            defensive_team=str(row.defensiveTeam),
            is_rush=explicit if explicit is not None else derived_rush.get(key, False),
            description=_text(getattr(row, "description", None)),
        )

    player_map = {
        int(r.nflId): PlayerMeta(int(r.nflId), str(r.displayName), str(r.position).strip().upper())
        for r in players.itertuples(index=False)
    }
    box_map = {
        (int(r.gameId), int(r.playId), int(r.nflId)): BoxScore(
            game_id=int(r.gameId),
            play_id=int(r.playId),
            nfl_id=int(r.nflId),
            tackle=int(r.tackle),
            assist=int(r.assist),
            forced_fumble=int(r.forcedFumble),
            missed_tackle=int(r.missedTackle),
        )
        for r in tackles.itertuples(index=False)
        if (int(r.gameId), int(r.playId)) in play_map
    }

    index = {
        (int(k[0]), int(k[1])): idx
        for k, idx in tracking.groupby(["gameId", "playId"], sort=True).indices.items()
    } if len(tracking) else {}

    for name, counts in row_counts.items():
        logger.info(
            "Loaded %s: %d rows (%d accepted, %d rejected)",
            name, counts["raw"], counts["accepted"], counts["rejected"],
        )

    return TrackingDataset(
        root=root,
        weeks=week_set,
        plays=play_map,
        players=player_map,
        boxscores=box_map,
        tracking=tracking,
        frame_index=index,
        row_counts=row_counts,
        rejects=rejects.items,
    )


def standardize_frame(frame: TrackingFrame) -> TrackingFrame:
    """Flip one frame of a leftward play so the offense moves toward +x."""
    if frame.play_direction != PlayDirection.LEFT.value:
        return frame
    return replace(
        frame,
        play_direction=PlayDirection.RIGHT.value,
        x=settings.FIELD_LENGTH - frame.x,
        y=settings.FIELD_WIDTH - frame.y,
        o=(frame.o + 180.0) % 360.0,
        dir=(frame.dir + 180.0) % 360.0,
    )


def _flip(frames: pd.DataFrame) -> pd.DataFrame:
    out = frames.copy()
    out["x"] = settings.FIELD_LENGTH - out["x"]
    out["y"] = settings.FIELD_WIDTH - out["y"]
    out["o"] = (out["o"] + 180.0) % 360.0
    out["dir"] = (out["dir"] + 180.0) % 360.0
    out["playDirection"] = PlayDirection.RIGHT.value
    return out


def _event_frames(frames: pd.DataFrame) -> Dict[str, List[int]]:
    tagged = frames.loc[frames["event"].notna(), ["frameId", "event"]].drop_duplicates()
    out: Dict[str, List[int]] = {}
    for frame_id, event in sorted(tagged.itertuples(index=False), key=lambda t: int(t[0])):
        out.setdefault(str(event), []).append(int(frame_id))
    return out


def standardize(
    meta: PlayMeta,
    frames: pd.DataFrame,
    *,
    end_events: Sequence[str] = settings.END_EVENTS,
    players_per_frame: int = settings.PLAYERS_PER_FRAME,
) -> StandardizedPlay:
    """Standardize one play and resolve its snap and end-of-play frames.

    Raises PlayRejected with a reason code when the play cannot be used.
    """
    if frames.empty:
        raise PlayRejected("no_tracking")
    directions = set(frames["playDirection"].astype(str).unique())
    if len(directions) != 1 or not directions <= {d.value for d in PlayDirection}:
        raise PlayRejected("mixed_direction", f"directions={sorted(directions)}")

    counts = frames.loc[frames["nflId"].notna()].groupby("frameId").size()
    all_frames = frames["frameId"].unique()
    if len(counts) != len(all_frames) or (counts != players_per_frame).any():
        raise PlayRejected("player_count", f"expected {players_per_frame} players per frame")

    standardized = _flip(frames) if directions == {PlayDirection.LEFT.value} else frames.copy()
    standardized = standardized.sort_values(["frameId", "nflId"], na_position="last", kind="mergesort")
    standardized = standardized.reset_index(drop=True)

    events = _event_frames(standardized)
    snaps = events.get(SNAP_EVENT)
    if not snaps:
        raise PlayRejected("missing_snap")
    snap = snaps[0]
    ends = sorted(f for ev in end_events for f in events.get(ev, []) if f >= snap)
    if not ends:
        raise PlayRejected("missing_end_event")

    return StandardizedPlay(meta=meta, frames=standardized, snap_frame=snap, end_frame=ends[0])


def carrier_covers_span(play: StandardizedPlay) -> bool:
    carrier = play.frames.loc[play.frames["nflId"] == play.meta.ball_carrier_id, "frameId"]
    needed = set(range(play.snap_frame, play.end_frame + 1))
    return needed <= {int(f) for f in carrier}


def filter_rb_runs(
    dataset: TrackingDataset,
    *,
    rejects: Optional[RejectLog] = None,
    rb_positions: Sequence[str] = settings.RB_POSITIONS,
    funnel: Optional[MutableMapping[str, int]] = None,
) -> List[StandardizedPlay]:
    """Keep rush plays whose ball-carrier is a running back, standardized and in play-key order."""
    rejects = rejects if rejects is not None else RejectLog()
    positions = {p.upper() for p in rb_positions}
    stats: Counter = Counter()
    kept: List[StandardizedPlay] = []

    for key in tqdm(sorted(dataset.plays), desc="Filtering plays", unit="play", disable=not settings.PROGRESS):
        meta = dataset.plays[key]
        stats["plays"] += 1
        if not meta.is_rush:
            continue
        stats["rush"] += 1
        carrier = dataset.players.get(meta.ball_carrier_id)
        if carrier is None or carrier.position not in positions:
            continue
        stats["rb_rush"] += 1
        try:
            play = standardize(meta, dataset.play_frames(key))
            if not carrier_covers_span(play):
                raise PlayRejected("carrier_missing")
        except PlayRejected as exc:
            stats[f"rejected:{exc.reason}"] += 1
            rejects.add(Reject(file="tracking", play_key=play_key_str(key), reason=exc.reason))
            continue
        kept.append(play)

    stats["accepted"] = len(kept)
    logger.info(
        "RB run filter: %d plays, %d rush, %d RB rush, %d accepted",
        stats["plays"], stats["rush"], stats["rb_rush"], stats["accepted"],
    )
    rejected = {k: v for k, v in stats.items() if k.startswith("rejected:")}
    if rejected:
        logger.warning("Rejected plays by reason: %s", rejected)
    if funnel is not None:
        funnel.update(stats)
    return kept


__all__ = [
    "RejectLog",
    "TrackingDataset",
    "load_dataset",
    "standardize",
    "standardize_frame",
    "carrier_covers_span",
    "filter_rb_runs",
    "SNAP_EVENT",
]
