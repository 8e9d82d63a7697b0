"""Synthetic plays with planned contact windows, written in the input file layout."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from fractional_tackles.windows.calibration import CALIBRATION_EVENTS
from models.entities import PlayMeta, TrackingFrame, play_key_str
from utils.config import ALL_WEEKS, settings
from utils.errors import GenerationError

from .oracle import OracleWindow, credit_rows, oracle_credits

logger = logging.getLogger(__name__)

MAX_SPEED = 12.0
PLAYERS_PER_SIDE = 11
CONTACT_RADIUS = (0.25, 0.8)  # fractions of D
# first_contact / tackle frames: the calibrated threshold rounds back up to D
EVENT_CONTACT_RADIUS = (0.94, 0.99)
CLEAR_DISTANCE = 2.0  # multiples of D
LANDMARK_TOL = 1e-9
SIDECAR_NAME = "sidecar.json"
RUN_CONFIG_NAME = "synth.env"

_OFFENSE_POSITIONS = ("QB", "WR", "WR", "TE", "T", "T", "G", "G", "C", "WR")
DEFENSE_ROSTER: Tuple[Tuple[int, str, str], ...] = tuple(
    (7001 + i, f"Synthetic Defender {i + 1}", pos)
    for i, pos in enumerate(("CB", "CB", "FS", "SS", "DE", "DE", "DT", "NT", "ILB", "OLB", "MLB"))
)
_DEFENSE_FILLERS: Tuple[Tuple[int, str, str], ...] = tuple(
    (99001 + i, f"Reserve Defender {i + 1}", pos)
    for i, pos in enumerate(("CB", "SS", "DE", "ILB", "OLB", "DT", "FS", "CB", "NT", "MLB", "DE"))
)


@dataclass(frozen=True)
class Waypoint:
    """Ball-carrier velocity components at a frame; linear in between."""

    frame: int
    v_toward: float
    v_lateral: float = 0.0


@dataclass(frozen=True)
class DefenderScript:
    nfl_id: int
    display_name: str
    position: str
    contact_frames: FrozenSet[int] = frozenset()


@dataclass(frozen=True)
class PlannedWindow:
    start_frame: int
    end_frame: int
    defenders: Tuple[FrozenSet[int], ...]


@dataclass(frozen=True)
class BoxLine:
    nfl_id: int
    tackle: int = 0
    assist: int = 0
    forced_fumble: int = 0
    missed_tackle: int = 0


@dataclass(frozen=True)
class SyntheticPlaySpec:
    seed: int
    game_id: int
    play_id: int
    n_frames: int
    snap_frame: int
    end_frame: int
    ball_carrier_path: Tuple[Waypoint, ...]
    defender_scripts: Tuple[DefenderScript, ...] = ()
    start: Tuple[float, float] = (30.0, 80.0 / 3.0)
    d: float = 1.5
    week: int = 1
    play_direction: str = "right"
    handoff_frame: Optional[int] = None
    first_contact_frame: Optional[int] = None
    end_event: str = "tackle"
    extra_events: Tuple[Tuple[int, str], ...] = ()
    carrier_id: int = 6001
    carrier_name: str = "Synthetic Back"
    carrier_position: str = "RB"
    possession_team: str = "OFF"
    defensive_team: str = "DEF"
    is_rush: bool = True
    description: str = ""
    boxscores: Tuple[BoxLine, ...] = ()
    planned_landmarks: Tuple[Tuple[float, float, float, float], ...] = ()

    @property
    def key(self) -> Tuple[int, int]:
        return (self.game_id, self.play_id)

    @property
    def planned_windows(self) -> Tuple[PlannedWindow, ...]:
        """Windows implied by the contact frames that fall between snap and end of play."""
        per_frame = {
            f: frozenset(s.nfl_id for s in self.defender_scripts if f in s.contact_frames)
            for f in range(self.snap_frame, self.end_frame + 1)
        }
        planned: List[PlannedWindow] = []
        run: List[int] = []
        for f in range(self.snap_frame, self.end_frame + 2):
            if per_frame.get(f):
                run.append(f)
                continue
            if run:
                planned.append(PlannedWindow(run[0], run[-1], tuple(per_frame[g] for g in run)))
                run = []
        return tuple(planned)


# ======================================================================
# Rendering
# ======================================================================

def _heading(vx: np.ndarray, vy: np.ndarray) -> np.ndarray:
    """Degrees clockwise from +y, in [0, 360)."""
    deg = np.mod(np.degrees(np.arctan2(vx, vy)), 360.0)
    return np.where(deg >= 360.0, 0.0, deg)


def carrier_velocity(spec: SyntheticPlaySpec) -> Tuple[np.ndarray, np.ndarray]:
    path = sorted(spec.ball_carrier_path, key=lambda w: w.frame)
    frames = [w.frame for w in path]
    if len(set(frames)) != len(frames):
        raise GenerationError(f"play {play_key_str(spec.key)}: duplicate waypoint frames")
    grid = np.arange(1, spec.n_frames + 1, dtype=float)
    vx = np.interp(grid, frames, [w.v_toward for w in path])
    vy = np.interp(grid, frames, [w.v_lateral for w in path])
    return vx, vy


def _kinematics(px: np.ndarray, py: np.ndarray) -> Dict[str, np.ndarray]:
    """Per-frame s, a, dis, dir for position arrays of shape (n_frames, players)."""
    step_x = np.vstack([np.zeros((1, px.shape[1])), np.diff(px, axis=0)])
    step_y = np.vstack([np.zeros((1, py.shape[1])), np.diff(py, axis=0)])
    dis = np.hypot(step_x, step_y)
    s = dis * settings.FRAME_RATE_HZ
    a = np.vstack([np.zeros((1, s.shape[1])), np.abs(np.diff(s, axis=0))]) * settings.FRAME_RATE_HZ
    return {"s": s, "a": a, "dis": dis, "dir": _heading(step_x, step_y)}


def _validate_spec(spec: SyntheticPlaySpec) -> None:
    where = f"play {play_key_str(spec.key)}"
    if not 1 <= spec.snap_frame <= spec.end_frame <= spec.n_frames:
        raise GenerationError(f"{where}: need 1 <= snap <= end <= n_frames")
    if len(spec.defender_scripts) > PLAYERS_PER_SIDE:
        raise GenerationError(f"{where}: more than {PLAYERS_PER_SIDE} scripted defenders")
    ids = [s.nfl_id for s in spec.defender_scripts] + [spec.carrier_id]
    if len(set(ids)) != len(ids):
        raise GenerationError(f"{where}: duplicate player ids")
    if spec.play_direction not in {"left", "right"}:
        raise GenerationError(f"{where}: playDirection must be left or right")
    if not spec.d > 0:
        raise GenerationError(f"{where}: D must be positive")


def _events(spec: SyntheticPlaySpec) -> Dict[int, str]:
    # one event per frame; the snap is never overwritten
    events = {spec.snap_frame: "ball_snap"}
    if spec.end_frame != spec.snap_frame:
        events[spec.end_frame] = spec.end_event
    if spec.handoff_frame is not None:
        events.setdefault(spec.handoff_frame, "handoff")
    if spec.first_contact_frame is not None:
        events.setdefault(spec.first_contact_frame, "first_contact")
    for frame, label in spec.extra_events:
        events.setdefault(frame, label)
    return events


def _defense(spec: SyntheticPlaySpec) -> List[DefenderScript]:
    scripted = list(spec.defender_scripts)
    taken = {s.nfl_id for s in scripted}
    for nfl_id, name, pos in _DEFENSE_FILLERS:
        if len(scripted) == PLAYERS_PER_SIDE:
            break
        if nfl_id not in taken:
            scripted.append(DefenderScript(nfl_id, name, pos))
    return scripted


def standardized_frames(spec: SyntheticPlaySpec) -> pd.DataFrame:
    """Tracking rows of one play in standardized coordinates (offense toward +x)."""
    _validate_spec(spec)
    rng = np.random.default_rng(spec.seed)
    where = f"play {play_key_str(spec.key)}"

    vx, vy = carrier_velocity(spec)
    speed = np.hypot(vx, vy)
    if (speed > MAX_SPEED + 1e-12).any():
        raise GenerationError(f"{where}: ball-carrier speed above {MAX_SPEED} yd/s")
    dt = 1.0 / settings.FRAME_RATE_HZ
    cx = spec.start[0] + np.concatenate([[0.0], np.cumsum(vx[1:] * dt)])
    cy = spec.start[1] + np.concatenate([[0.0], np.cumsum(vy[1:] * dt)])

    defense = _defense(spec)
    event_frames = {f for f, label in _events(spec).items() if label in CALIBRATION_EVENTS}
    n, k = spec.n_frames, len(defense)
    dx = np.empty((n, k))
    dy = np.empty((n, k))
    for t in range(n):
        frame_id = t + 1
        toward_center = 1.0 if cy[t] < settings.FIELD_WIDTH / 2.0 else -1.0
        for j, script in enumerate(defense):
            if frame_id in script.contact_frames:
                angle = rng.uniform(0.0, 2.0 * math.pi)
                band = EVENT_CONTACT_RADIUS if frame_id in event_frames else CONTACT_RADIUS
                radius = rng.uniform(*band) * spec.d
                dx[t, j] = cx[t] + radius * math.sin(angle)
                dy[t, j] = cy[t] + radius * math.cos(angle)
            else:
                dx[t, j] = cx[t] + rng.uniform(-3.0, 3.0)
                dy[t, j] = cy[t] + toward_center * rng.uniform(CLEAR_DISTANCE * spec.d + 0.5, CLEAR_DISTANCE * spec.d + 6.0)

    offense_ids = [spec.carrier_id] + [980001 + i for i in range(PLAYERS_PER_SIDE - 1)]
    ox = np.column_stack([cx] + [np.clip(cx - 4.0 - 0.7 * i, 0.5, settings.FIELD_LENGTH - 0.5) for i in range(10)])
    oy = np.column_stack([cy] + [np.clip(cy + (i - 4.5) * 1.5, 0.5, settings.FIELD_WIDTH - 0.5) for i in range(10)])

    px = np.hstack([ox, dx, cx[:, None]])
    py = np.hstack([oy, dy, cy[:, None]])
    if (px < 0).any() or (px > settings.FIELD_LENGTH).any() or (py < 0).any() or (py > settings.FIELD_WIDTH).any():
        raise GenerationError(f"{where}: a player leaves the field")

    kin = _kinematics(px, py)
    # ball-carrier kinematics come from the scripted velocity, not from differencing
    kin["s"][:, 0] = speed
    kin["dir"][:, 0] = _heading(vx, vy)
    kin["a"][:, 0] = np.concatenate([[0.0], np.abs(np.diff(speed))]) * settings.FRAME_RATE_HZ

    ids: List[Optional[int]] = offense_ids + [s.nfl_id for s in defense] + [None]
    clubs = [spec.possession_team] * PLAYERS_PER_SIDE + [spec.defensive_team] * k + ["football"]
    events = _events(spec)
    rows: List[Dict[str, Any]] = []
    for t in range(n):
        frame_id = t + 1
        for j, nfl_id in enumerate(ids):
            is_ball = nfl_id is None
            rows.append(
                {
                    "gameId": spec.game_id,
                    "playId": spec.play_id,
                    "nflId": np.nan if is_ball else float(nfl_id),
                    "frameId": frame_id,
                    "club": clubs[j],
                    "playDirection": "right",
                    "x": float(px[t, j]),
                    "y": float(py[t, j]),
                    "s": float(kin["s"][t, j]),
                    "a": float(kin["a"][t, j]),
                    "dis": float(kin["dis"][t, j]),
                    "o": np.nan if is_ball else float(kin["dir"][t, j]),
                    "dir": np.nan if is_ball else float(kin["dir"][t, j]),
                    "event": events.get(frame_id),
                }
            )
    return pd.DataFrame(rows)


def _flip_rows(frames: pd.DataFrame) -> pd.DataFrame:
    out = frames.copy()
    out["x"] = settings.FIELD_LENGTH - out["x"]
    out["y"] = settings.FIELD_WIDTH - out["y"]
    for col in ("o", "dir"):
        turned = np.mod(out[col] + 180.0, 360.0)
        out[col] = turned.where(turned < 360.0, 0.0)
    out["playDirection"] = "left"
    return out


def tracking_records(frames: pd.DataFrame) -> List[TrackingFrame]:
    records = []
    for row in frames.itertuples(index=False):
        ball = pd.isna(row.nflId)
        records.append(
            TrackingFrame(
                game_id=int(row.gameId),
                play_id=int(row.playId),
                nfl_id=None if ball else int(row.nflId),
                frame_id=int(row.frameId),
                club=str(row.club),
                play_direction=str(row.playDirection),
                x=float(row.x),
                y=float(row.y),
                s=float(row.s),
                a=float(row.a),
                dis=float(row.dis),
                o=float(row.o),
                dir=float(row.dir),
                event=None if pd.isna(row.event) else str(row.event),
            )
        )
    return records


def expected_windows(spec: SyntheticPlaySpec, frames: Optional[pd.DataFrame] = None) -> List[OracleWindow]:
    """Oracle windows of a spec; raises GenerationError if they differ from the plan."""
    frames = standardized_frames(spec) if frames is None else frames
    windows = oracle_credits(
        tracking_records(frames),
        spec.d,
        ball_carrier_id=spec.carrier_id,
        defensive_team=spec.defensive_team,
        snap_frame=spec.snap_frame,
        end_frame=spec.end_frame,
    )
    realized = [(w.start_frame, w.end_frame, tuple(frozenset(s) for s in w.defenders)) for w in windows]
    planned = [(p.start_frame, p.end_frame, p.defenders) for p in spec.planned_windows]
    if realized != planned:
        raise GenerationError(f"play {play_key_str(spec.key)}: realized windows {realized} != planned {planned}")

    if spec.planned_landmarks:
        if len(spec.planned_landmarks) != len(windows):
            raise GenerationError(f"play {play_key_str(spec.key)}: landmark plan covers {len(spec.planned_landmarks)} windows")
        for win, plan in zip(windows, spec.planned_landmarks):
            got = (win.v_start, win.v_end, win.v_pre, win.v_post)
            for g, p in zip(got, plan):
                if not (g == p or abs(g - p) <= LANDMARK_TOL):
                    raise GenerationError(
                        f"play {play_key_str(spec.key)} window {win.window_index}: landmarks {got} != planned {plan}"
                    )
    return windows


def play_frames(spec: SyntheticPlaySpec) -> pd.DataFrame:
    """Raw tracking rows of one play as they are written (flipped for leftward plays)."""
    frames = standardized_frames(spec)
    expected_windows(spec, frames)
    return _flip_rows(frames) if spec.play_direction == "left" else frames


def play_meta(spec: SyntheticPlaySpec) -> PlayMeta:
    return PlayMeta(
        game_id=spec.game_id,
        play_id=spec.play_id,
        week=spec.week,
        ball_carrier_id=spec.carrier_id,
        possession_team=spec.possession_team,
        defensive_team=spec.defensive_team,
        is_rush=spec.is_rush,
        description=spec.description,
    )


# ======================================================================
# Writing
# ======================================================================

@dataclass(frozen=True)
class GeneratedFixture:
    out_dir: Path
    files: Tuple[Path, ...]
    sidecar: Mapping[str, Any] = field(compare=False)


def _players_table(specs: Sequence[SyntheticPlaySpec]) -> pd.DataFrame:
    players: Dict[int, Tuple[str, str]] = {}

    def _add(nfl_id: int, name: str, position: str) -> None:
        prior = players.get(nfl_id)
        if prior is not None and prior != (name, position):
            raise GenerationError(f"player {nfl_id} declared as both {prior} and {(name, position)}")
        players[nfl_id] = (name, position)

    for spec in specs:
        _add(spec.carrier_id, spec.carrier_name, spec.carrier_position)
        for i, pos in enumerate(_OFFENSE_POSITIONS):
            _add(980001 + i, f"Synthetic Blocker {i + 1}", pos)
        for script in _defense(spec):
            _add(script.nfl_id, script.display_name, script.position)
    return pd.DataFrame(
        [{"nflId": k, "position": pos, "displayName": name} for k, (name, pos) in sorted(players.items())]
    )


def _sidecar(specs: Sequence[SyntheticPlaySpec], windows: Mapping[Tuple[int, int], List[OracleWindow]]) -> Dict[str, Any]:
    plays = []
    for spec in sorted(specs, key=lambda s: s.key):
        key = play_key_str(spec.key)
        wins = windows[spec.key]
        plays.append(
            {
                "playKey": key,
                "seed": spec.seed,
                "playDirection": spec.play_direction,
                "d": spec.d,
                "windows": [w.to_dict() for w in wins],
                "credits": credit_rows(key, wins),
            }
        )
    return {
        "d": sorted({s.d for s in specs}),
        "plays": plays,
        "credits": [row for play in plays for row in play["credits"]],
    }


def generate(
    specs: Union[SyntheticPlaySpec, Sequence[SyntheticPlaySpec]],
    out_dir: Union[str, Path],
    *,
    write_rush_flag: bool = True,
) -> GeneratedFixture:
    """Write games/plays/players/tackles/tracking files plus the ground-truth sidecar."""
    specs = [specs] if isinstance(specs, SyntheticPlaySpec) else list(specs)
    keys = [s.key for s in specs]
    if len(set(keys)) != len(keys):
        raise GenerationError("duplicate (gameId, playId) among specs")
    weeks_of_game: Dict[int, int] = {}
    for spec in specs:
        if weeks_of_game.setdefault(spec.game_id, spec.week) != spec.week:
            raise GenerationError(f"game {spec.game_id} assigned to more than one week")
        if spec.week not in ALL_WEEKS:
            raise GenerationError(f"week {spec.week} outside 1-9")

    out = Path(out_dir).expanduser()
    out.mkdir(parents=True, exist_ok=True)

    tracking: Dict[int, List[pd.DataFrame]] = {w: [] for w in sorted(ALL_WEEKS)}
    windows: Dict[Tuple[int, int], List[OracleWindow]] = {}
    for spec in sorted(specs, key=lambda s: s.key):
        frames = standardized_frames(spec)
        windows[spec.key] = expected_windows(spec, frames)
        tracking[spec.week].append(_flip_rows(frames) if spec.play_direction == "left" else frames)

    games = pd.DataFrame(
        [
            {"gameId": g, "season": 2022, "week": w, "homeTeamAbbr": "HOM", "visitorTeamAbbr": "VIS"}
            for g, w in sorted(weeks_of_game.items())
        ]
    )
    play_rows = []
    for spec in sorted(specs, key=lambda s: s.key):
        row = {
            "gameId": spec.game_id,
            "playId": spec.play_id,
            "ballCarrierId": spec.carrier_id,
            "ballCarrierDisplayName": spec.carrier_name,
            "playDescription": spec.description,
            "possessionTeam": spec.possession_team,
            "defensiveTeam": spec.defensive_team,
        }
        if write_rush_flag:
            row["isRush"] = "TRUE" if spec.is_rush else "FALSE"
        play_rows.append(row)
    tackles = pd.DataFrame(
        [
            {
                "gameId": spec.game_id,
                "playId": spec.play_id,
                "nflId": box.nfl_id,
                "tackle": box.tackle,
                "assist": box.assist,
                "forcedFumble": box.forced_fumble,
                "pffMissedTackle": box.missed_tackle,
            }
            for spec in sorted(specs, key=lambda s: s.key)
            for box in spec.boxscores
        ],
        columns=["gameId", "playId", "nflId", "tackle", "assist", "forcedFumble", "pffMissedTackle"],
    )

    files: List[Path] = []

    def _write(df: pd.DataFrame, name: str) -> None:
        path = out / name
        df.to_csv(path, index=False, lineterminator="\n")
        files.append(path)

    _write(games, "games.csv")
    _write(pd.DataFrame(play_rows), "plays.csv")
    _write(_players_table(specs), "players.csv")
    _write(tackles, "tackles.csv")
    columns = ["gameId", "playId", "nflId", "frameId", "club", "playDirection", "x", "y", "s", "a", "dis", "o", "dir", "event"]
    for week, parts in tracking.items():
        df = pd.concat(parts, ignore_index=True) if parts else pd.DataFrame(columns=columns)
        df = df[columns].astype({"nflId": "Int64"}) if parts else df
        _write(df, f"tracking_week_{week}.csv")

    sidecar = _sidecar(specs, windows)
    sidecar_path = out / SIDECAR_NAME
    sidecar_path.write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    files.append(sidecar_path)

    d_values = sidecar["d"]
    if len(d_values) == 1:
        config_path = out / RUN_CONFIG_NAME
        config_path.write_text(f"WEEKS={','.join(str(w) for w in sorted(set(weeks_of_game.values())))}\nTHRESHOLD_D={d_values[0]!r}\n", encoding="utf-8")
        files.append(config_path)

    logger.info("Generated %d synthetic play(s) into %s", len(specs), out)
    return GeneratedFixture(out_dir=out, files=tuple(files), sidecar=sidecar)


# ======================================================================
# Spec builders
# ======================================================================

def random_spec(
    seed: int,
    *,
    game_id: int = 2022090800,
    play_id: Optional[int] = None,
    d: float = 1.5,
    week: int = 1,
) -> SyntheticPlaySpec:
    """Randomized RB run with 1-4 planned windows, the last one on the tackle frame; deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    snap = int(rng.integers(2, 8))
    track_len = int(rng.integers(12, 50))
    end = snap + track_len - 1
    n_frames = end + int(rng.integers(0, 4))
    handoff = min(snap + int(rng.integers(2, 6)), end)

    interior = sorted({int(f) for f in rng.integers(snap + 1, end + 1, size=int(rng.integers(2, 6)))} - {end})
    path = [Waypoint(1, 0.0, 0.0), Waypoint(snap, 0.0, 0.0)]
    path += [Waypoint(f, float(rng.uniform(-2.0, 9.0)), float(rng.uniform(-1.2, 1.2))) for f in interior]
    if end > snap:
        path.append(Waypoint(end, float(rng.uniform(-1.0, 3.0)), float(rng.uniform(-1.2, 1.2))))
    if n_frames > end:
        path.append(Waypoint(n_frames, 0.0, 0.0))
    path = [w for i, w in enumerate(path) if w.frame not in {p.frame for p in path[:i]}]

    roster = [list(r) for r in DEFENSE_ROSTER]
    order = rng.permutation(len(roster))
    n_active = int(rng.integers(1, 5))
    active = [int(i) for i in order[:n_active]]
    contact: Dict[int, set] = {i: set() for i in range(len(roster))}

    segments: List[Tuple[int, int]] = []
    cursor = snap + int(rng.integers(0, 4))
    for _ in range(int(rng.integers(0, 4))):
        if cursor > end:
            break
        seg_end = min(cursor + int(rng.integers(1, 8)) - 1, end)
        segments.append((cursor, seg_end))
        cursor = seg_end + 1 + int(rng.integers(1, 6))

    for start, stop in segments:
        involved = [active[int(i)] for i in rng.choice(len(active), size=int(rng.integers(1, min(3, len(active)) + 1)), replace=False)]
        for frame in range(start, stop + 1):
            present = [i for i in involved if rng.random() < 0.6]
            if not present:
                present = [involved[int(rng.integers(0, len(involved)))]]
            for i in present:
                contact[i].add(frame)

    if not any(end in frames for frames in contact.values()):
        # the tackle frame always has a defender within D
        contact[active[int(rng.integers(0, len(active)))]].add(end)

    scripts = tuple(
        DefenderScript(nfl_id=roster[i][0], display_name=roster[i][1], position=roster[i][2], contact_frames=frozenset(contact[i]))
        for i in range(len(roster))
    )
    at_end = [s.nfl_id for s in scripts if end in s.contact_frames]
    boxes = tuple(
        BoxLine(nfl_id=k, tackle=int(len(at_end) == 1), assist=int(len(at_end) > 1)) for k in sorted(at_end)
    )

    return SyntheticPlaySpec(
        seed=seed,
        game_id=game_id,
        play_id=play_id if play_id is not None else 100 + seed,
        n_frames=n_frames,
        snap_frame=snap,
        end_frame=end,
        ball_carrier_path=tuple(path),
        defender_scripts=scripts,
        start=(float(rng.uniform(25.0, 45.0)), float(rng.uniform(18.0, 35.0))),
        d=d,
        week=week,
        play_direction="left" if rng.random() < 0.5 else "right",
        handoff_frame=handoff,
        first_contact_frame=segments[0][0] if segments else end,
        carrier_id=6001 + seed % 3,
        carrier_name=f"Synthetic Back {seed % 3 + 1}",
        description=f"synthetic run, seed {seed}",
        boxscores=boxes,
    )


def barkley_fixture(d: float = 1.5) -> SyntheticPlaySpec:
    """Seven-yard run with three contact windows.

    Window 1 is fully recovered, window 2 peaks before the window at 5.16 yd/s and
    is split between two overlapping defenders, window 3 ends the play.
    """
    path = (
        Waypoint(1, 0.0, 0.0),
        Waypoint(5, 0.0, 0.0),
        Waypoint(6, 0.0, -2.0),
        Waypoint(18, 0.0, -2.0),
        Waypoint(19, -0.0138, -2.0),
        Waypoint(20, 1.5, -1.0),
        Waypoint(24, 2.6, -0.5),
        Waypoint(25, 2.8, 0.0),
        Waypoint(44, 5.05, 0.0),
        Waypoint(45, 5.16, 0.0),
        Waypoint(46, 5.10, 0.0),
        Waypoint(47, 5.01, 0.0),
        Waypoint(48, 4.95, 0.0),
        Waypoint(49, 4.85, 0.0),
        Waypoint(50, 4.72, 0.0),
        Waypoint(51, 4.60, 0.0),
        Waypoint(52, 4.4364, 0.0),
        Waypoint(64, 0.70, 0.0),
        Waypoint(67, 0.0, 0.0),
    )
    span = lambda lo, hi: frozenset(range(lo, hi + 1))  # noqa: E731
    scripts = (
        DefenderScript(48, "Bud Dupree", "OLB", span(20, 24)),
        DefenderScript(37, "Amani Hooker", "FS", span(47, 49)),
        DefenderScript(51, "David Long", "ILB", span(48, 50)),
        DefenderScript(96, "Denico Autry", "DE", span(52, 52)),
        DefenderScript(98, "Jeffery Simmons", "DT", span(53, 55)),
        DefenderScript(33, "Ugochukwu Amadi", "FS", span(55, 64)),
        DefenderScript(41, "Zach Cunningham", "ILB", span(55, 64)),
    )
    return SyntheticPlaySpec(
        seed=2022,
        game_id=2022091110,
        play_id=1,
        n_frames=67,
        snap_frame=6,
        end_frame=64,
        ball_carrier_path=path,
        defender_scripts=scripts,
        start=(26.70, 23.49),
        d=d,
        week=1,
        play_direction="left",
        handoff_frame=19,
        first_contact_frame=49,
        carrier_id=26,
        carrier_name="Saquon Barkley",
        possession_team="NYG",
        defensive_team="TEN",
        description="S.Barkley right end to TEN 7 for 7 yards (Z.Cunningham, U.Amadi).",
        boxscores=(
            BoxLine(41, tackle=1),
            BoxLine(33, assist=1),
            BoxLine(51, missed_tackle=1),
        ),
        planned_landmarks=(
            (1.5, 2.6, 2.6, 5.16),
            (5.01, 4.72, 5.16, 4.60),
            (4.4364, 0.70, 5.16, float("-inf")),
        ),
    )


__all__ = [
    "Waypoint",
    "DefenderScript",
    "PlannedWindow",
    "BoxLine",
    "SyntheticPlaySpec",
    "GeneratedFixture",
    "DEFENSE_ROSTER",
    "SIDECAR_NAME",
    "RUN_CONFIG_NAME",
    "carrier_velocity",
    "standardized_frames",
    "tracking_records",
    "expected_windows",
    "play_frames",
    "play_meta",
    "generate",
    "random_spec",
    "barkley_fixture",
]
