import os
from dataclasses import replace
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from fractional_tackles.attribution.credit import attribute
from fractional_tackles.data.tracking_data import standardize
from fractional_tackles.harness.synthetic import (
    DEFENSE_ROSTER,
    BoxLine,
    DefenderScript,
    SyntheticPlaySpec,
    Waypoint,
    barkley_fixture,
    generate,
    play_frames,
    play_meta,
    random_spec,
)
from fractional_tackles.kinematics.velocity import build_track
from fractional_tackles.valuation.window_value import value_window
from fractional_tackles.windows.detection import defender_positions, detect_windows
from models.entities import BallCarrierTrack, ContactWindow, DefenderPositions

TESTS_DIR = Path(__file__).parent


# ---------------------------------------------------------
#  helper
# ---------------------------------------------------------
def make_play(spec):
    """StandardizedPlay built in memory from a synthetic spec (raw rows, then standardize)."""
    return standardize(play_meta(spec), play_frames(spec))


def score_play(play, d, epsilon=1e-6):
    """Track -> windows -> values -> player credits for one play."""
    track = build_track(play)
    windows = detect_windows(track, defender_positions(play, track), d)
    values = [value_window(w, epsilon) for w in windows]
    credits = [attribute(w, v)[1] for w, v in zip(windows, values)]
    return track, windows, values, credits


def make_window(v_start, v_end, v_pre, v_post, inside=False, defenders=None, start_frame=1, key=(1, 1), index=1):
    """ContactWindow with hand-set landmarks."""
    sets = tuple(frozenset(s) for s in (defenders or [{1}]))
    return ContactWindow(
        play_key=key,
        window_index=index,
        start_frame=start_frame,
        end_frame=start_frame + len(sets) - 1,
        per_frame_defenders=sets,
        v_start=v_start,
        v_end=v_end,
        v_pre=v_pre,
        v_post=v_post,
        pre_peak_inside_window=inside,
    )


def track_from_distances(distances, v=None, key=(1, 1)):
    """Track plus one defender whose distance to the carrier is exactly ``distances[t]``.

    Carrier sits on the x axis and the defender straight above it, so hypot() returns
    the distance unchanged.
    """
    dist = np.asarray(distances, dtype=float)
    n = dist.size
    track = BallCarrierTrack(
        play_key=key,
        frame_ids=np.arange(1, n + 1, dtype=np.int64),
        x=np.zeros(n),
        y=np.zeros(n),
        v_toward=np.asarray(v if v is not None else np.full(n, 5.0), dtype=float),
    )
    defenders = DefenderPositions(ids=(7,), x=np.zeros((n, 1)), y=dist[:, None].copy())
    return track, defenders


def scaled(track, c):
    return replace(track, v_toward=track.v_toward * c)


def constant_spec(play_direction="right", n_frames=20, speed=4.0, **overrides):
    """Ball-carrier at constant ``speed`` straight toward the end zone, nobody close."""
    fields = dict(
        seed=5,
        game_id=2022090901,
        play_id=11,
        n_frames=n_frames,
        snap_frame=1,
        end_frame=n_frames,
        ball_carrier_path=(Waypoint(1, speed), Waypoint(n_frames, speed)),
        play_direction=play_direction,
        handoff_frame=2,
    )
    fields.update(overrides)
    return SyntheticPlaySpec(**fields)


def run_spec(game_id, play_id, week, contacts, boxes=(), seed=0):
    """Run that peaks at 6 yd/s on frame 12 and is stopped at 1 yd/s on frame 25.

    ``contacts`` maps a DEFENSE_ROSTER index to the frames that defender spends within D.
    """
    scripts = tuple(
        DefenderScript(nfl_id, name, pos, frozenset(contacts.get(i, ())))
        for i, (nfl_id, name, pos) in enumerate(DEFENSE_ROSTER)
    )
    touched = [f for frames in contacts.values() for f in frames]
    return SyntheticPlaySpec(
        seed=seed,
        game_id=game_id,
        play_id=play_id,
        n_frames=26,
        snap_frame=3,
        end_frame=25,
        ball_carrier_path=(Waypoint(1, 0.0), Waypoint(3, 0.0), Waypoint(12, 6.0), Waypoint(25, 1.0), Waypoint(26, 0.0)),
        defender_scripts=scripts,
        week=week,
        handoff_frame=5,
        first_contact_frame=min(touched) if touched else None,
        boxscores=tuple(boxes),
    )


def two_period_specs():
    """Four scripted plays, two in week 1 and two in week 5, with tackles in both periods."""
    return [
        run_spec(2022090801, 1, 1, {0: range(15, 26), 4: range(20, 26), 8: range(23, 26)},
                 [BoxLine(7001, tackle=1), BoxLine(7005, assist=1)], seed=1),
        run_spec(2022090801, 2, 1, {1: range(18, 26), 5: range(15, 26), 9: range(24, 26)},
                 [BoxLine(7006, tackle=1)], seed=2),
        run_spec(2022090805, 1, 5, {0: range(17, 26), 4: range(22, 26), 2: range(24, 26)},
                 [BoxLine(7001, tackle=1), BoxLine(7003, assist=1)], seed=3),
        run_spec(2022090805, 2, 5, {1: range(15, 26), 5: range(19, 26), 6: range(25, 26)},
                 [BoxLine(7002, tackle=1), BoxLine(7006, assist=1)], seed=4),
    ]


def read_table(path):
    return pd.read_csv(path, dtype={"playKey": str})


# ---------------------------------------------------------
#  fixtures
# ---------------------------------------------------------
@pytest.fixture(scope="session")
def barkley_spec():
    return barkley_fixture()


@pytest.fixture(scope="session")
def barkley_play(barkley_spec):
    return make_play(barkley_spec)


@pytest.fixture(scope="session")
def synth_dir(tmp_path_factory, barkley_spec):
    """Generated fixture: the worked example plus a handful of random plays, all in week 1."""
    out = tmp_path_factory.mktemp("synth")
    specs = [barkley_spec] + [random_spec(seed, play_id=seed + 1) for seed in range(6)]
    generate(specs, out)
    return out


@pytest.fixture(scope="session")
def two_period_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("two_period")
    generate(two_period_specs(), out)
    return out


@pytest.fixture(scope="session")
def full_data_dir():
    """Licensed 9-week dataset; tests using it are skipped when it is not configured."""
    root = os.environ.get("FRACTACKLE_DATA_DIR")
    if not root or not (Path(root) / "games.csv").is_file():
        pytest.skip("FRACTACKLE_DATA_DIR not set to the 9-week dataset")
    return Path(root)
