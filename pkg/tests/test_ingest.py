# tests/test_ingest.py
"""
Loading, validation, standardization and the RB run filter:
- schema errors (missing file / column) are fatal
- malformed or duplicate rows are rejected with their line number
- left plays are flipped so the offense always moves toward +x
"""
import math
import warnings
from dataclasses import replace

import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from conftest import constant_spec, make_play
from fractional_tackles.data.tracking_data import (
    RejectLog,
    carrier_covers_span,
    filter_rb_runs,
    load_dataset,
    standardize,
    standardize_frame,
)
from fractional_tackles.harness.synthetic import generate, play_frames, play_meta, random_spec
from models.entities import TrackingFrame
from utils.errors import DatasetError, PlayRejected


def _frame(x=50.0, y=20.0, o=10.0, direction=90.0, play_direction="left", nfl_id=1):
    return TrackingFrame(
        game_id=1, play_id=1, nfl_id=nfl_id, frame_id=6, club="TEN", play_direction=play_direction,
        x=x, y=y, s=3.0, a=0.5, dis=0.3, o=o, dir=direction, event=None,
    )


def _three_plays(tmp_path):
    specs = [random_spec(seed, play_id=seed + 1) for seed in (11, 12, 13)]
    generate(specs, tmp_path)
    return specs


# ---------------------------------------------------------
#  load_dataset
# ---------------------------------------------------------
def test_load_generated_fixture(tmp_path):
    specs = _three_plays(tmp_path)
    dataset = load_dataset(tmp_path, [1])

    assert sorted(dataset.plays) == sorted(s.key for s in specs)
    assert dataset.game_count == 1
    assert dataset.frame_count == sum(s.n_frames * 23 for s in specs)
    assert dataset.rejects == ()
    for name, counts in dataset.row_counts.items():
        assert counts["accepted"] + counts["rejected"] == counts["raw"]
        assert counts["raw"] == len((tmp_path / name).read_text().splitlines()) - 1


def test_malformed_x_cell_rejects_one_row_and_its_play(tmp_path):
    specs = _three_plays(tmp_path)
    path = tmp_path / "tracking_week_1.csv"
    df = pd.read_csv(path, dtype=str, keep_default_na=False)
    target = specs[1].key
    row = int(
        df.index[
            (df["gameId"] == str(target[0])) & (df["playId"] == str(target[1])) & (df["nflId"] != "")
        ][0]
    )
    df.loc[row, "x"] = "12,5a"
    df.to_csv(path, index=False)

    rejects = RejectLog()
    dataset = load_dataset(tmp_path, [1], rejects=rejects)

    counts = dataset.row_counts["tracking_week_1.csv"]
    assert counts["rejected"] == 1
    assert counts["accepted"] + counts["rejected"] == counts["raw"]
    bad = [r for r in rejects.items if r.file == "tracking_week_1.csv"]
    assert len(bad) == 1
    assert bad[0].line == row + 2
    assert bad[0].reason == "malformed_numeric:x"

    plays = filter_rb_runs(dataset, rejects=rejects)
    assert [p.key for p in plays] == sorted(s.key for s in specs if s.key != target)
    assert any(r.play_key == f"{target[0]}-{target[1]}" and r.reason == "player_count" for r in rejects.items)


def test_missing_file_is_fatal(tmp_path):
    _three_plays(tmp_path)
    (tmp_path / "players.csv").unlink()
    with pytest.raises(DatasetError, match="players.csv"):
        load_dataset(tmp_path, [1])


def test_missing_column_is_fatal(tmp_path):
    _three_plays(tmp_path)
    games = pd.read_csv(tmp_path / "games.csv").drop(columns=["week"])
    games.to_csv(tmp_path / "games.csv", index=False)
    with pytest.raises(DatasetError, match="week"):
        load_dataset(tmp_path, [1])


def test_missing_data_dir_is_fatal(tmp_path):
    with pytest.raises(DatasetError):
        load_dataset(tmp_path / "nope", [1])


def test_duplicate_player_row_is_rejected(tmp_path):
    _three_plays(tmp_path)
    players = pd.read_csv(tmp_path / "players.csv")
    players = pd.concat([players, players.iloc[[0]]], ignore_index=True)
    players.to_csv(tmp_path / "players.csv", index=False)

    rejects = RejectLog()
    load_dataset(tmp_path, [1], rejects=rejects)

    dup = [r for r in rejects.items if r.file == "players.csv"]
    assert len(dup) == 1
    assert dup[0].reason == "duplicate_key"
    assert dup[0].line == len(players) + 1


def _tracking_lines(tmp_path):
    path = tmp_path / "tracking_week_1.csv"
    lines = path.read_text().splitlines()
    return path, lines, lines[0].split(",")


def _set_field(line, header, column, value):
    fields = line.split(",")
    fields[header.index(column)] = value
    return ",".join(fields)


def test_malformed_rows_raise_no_future_warning(tmp_path):
    _three_plays(tmp_path)
    path, lines, header = _tracking_lines(tmp_path)
    lines[4] = _set_field(lines[4], header, "x", "12,5a")
    lines.append(lines[1])
    path.write_text("\n".join(lines) + "\n")

    with warnings.catch_warnings():
        warnings.simplefilter("error", FutureWarning)
        rejects = RejectLog()
        load_dataset(tmp_path, [1], rejects=rejects)
    reasons = {r.reason for r in rejects.items if r.file == "tracking_week_1.csv"}
    assert reasons == {"malformed_row", "duplicate_key"}


def test_extra_field_is_rejected_as_malformed_row(tmp_path):
    _three_plays(tmp_path)
    path, lines, _ = _tracking_lines(tmp_path)
    lines[5] += ",EXTRA"
    path.write_text("\n".join(lines) + "\n")

    rejects = RejectLog()
    dataset = load_dataset(tmp_path, [1], rejects=rejects)

    bad = [r for r in rejects.items if r.file == "tracking_week_1.csv"]
    assert [(r.line, r.reason) for r in bad] == [(6, "malformed_row")]
    counts = dataset.row_counts["tracking_week_1.csv"]
    assert counts["rejected"] == 1
    assert counts["raw"] == len(lines) - 1


def test_blank_line_keeps_physical_line_numbers(tmp_path):
    _three_plays(tmp_path)
    path, lines, header = _tracking_lines(tmp_path)
    lines.insert(2, "")
    lines[5] = _set_field(lines[5], header, "x", "12.5a")
    path.write_text("\n".join(lines) + "\n")

    rejects = RejectLog()
    dataset = load_dataset(tmp_path, [1], rejects=rejects)

    bad = [r for r in rejects.items if r.file == "tracking_week_1.csv"]
    assert [(r.line, r.reason) for r in bad] == [(3, "empty_row"), (6, "malformed_numeric:x")]
    counts = dataset.row_counts["tracking_week_1.csv"]
    assert counts["raw"] == len(path.read_text().splitlines()) - 1
    assert counts["rejected"] == 2
    assert counts["accepted"] + counts["rejected"] == counts["raw"]


def test_heading_of_360_is_kept_as_zero(tmp_path):
    _three_plays(tmp_path)
    path, lines, header = _tracking_lines(tmp_path)
    pos = next(i for i, line in enumerate(lines[1:], start=1) if line.split(",")[header.index("nflId")])
    lines[pos] = _set_field(lines[pos], header, "o", "360")
    lines[pos + 1] = _set_field(lines[pos + 1], header, "o", "360.5")
    path.write_text("\n".join(lines) + "\n")

    rejects = RejectLog()
    dataset = load_dataset(tmp_path, [1], rejects=rejects)

    fields = dict(zip(header, lines[pos].split(",")))
    row = dataset.tracking[
        (dataset.tracking["gameId"] == int(fields["gameId"]))
        & (dataset.tracking["playId"] == int(fields["playId"]))
        & (dataset.tracking["nflId"] == float(fields["nflId"]))
        & (dataset.tracking["frameId"] == int(fields["frameId"]))
    ]
    assert row["o"].tolist() == [0.0]
    headings = dataset.tracking["o"].dropna()
    assert ((headings >= 0) & (headings < 360)).all()
    bad = [(r.line, r.reason) for r in rejects.items if r.file == "tracking_week_1.csv"]
    assert bad == [(pos + 2, "angle_out_of_range:o")]


def test_non_binary_tackle_flag_is_rejected(tmp_path, barkley_spec):
    generate([barkley_spec], tmp_path)
    tackles = pd.read_csv(tmp_path / "tackles.csv")
    tackles.loc[0, "tackle"] = 2
    tackles.to_csv(tmp_path / "tackles.csv", index=False)

    rejects = RejectLog()
    dataset = load_dataset(tmp_path, [1], rejects=rejects)
    assert [r.reason for r in rejects.items] == ["non_binary:tackle"]
    assert len(dataset.boxscores) == len(barkley_spec.boxscores) - 1


def test_header_only_tracking_gives_empty_dataset(tmp_path):
    _three_plays(tmp_path)
    header = (tmp_path / "tracking_week_1.csv").read_text().splitlines()[0]
    (tmp_path / "tracking_week_1.csv").write_text(header + "\n")

    rejects = RejectLog()
    dataset = load_dataset(tmp_path, [1], rejects=rejects)
    assert dataset.frame_count == 0
    assert len(rejects) == 0


def test_weeks_outside_request_are_skipped(tmp_path):
    _three_plays(tmp_path)
    dataset = load_dataset(tmp_path, [2])
    assert dataset.plays == {}
    assert dataset.frame_count == 0


def test_explicit_rush_flag_and_description(tmp_path, barkley_spec):
    generate([barkley_spec], tmp_path)
    dataset = load_dataset(tmp_path, [1])
    meta = dataset.plays[barkley_spec.key]
    assert meta.is_rush is True
    assert meta.description.startswith("S.Barkley")
    assert meta.possession_team == "NYG"
    assert meta.defensive_team == "TEN"


# ---------------------------------------------------------
#  standardize
# ---------------------------------------------------------
def test_standardize_frame_flips_left_plays():
    out = standardize_frame(_frame(x=93.30, y=30.0, direction=287.75, o=10.0))
    assert out.play_direction == "right"
    assert out.x == pytest.approx(26.70, abs=1e-9)
    assert out.y == pytest.approx(160.0 / 3.0 - 30.0, abs=1e-9)
    assert out.dir == pytest.approx(107.75, abs=1e-9)
    assert out.o == pytest.approx(190.0, abs=1e-9)


def test_standardize_frame_keeps_right_plays():
    frame = _frame(play_direction="right")
    assert standardize_frame(frame) is frame


_coords = st.floats(min_value=0.0, max_value=120.0, allow_nan=False)
_widths = st.floats(min_value=0.0, max_value=160.0 / 3.0, allow_nan=False)
_angles = st.floats(min_value=0.0, max_value=359.999, allow_nan=False)


@hsettings(max_examples=300, deadline=None)
@given(x=_coords, y=_widths, o=_angles, direction=_angles)
def test_flip_is_an_involution(x, y, o, direction):
    once = standardize_frame(_frame(x=x, y=y, o=o, direction=direction))
    twice = standardize_frame(replace(once, play_direction="left"))
    assert twice.x == pytest.approx(x, abs=1e-9)
    assert twice.y == pytest.approx(y, abs=1e-9)
    for got, want in ((twice.o, o), (twice.dir, direction)):
        gap = abs(got - want) % 360.0
        assert min(gap, 360.0 - gap) < 1e-9


@hsettings(max_examples=300, deadline=None)
@given(x1=_coords, y1=_widths, x2=_coords, y2=_widths)
def test_flip_preserves_distances(x1, y1, x2, y2):
    a = standardize_frame(_frame(x=x1, y=y1, nfl_id=1))
    b = standardize_frame(_frame(x=x2, y=y2, nfl_id=2))
    assert math.hypot(a.x - b.x, a.y - b.y) == pytest.approx(math.hypot(x1 - x2, y1 - y2), abs=1e-9)


def test_left_play_becomes_monotone_toward_plus_x():
    spec = constant_spec(play_direction="left")
    raw = play_frames(spec)
    carrier_raw = raw.loc[raw["nflId"] == spec.carrier_id].sort_values("frameId")["x"].to_numpy()
    assert (np.diff(carrier_raw) <= 0).all()

    play = standardize(play_meta(spec), raw)
    carrier = play.frames.loc[play.frames["nflId"] == spec.carrier_id, "x"].to_numpy()
    assert (np.diff(carrier) >= 0).all()
    assert set(play.frames["playDirection"]) == {"right"}


def test_standardize_resolves_snap_and_end(barkley_play):
    assert barkley_play.snap_frame == 6
    assert barkley_play.end_frame == 64
    assert carrier_covers_span(barkley_play)
    assert barkley_play.frames["frameId"].is_monotonic_increasing
    last_rows = barkley_play.frames.groupby("frameId").tail(1)
    assert last_rows["nflId"].isna().all()


def test_mixed_direction_is_rejected(barkley_spec):
    frames = play_frames(barkley_spec).copy()
    frames.loc[frames.index[5], "playDirection"] = "right"
    with pytest.raises(PlayRejected) as exc:
        standardize(play_meta(barkley_spec), frames)
    assert exc.value.reason == "mixed_direction"


def test_missing_snap_is_rejected(barkley_spec):
    frames = play_frames(barkley_spec).copy()
    frames.loc[frames["event"] == "ball_snap", "event"] = None
    with pytest.raises(PlayRejected) as exc:
        standardize(play_meta(barkley_spec), frames)
    assert exc.value.reason == "missing_snap"


def test_missing_end_event_is_rejected(barkley_spec):
    frames = play_frames(barkley_spec).copy()
    frames.loc[frames["event"] == "tackle", "event"] = None
    with pytest.raises(PlayRejected) as exc:
        standardize(play_meta(barkley_spec), frames)
    assert exc.value.reason == "missing_end_event"


def test_wrong_player_count_is_rejected(barkley_spec):
    frames = play_frames(barkley_spec)
    frames = frames.drop(frames.index[(frames["nflId"] == 37) & (frames["frameId"] == 30)])
    with pytest.raises(PlayRejected) as exc:
        standardize(play_meta(barkley_spec), frames)
    assert exc.value.reason == "player_count"


def test_empty_frames_are_rejected(barkley_spec):
    with pytest.raises(PlayRejected) as exc:
        standardize(play_meta(barkley_spec), play_frames(barkley_spec).iloc[0:0])
    assert exc.value.reason == "no_tracking"


# ---------------------------------------------------------
#  filter_rb_runs
# ---------------------------------------------------------
def _four_plays():
    rb_a = random_spec(21, play_id=1)
    rb_b = random_spec(22, play_id=2)
    scramble = replace(
        random_spec(23, play_id=3), carrier_id=6101, carrier_name="Synthetic Quarterback", carrier_position="QB"
    )
    target = replace(
        random_spec(24, play_id=4),
        is_rush=False,
        handoff_frame=None,
        first_contact_frame=None,
        extra_events=((random_spec(24).snap_frame + 1, "pass_forward"),),
    )
    return [rb_a, rb_b, scramble, target]


@pytest.mark.parametrize("write_rush_flag", [True, False])
def test_filter_keeps_only_rb_rushes(tmp_path, write_rush_flag):
    specs = _four_plays()
    generate(specs, tmp_path, write_rush_flag=write_rush_flag)
    dataset = load_dataset(tmp_path, [1])

    funnel = {}
    plays = filter_rb_runs(dataset, funnel=funnel)

    assert [p.key for p in plays] == [specs[0].key, specs[1].key]
    assert funnel["plays"] == 4
    assert funnel["rush"] == 3
    assert funnel["rb_rush"] == 2
    assert funnel["accepted"] == 2
    for play in plays:
        assert play.snap_frame <= play.end_frame
        assert carrier_covers_span(play)


def test_filter_with_no_rush_plays_is_empty(tmp_path):
    spec = replace(random_spec(31, play_id=1), is_rush=False)
    generate([spec], tmp_path)
    assert filter_rb_runs(load_dataset(tmp_path, [1])) == []


def test_make_play_matches_loaded_play(synth_dir, barkley_spec):
    loaded = {p.key: p for p in filter_rb_runs(load_dataset(synth_dir, [1]))}
    direct = make_play(barkley_spec)
    play = loaded[barkley_spec.key]
    assert (play.snap_frame, play.end_frame) == (direct.snap_frame, direct.end_frame)
    np.testing.assert_allclose(play.frames["x"].to_numpy(), direct.frames["x"].to_numpy(), atol=1e-9)
