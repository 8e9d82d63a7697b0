# tests/test_pipeline.py
import json

import numpy as np
import pytest

from fractional_tackles.data.tracking_data import standardize
from fractional_tackles.harness.synthetic import SIDECAR_NAME, play_frames, play_meta
from models.entities import play_key_str
from services.pipeline_service import PipelineService
from utils.config import RunConfig
from utils.errors import DatasetError


def _service(data_dir, threads=2, **kwargs):
    config = RunConfig(data_dir=data_dir, weeks=frozenset({1}), threshold_d=1.5, **kwargs)
    return PipelineService(config, threads=threads, progress=False)


def test_run_matches_sidecar(synth_dir):
    run = _service(synth_dir).run()
    sidecar = json.loads((synth_dir / SIDECAR_NAME).read_text())

    assert run.calibration.overridden is True
    assert run.funnel["accepted"] == len(sidecar["plays"]) == len(run.results)
    assert [r.key for r in run.results] == sorted(r.key for r in run.results)

    got = {(play_key_str(c.play_key), c.window_index, c.defender_id): c.w_player for c in run.player_credits}
    expected = {(r["playKey"], r["windowIndex"], r["defenderId"]): r["wPlayer"] for r in sidecar["credits"]}
    assert got == pytest.approx(expected, abs=1e-9)
    assert sum(got.values()) == pytest.approx(sum(v.w for v in run.values), abs=1e-9)


def test_thread_count_does_not_change_results(synth_dir):
    single = _service(synth_dir, threads=1).run()
    many = _service(synth_dir, threads=4).run()
    assert [c.w_player for c in single.player_credits] == [c.w_player for c in many.player_credits]


def test_calibrate_only_run_skips_scoring(synth_dir):
    run = _service(synth_dir).run(score=False)
    assert run.plays
    assert run.results == []


def test_stage_timings_are_recorded(synth_dir):
    service = _service(synth_dir)
    service.run()
    assert {"load", "filter", "calibrate", "score"} <= set(service.timings)


def test_non_finite_velocity_drops_windows(barkley_spec):
    frames = play_frames(barkley_spec).copy()
    at = (frames["nflId"] == barkley_spec.carrier_id) & (frames["frameId"] == 20)
    frames.loc[at, "s"] = np.nan
    play = standardize(play_meta(barkley_spec), frames)

    service = PipelineService(RunConfig(threshold_d=1.5), threads=1, progress=False)
    result, rejects = service.process_play(play, 1.5)
    # the running peak carries the NaN into every later window
    assert result.windows == ()
    assert [r.reason for r in rejects] == ["non_finite_landmark"] * 3
    assert all(r.play_key == "2022091110-1" for r in rejects)


def test_score_single(synth_dir):
    service = _service(synth_dir)
    dataset = service.load()
    play, result = service.score_single(dataset, 2022091110, 1, 1.5)
    assert play.key == (2022091110, 1)
    assert len(result.windows) == 3
    with pytest.raises(DatasetError):
        service.score_single(dataset, 2022091110, 99, 1.5)
