# tests/test_attribution.py
import pytest
from hypothesis import given, settings as hsettings, strategies as st

from conftest import make_window
from fractional_tackles.attribution.credit import attribute
from models.entities import CaseTag, WindowValue
from utils.errors import InvariantViolation


def _credit(w, sets, key=(1, 1), index=1):
    window = make_window(5.0, 1.0, 5.0, 0.0, defenders=sets, key=key, index=index)
    value = WindowValue(play_key=key, window_index=index, w=w, case_tag=CaseTag.PLAIN)
    return attribute(window, value)


def _totals(player_credits):
    return {c.defender_id: c.w_player for c in player_credits}


def test_overlapping_defenders_share_equally():
    frames, players = _credit(0.056, [{37}, {37, 51}, {37, 51}, {51}])
    assert [f.w_frame for f in frames] == pytest.approx([0.014] * 4)
    assert frames[1].defender_shares == pytest.approx({37: 0.007, 51: 0.007})
    assert _totals(players) == pytest.approx({37: 0.028, 51: 0.028})
    assert {c.defender_id: c.frames_involved for c in players} == {37: 3, 51: 3}


def test_single_defender_takes_everything():
    _, players = _credit(0.3, [{9}, {9}, {9}])
    assert len(players) == 1
    assert players[0].w_player == pytest.approx(0.3)
    assert players[0].frames_involved == 3


def test_uneven_presence():
    _, players = _credit(0.12, [{1, 2, 3}, {1}, {2}])
    totals = _totals(players)
    assert totals[1] == pytest.approx(0.04 / 3 + 0.04)
    assert totals[2] == pytest.approx(0.04 / 3 + 0.04)
    assert totals[3] == pytest.approx(0.04 / 3)
    assert sum(totals.values()) == pytest.approx(0.12, abs=1e-12)


def test_credits_sorted_by_defender():
    _, players = _credit(0.5, [{9, 3}, {5}])
    assert [c.defender_id for c in players] == [3, 5, 9]


def test_zero_value_window_still_lists_defenders():
    _, players = _credit(0.0, [{4}, {4, 8}])
    assert [(c.defender_id, c.w_player, c.frames_involved) for c in players] == [(4, 0.0, 2), (8, 0.0, 1)]


def test_mismatched_value_is_an_invariant_violation():
    window = make_window(5.0, 1.0, 5.0, 0.0, index=1)
    value = WindowValue(play_key=(1, 1), window_index=2, w=0.2, case_tag=CaseTag.PLAIN)
    with pytest.raises(InvariantViolation):
        attribute(window, value)


def test_empty_defender_set_is_an_invariant_violation():
    with pytest.raises(InvariantViolation):
        _credit(0.2, [{1}, set(), {1}])


_sets = st.lists(
    st.frozensets(st.integers(min_value=1, max_value=12), min_size=1, max_size=5),
    min_size=1,
    max_size=30,
)


@hsettings(max_examples=300, deadline=None)
@given(sets=_sets, w=st.floats(min_value=0.0, max_value=1.0))
def test_conservation_and_nonnegativity(sets, w):
    frames, players = _credit(w, sets)
    assert sum(c.w_player for c in players) == pytest.approx(w, abs=1e-9)
    assert sum(f.w_frame for f in frames) == pytest.approx(w, abs=1e-9)
    assert all(c.w_player >= 0.0 for c in players)
    assert all(share >= 0.0 for f in frames for share in f.defender_shares.values())


@hsettings(max_examples=200, deadline=None)
@given(sets=_sets, w=st.floats(min_value=0.0, max_value=1.0), perm=st.permutations(list(range(1, 13))))
def test_relabeling_defenders_permutes_credits(sets, w, perm):
    relabel = dict(zip(range(1, 13), perm))
    _, players = _credit(w, sets)
    _, relabeled = _credit(w, [{relabel[k] for k in s} for s in sets])
    assert _totals(relabeled) == {relabel[k]: v for k, v in _totals(players).items()}


@hsettings(max_examples=200, deadline=None)
@given(sets=_sets, w=st.floats(min_value=0.0, max_value=1.0))
def test_equal_presence_gets_equal_credit(sets, w):
    shadowed = [set(s) | ({100} if 1 in s else set()) for s in sets]
    _, players = _credit(w, shadowed)
    totals = _totals(players)
    if 1 in totals:
        assert totals[100] == totals[1]
