from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crossgen.engine import (
    Action,
    GeneratorConfig,
    Policy,
    TabuList,
    default_tenure,
    pick_word,
    place,
    placeable,
    reconnect,
    run_generator,
    victim,
    wraparound,
)
from crossgen.grid import ACROSS, DOWN, Grid, Placement, violations
from crossgen.vocab import sample_vocabulary
from oracles import oracle_victim, oracle_victims
from strategies import grids


def pick_push() -> Grid:
    return Grid(13).write("PICK", 0, 0, ACROSS).write("PUSH", 0, 0, DOWN)


class TestGoldens:
    def test_pick_word(self):
        assert pick_word(pick_push(), ["HALL", "FRESH", "BUSH", "LAZY"]) == "HALL"

    def test_placeable_false(self):
        g = Grid(13).write("BLUE", 0, 0, ACROSS).write("BROWN", 0, 0, DOWN)
        assert placeable("HELLO", g) is False

    def test_place_red(self):
        g = Grid(13).write("TWO", 0, 0, ACROSS).write("THREE", 0, 0, DOWN)
        out = place("RED", g)
        assert out.placement("RED").anchor == (2, 0, ACROSS)

    def test_victim_apple(self):
        g = Grid(3, 5).write("APPLE", 1, 0, ACROSS).write("CAT", 0, 0, DOWN)
        assert victim(g, ["SINK", "ANT", "PINK", "BUSH"]) == "APPLE"

    def test_wraparound_five(self):
        g = Grid(13).write("FOUR", 0, 0, ACROSS).write("FIVE", 0, 0, DOWN)
        out, rest = wraparound(g, ["ONE", "TWO", "THREE"])
        assert out.words == ["FOUR"]
        assert rest == ["ONE", "TWO", "THREE", "FIVE"]


class TestPlaceable:
    def test_red_true(self):
        g = Grid(13).write("TWO", 0, 0, ACROSS).write("THREE", 0, 0, DOWN)
        assert placeable("RED", g)

    def test_empty_grid(self):
        assert placeable("ANY", Grid(5))


class TestPickWord:
    def test_empty_list(self):
        assert pick_word(pick_push(), []) is None

    def test_third_word(self):
        assert pick_word(pick_push(), ["XYZ", "QQ", "HALL"]) == "HALL"

    def test_tabu_skipped(self):
        assert pick_word(pick_push(), ["HALL", "LAZY", "CHIP"], tabu={"HALL"}) == "CHIP"

    def test_all_tabu(self):
        assert pick_word(pick_push(), ["HALL"], tabu={"HALL"}) is None


class TestPlace:
    def test_unique_position(self):
        g = Grid(13).write("TWO", 0, 0, ACROSS).write("THREE", 0, 0, DOWN)
        assert g.legal_positions("RED") == [(2, 0, ACROSS)]

    def test_first_word_centred(self):
        assert place("HELLO", Grid(13)).placement("HELLO").anchor == (6, 4, ACROSS)

    def test_prefers_more_crossings(self):
        g = Grid(9).write("ABCDE", 2, 0, ACROSS).write("AXE", 2, 0, DOWN)
        g = g.write("CQE", 2, 2, DOWN).write("EZE", 2, 4, DOWN)
        # an across word through row 4 meets all three down words
        out = place("EWEVE", g)
        assert out.placement("EWEVE").anchor == (4, 0, ACROSS)


class TestVictim:
    def test_empty_list(self):
        assert victim(pick_push(), []) is None

    def test_nothing_helps(self):
        g = Grid(3, 5).write("CAT", 0, 0, ACROSS).write("CUP", 0, 0, DOWN)
        assert victim(g, ["XYZ"]) is None
        assert oracle_victims(g, ["XYZ"]) == []

    def test_single_word_grid(self):
        g = Grid(4).write("ABCD", 0, 0, ACROSS)
        assert victim(g, ["WXYZ"]) == "ABCD"

    def test_prefers_connected_removal(self):
        # CDE comes first and frees a slot, but removing it splits the grid
        g = Grid(3, 7).write("CDE", 0, 2, DOWN).write("ABC", 0, 0, ACROSS).write("EFG", 2, 2, ACROSS)
        words = ["CQE", "QE"]
        assert oracle_victims(g, words) == ["CDE", "ABC", "EFG"]
        assert victim(g, words, prefer_connected=False) == "CDE"
        assert victim(g, words) == "ABC"

    @settings(max_examples=80)
    @given(grids(max_size=9, max_words=6), st.lists(st.text("ABCDE", min_size=2, max_size=4), max_size=3))
    def test_matches_brute_force(self, fixture, extra):
        g, left = fixture
        words = list(dict.fromkeys(left + extra))
        assert victim(g, words) == oracle_victim(g, words)
        assert victim(g, words, prefer_connected=False) == oracle_victim(g, words, prefer_connected=False)


class TestWraparound:
    def test_single_word(self):
        out, rest = wraparound(Grid(5).write("HELLO", 0, 0, ACROSS), ["AB"])
        assert len(out) == 0 and rest == ["AB", "HELLO"]

    def test_two_in_reverse_order(self):
        g = Grid(13).write("FOUR", 0, 0, ACROSS).write("FIVE", 0, 0, DOWN).write("VAST", 2, 0, ACROSS)
        g, rest = wraparound(g, [])
        g, rest = wraparound(g, rest)
        assert rest == ["VAST", "FIVE"] and g.words == ["FOUR"]

    @given(grids(), st.lists(st.text("XYZ", min_size=2, max_size=3), max_size=3, unique=True))
    def test_multiset_preserved(self, fixture, tail):
        g, _ = fixture
        if not g.placements:
            return
        out, rest = wraparound(g, tail)
        assert Counter(out.words) + Counter(rest) == Counter(g.words) + Counter(tail)


class TestReconnect:
    @staticmethod
    def split() -> Grid:
        return Grid(9, 9, [Placement("ABC", 0, 0, DOWN), Placement("XYZ", 0, 4, DOWN)])

    def test_bridges_two_components(self):
        g = self.split()
        assert not g.connected
        out = reconnect(g, ["QQ", "CQQQZ"])
        assert out.connected
        assert out.placement("CQQQZ").anchor == (2, 0, ACROSS)
        assert violations(out.rows, out.cols, out.placements) == []

    def test_no_bridge(self):
        g = self.split()
        out = reconnect(g, ["QQ", "MNOP"])
        assert out == g and not out.connected

    def test_already_connected(self):
        g = pick_push()
        assert reconnect(g, ["HALL"]) is g


class TestTabu:
    def test_window(self):
        t = TabuList(2)
        t.push("A", 5)
        assert t.blocked(6) == {"A"} and t.blocked(7) == {"A"}
        assert t.blocked(8) == frozenset()

    def test_bounded_fifo(self):
        t = TabuList(2)
        for k, w in enumerate("ABC"):
            t.push(w, k)
        assert len(t) == 2 and t.blocked(3) == {"B", "C"}

    def test_default_tenure(self):
        assert default_tenure(5) == 2 and default_tenure(26) == 3 and default_tenure(100) == 10

    def test_negative(self):
        with pytest.raises(ValueError):
            TabuList(-1)


class TestConfig:
    def test_coerces(self):
        cfg = GeneratorConfig(strategy="letter", order="desc", reset_policy="continue")
        assert cfg.to_dict()["reset_policy"] == "continue"

    @pytest.mark.parametrize("kw", [{"max_iter": -1}, {"ge_max": 0}, {"tt": -2}, {"order": "up"}])
    def test_rejects(self, kw):
        with pytest.raises(ValueError):
            GeneratorConfig(**kw)


def run_logged(vocab, **kw):
    grids_seen = []
    res = run_generator(vocab, GeneratorConfig(**kw), observer=lambda row, g: grids_seen.append((row, g)))
    return res, grids_seen


class TestGenerator:
    def test_single_word(self):
        res = run_generator(["HELLO"])
        assert res.n_best == 1 and res.iterations == 1
        assert res.best.placement("HELLO").anchor == (2, 0, ACROSS)

    def test_two_crossing_words(self):
        res = run_generator(["CAT", "TOP"], GeneratorConfig(max_iter=10))
        assert res.n_best == 2
        assert violations(res.best.rows, res.best.cols, res.best.placements) == []

    def test_empty_vocab(self):
        with pytest.raises(ValueError):
            run_generator([])

    def test_word_beyond_max_grid(self):
        with pytest.raises(ValueError, match="max grid"):
            run_generator(["ABCDEFG"], GeneratorConfig(max_grid=5))

    def test_order_must_be_permutation(self):
        with pytest.raises(ValueError):
            run_generator(["CAT", "TOP"], order=["CAT"])

    def test_deterministic(self):
        vocab = sample_vocabulary(30, 4)
        a = run_generator(vocab, GeneratorConfig(max_iter=400))
        b = run_generator(vocab, GeneratorConfig(max_iter=400))
        assert a.log == b.log and a.best == b.best

    def test_target_stops_early(self):
        res = run_generator(sample_vocabulary(30, 1), GeneratorConfig(target_words=8))
        assert res.n_best == 8 and res.first_hit(8) == res.iterations

    def test_reset_epochs_grow_grid(self):
        res, seen = run_logged(sample_vocabulary(30, 2), max_iter=300, ge_max=60)
        resets = [row for row, _ in seen if row.action is Action.RESET]
        assert resets and all(g.rows == g.cols for _, g in seen)
        sizes = [row.size for row in resets]
        assert sizes == sorted(sizes) and len(set(sizes)) == len(sizes)
        for row, g in seen:
            if row.action is Action.RESET:
                assert len(g) == 0

    def test_continue_keeps_words(self):
        _, seen = run_logged(sample_vocabulary(30, 2), max_iter=300, ge_max=60, reset_policy=Policy.CONTINUE)
        for (prev, pg), (row, g) in zip(seen, seen[1:]):
            if row.action is Action.RESIZE:
                assert sorted(g.words) == sorted(pg.words) and g.rows == pg.rows + 1

    def test_max_grid_stops(self):
        res = run_generator(sample_vocabulary(40, 3, max_len=7),
                            GeneratorConfig(max_iter=5000, ge_max=30, max_grid=9))
        assert res.final.rows <= 9

    def test_log_csv(self):
        res = run_generator(["CAT", "TOP"])
        lines = res.log_csv().splitlines()
        assert lines[0] == "iteration,action,word,n_words,N"
        assert lines[1].startswith("1,PLACE,")


@settings(max_examples=12)
@given(st.integers(0, 10_000), st.integers(10, 40), st.sampled_from(list(Policy)))
def test_run_invariants(seed, size, policy):
    vocab = sample_vocabulary(size, seed, max_len=9)
    tt = default_tenure(size)
    res, seen = run_logged(vocab, max_iter=250, ge_max=50, reset_policy=policy)
    best_counts = [m.n_best for m in res.milestones]
    assert best_counts == sorted(best_counts)
    assert len(res.best) == res.n_best and res.best.connected
    removed_at: dict[str, int] = {}
    removals: list[int] = []
    prev_connected = True
    for row, g in seen:
        assert violations(g.rows, g.cols, g.placements, require_connected=False) == []
        assert set(g.words) <= set(vocab)
        if not g.connected and prev_connected:
            assert row.action in (Action.VICTIM, Action.WRAP)
        prev_connected = g.connected
        if row.action in (Action.RESET,):
            removed_at.clear()
        elif row.action in (Action.VICTIM, Action.WRAP):
            removed_at[row.word] = row.iteration
            removals.append(row.iteration)
        elif row.action is Action.PLACE and row.word in removed_at and row.n_words > 1:
            k = removed_at[row.word]
            others = sum(1 for r in removals if k < r < row.iteration)
            assert row.iteration - k > tt or others >= tt
