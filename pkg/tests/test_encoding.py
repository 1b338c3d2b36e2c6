import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scoregraph.encoding import (
    Answer,
    IllegalAnswerError,
    ReplayError,
    Session,
    SessionError,
    SessionOptions,
    SessionState,
    SessionStateError,
    WeakOrderOracle,
    drive_session,
    expected_max_answers,
    replay,
    start_session,
)
from scoregraph.graph import Degree, Edge, Relation, longest_representative_path

from conftest import elements, groups_of, random_ranks


def run_hidden(ids, ranks, seed, much_gap=None, allow_equal=True):
    options = SessionOptions(rng_seed=seed, allow_equal=allow_equal)
    session = start_session("cat", ids, options)
    return drive_session(session, WeakOrderOracle(ranks, much_gap=much_gap))


# -- start_session ---------------------------------------------------------------


def test_single_element_session_is_done_immediately():
    s = start_session("cat", ["only"], SessionOptions(rng_seed=1))
    assert s.done
    g = s.graph()
    assert g.nodes == ("only",)
    assert g.edges == ()


def test_empty_element_list_rejected():
    with pytest.raises(SessionError):
        start_session("cat", [], SessionOptions())


def test_insertion_order_must_be_permutation():
    with pytest.raises(SessionError):
        start_session("cat", ["a", "b"], SessionOptions(insertion_order=("a", "x")))


def test_expected_answer_count_is_nlogn():
    ids = elements(65)
    s = start_session("cat", ids, SessionOptions(rng_seed=3))
    bound = 65 * (math.ceil(math.log2(65)) + 1)
    assert 0 < s.expected_max <= bound
    assert expected_max_answers(65) == s.expected_max


def test_same_seed_and_answers_give_byte_identical_graphs():
    ids = elements(40)
    ranks = random_ranks(random.Random(5), ids, 0.25)
    g1 = run_hidden(ids, ranks, seed=9).graph()
    g2 = run_hidden(ids, ranks, seed=9).graph()
    assert g1.canonical_bytes() == g2.canonical_bytes()


# -- next_question ------------------------------------------------------------------


def test_first_probe_is_random_over_all_representatives():
    ids = elements(9)
    ranks = {e: i for i, e in enumerate(ids)}  # strict order, no equals
    seen = set()
    for seed in range(40):
        s = run_hidden(ids[:8], ranks, seed=seed)
        assert len(s.sorted_reps) == 8
        # resume with the ninth element: its first probe is the random one
        s2 = start_session("cat", ids, SessionOptions(rng_seed=seed))
        oracle = WeakOrderOracle(ranks)
        while not s2.done and s2.answered_count < len(s.answer_log):
            q = s2.next_question()
            s2.submit_answer(oracle.compare(q.new_element, q.probe))
        q = s2.next_question()
        assert q.new_element == ids[8]
        seen.add(s2.sorted_reps.index(q.probe))
    assert seen.issuperset(range(8))  # every index shows up across seeds


def test_binary_search_steps_after_random_probe():
    # find a seed whose random first probe lands at index 5 of 8
    ids = elements(9)
    ranks = {e: i for i, e in enumerate(ids)}
    oracle = WeakOrderOracle(ranks)
    for seed in range(2000):
        s = start_session("cat", ids, SessionOptions(rng_seed=seed))
        while not s.done:
            q = s.next_question()
            if q.new_element == ids[8] and len(s.sorted_reps) == 8:
                break
            s.submit_answer(oracle.compare(q.new_element, q.probe))
        if s.done:
            continue
        q = s.next_question()
        if s.sorted_reps.index(q.probe) != 5:
            continue
        # answering greater narrows the window to (5, 8); next probe is index 6
        s.submit_answer(Answer.GREATER)
        q2 = s.next_question()
        assert q2.new_element == ids[8]
        assert s.sorted_reps.index(q2.probe) == 6
        return
    pytest.fail("no seed produced a first probe at index 5")


def test_window_of_size_one_probes_that_representative():
    # two elements: the second insertion has a single candidate window
    s = start_session("cat", ["a", "b"], SessionOptions(rng_seed=0))
    q = s.next_question()
    assert (q.new_element, q.probe) == ("b", "a")


def test_next_question_raises_when_done():
    s = start_session("cat", ["a"], SessionOptions())
    with pytest.raises(SessionStateError):
        s.next_question()


# -- submit_answer -------------------------------------------------------------------


def test_equal_on_first_probe_costs_one_question():
    s = start_session("cat", ["a", "b"], SessionOptions(rng_seed=0))
    s.submit_answer(Answer.EQUAL)
    assert s.done
    assert s.answered_count == 1
    g = s.graph()
    assert g.edges == (Edge("a", "b", Degree.EQUAL),)


def test_strict_total_order_of_64_is_reproduced_exactly():
    ids = elements(64)
    rng = random.Random(11)
    shuffled = ids[:]
    rng.shuffle(shuffled)
    ranks = {e: i for i, e in enumerate(shuffled)}
    s = run_hidden(ids, ranks, seed=21)
    got = [members[0] for _, members in s.ordered_sets()]
    want = sorted(ids, key=lambda e: ranks[e])
    assert got == want
    assert all(len(m) == 1 for _, m in s.ordered_sets())


def test_much_greater_records_degree2_edge_from_probe():
    s = start_session("cat", ["a", "b"], SessionOptions(rng_seed=0))
    s.submit_answer(Answer.MUCH_GREATER)
    assert s.graph().edges == (Edge("a", "b", Degree.MUCH_GREATER),)


def test_disallowed_answers_rejected():
    s = start_session("cat", ["a", "b"], SessionOptions(rng_seed=0, allow_equal=False))
    with pytest.raises(IllegalAnswerError):
        s.submit_answer(Answer.EQUAL)
    s2 = start_session("cat", ["a", "b"], SessionOptions(rng_seed=0, allow_degree2=False))
    with pytest.raises(IllegalAnswerError):
        s2.submit_answer(Answer.MUCH_LESS)


def test_equal_mid_insertion_repoints_edges_to_representative():
    # c sits between a and b; d compares against one of them and then equals c
    ids = ["a", "b", "c", "d"]
    ranks = {"a": 0, "b": 2, "c": 1, "d": 1}
    s = run_hidden(ids, ranks, seed=4)
    g = s.graph()
    assert g.relation_of("c", "d") is Relation.EQUAL
    # no strict edge may touch d: everything was re-pointed to c
    for e in g.edges:
        if e.degree is not Degree.EQUAL:
            assert "d" not in (e.src, e.dst)


# -- replay -----------------------------------------------------------------------


def test_full_log_replays_to_identical_graph():
    ids = elements(30)
    ranks = random_ranks(random.Random(2), ids, 0.3)
    s = run_hidden(ids, ranks, seed=7)
    r = replay(s.log_json_dict())
    assert r.done
    assert r.graph().canonical_bytes() == s.graph().canonical_bytes()
    assert r.log_json_dict() == s.log_json_dict()


def test_empty_log_is_fresh_session():
    s = start_session("cat", ["a", "b", "c"], SessionOptions(rng_seed=13))
    log = s.log_json_dict()
    log["answers"] = []
    r = replay(log)
    assert r.state is SessionState.AWAITING_ANSWER
    assert r.next_question() == s.next_question()


def test_truncated_log_pauses_at_exact_next_question():
    ids = elements(25)
    ranks = random_ranks(random.Random(8), ids, 0.2)
    options = SessionOptions(rng_seed=31)
    oracle = WeakOrderOracle(ranks)

    full = drive_session(start_session("cat", ids, options), oracle)
    for cut in (1, 7, len(full.answer_log) - 1):
        live = start_session("cat", ids, options)
        for _ in range(cut):
            q = live.next_question()
            live.submit_answer(oracle.compare(q.new_element, q.probe))
        log = full.log_json_dict()
        log["answers"] = log["answers"][:cut]
        resumed = replay(log)
        assert resumed.state is live.state
        if not live.done:
            assert resumed.next_question() == live.next_question()
        assert resumed.graph().canonical_bytes() == live.graph().canonical_bytes()


def test_replay_rejects_tampered_log():
    s = run_hidden(["a", "b", "c"], {"a": 0, "b": 1, "c": 2}, seed=1)
    log = s.log_json_dict()
    log["answers"][0]["b"] = "c" if log["answers"][0]["b"] != "c" else "a"
    with pytest.raises(ReplayError):
        replay(log)


def test_replay_rejects_overlong_log():
    s = run_hidden(["a", "b"], {"a": 0, "b": 1}, seed=1)
    log = s.log_json_dict()
    log["answers"].append(dict(log["answers"][0]))
    with pytest.raises(ReplayError):
        replay(log)


# -- invariants ----------------------------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from([0.0, 0.2, 0.5]))
def test_hidden_weak_order_reproduced(seed, tie_prob):
    rng = random.Random(seed)
    n = rng.randint(2, 60)
    ids = elements(n)
    ranks = random_ranks(rng, ids, tie_prob)
    s = run_hidden(ids, ranks, seed=seed ^ 0xABCDEF)
    assert s.answered_count <= n * (math.ceil(math.log2(n)) + 1)
    got = [frozenset(m) for _, m in s.ordered_sets()]
    assert got == groups_of(ranks)
    lp = longest_representative_path(s.graph())
    assert lp.totally_ordered


def test_differently_seeded_runs_never_oppose():
    ids = elements(65)
    ranks = random_ranks(random.Random(77), ids, 0.3)
    g1 = run_hidden(ids, ranks, seed=1).graph()
    g2 = run_hidden(ids, ranks, seed=2).graph()
    for i in range(len(ids)):
        for j in range(i + 1, len(ids)):
            assert g1.relation_of(ids[i], ids[j]) is g2.relation_of(ids[i], ids[j])


def test_question_overlap_between_seeds_is_partial():
    # overlap = |q1 & q2| / |q1 | q2|; the floor is set by forced comparisons
    # against each element's eventual neighbors, which every run must ask
    ids = elements(65)
    for trial in range(3):
        ranks = random_ranks(random.Random(42 + trial), ids, 0.2)
        s1 = run_hidden(ids, ranks, seed=101 + trial)
        s2 = run_hidden(ids, ranks, seed=202 + trial)
        q1 = {frozenset((a.new_element, a.probe)) for a in s1.answer_log}
        q2 = {frozenset((a.new_element, a.probe)) for a in s2.answer_log}
        overlap = len(q1 & q2) / len(q1 | q2)
        assert overlap < 0.5
