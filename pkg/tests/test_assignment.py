import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from topkmatch.assignment import (
    LabeledBipartiteGraph,
    WeightedBipartiteGraph,
    brute_force_max_matching_size,
    brute_force_rank_maximal,
    graph_from_topk,
    label_signature,
    max_cardinality_matching,
    min_weight_max_cardinality,
    rank_maximal_matching,
    signature_weight,
    weighted_from_topk,
)
from topkmatch.core import InvalidInputError, Matching, TopKProfile
from topkmatch.nrm import tied_tail_profile


def random_labeled(n: int, rng: random.Random) -> LabeledBipartiteGraph:
    edges = []
    for a in range(n):
        for o in range(n):
            if rng.random() < 0.55:  # random forbidden set = missing edges
                edges.append((a, o, rng.randint(1, n)))
    return LabeledBipartiteGraph(
        n, tuple(range(n)), tuple(range(n)), tuple(edges)
    )


def random_weighted(n: int, rng: random.Random) -> WeightedBipartiteGraph:
    edges = []
    for a in range(n):
        for o in range(n):
            if rng.random() < 0.5:
                edges.append((a, o, rng.randint(0, n)))
    return WeightedBipartiteGraph(
        n, tuple(range(n)), tuple(range(n)), tuple(edges)
    )


class TestMaxCardinality:
    def test_sec4_revealed_graph(self, sec4_profile):
        g = weighted_from_topk(sec4_profile)
        M = max_cardinality_matching(g)
        assert len(M) == 3
        assert sorted(M.pairs) == [(0, 2), (1, 1), (2, 0)]

    def test_empty(self):
        g = WeightedBipartiteGraph(3, (0, 1, 2), (0, 1, 2), ())
        assert len(max_cardinality_matching(g)) == 0

    def test_single_shared_object(self):
        P = TopKProfile(3, ((0,), (0,), (0,)))
        assert len(max_cardinality_matching(weighted_from_topk(P))) == 1

    def test_matches_brute_force_size(self):
        rng = random.Random(42)
        for _ in range(300):
            n = rng.randint(1, 8)
            g = random_weighted(n, rng)
            assert len(max_cardinality_matching(g)) == (
                brute_force_max_matching_size(g)
            )

    def test_deterministic(self):
        rng = random.Random(5)
        for _ in range(20):
            g = random_weighted(6, rng)
            a = max_cardinality_matching(g)
            b = max_cardinality_matching(g)
            assert a.pairs == b.pairs


def enumerate_matchings(edges):
    agents = sorted({a for a, _, _ in edges})
    adj = {a: [(o, w) for aa, o, w in edges if aa == a] for a in agents}

    def go(idx, used):
        if idx == len(agents):
            yield []
            return
        a = agents[idx]
        for rest in go(idx + 1, used):
            yield rest
        for o, w in adj[a]:
            if o not in used:
                for rest in go(idx + 1, used | {o}):
                    yield [(a, o, w)] + rest

    yield from go(0, frozenset())


class TestMinWeightMaxCardinality:
    def test_sec4_revealed_weights(self, sec4_profile):
        g = weighted_from_topk(sec4_profile)
        M = min_weight_max_cardinality(g)
        assert sorted(M.pairs) == [(0, 2), (1, 1), (2, 0)]

    def test_unreachable_third_agent(self):
        # a1, a2 only reveal o1; a3 reveals o2 and o3
        g = WeightedBipartiteGraph(
            3, (0, 1, 2), (0, 1, 2),
            ((0, 0, 1), (1, 0, 1), (2, 1, 1), (2, 2, 2)),
        )
        M = min_weight_max_cardinality(g)
        assert len(M) == 2
        weight = {(a, o): w for a, o, w in g.edges}
        assert sum(weight[p] for p in M.pairs) == 2

    def test_single_pair(self):
        g = WeightedBipartiteGraph(1, (0,), (0,), ((0, 0, 1),))
        M = min_weight_max_cardinality(g)
        assert sorted(M.pairs) == [(0, 0)]

    def test_lexicographic_optimality_exhaustive(self):
        rng = random.Random(17)
        for _ in range(150):
            n = rng.randint(1, 7)
            g = random_weighted(n, rng)
            M = min_weight_max_cardinality(g)
            weight = {(a, o): w for a, o, w in g.edges}
            w_m = sum(weight[p] for p in M.pairs)
            for alt in enumerate_matchings(g.edges):
                w_alt = sum(w for _, _, w in alt)
                assert len(alt) < len(M) or (
                    len(alt) == len(M) and w_alt >= w_m
                )


class TestRankMaximal:
    def test_sec4_tied_tail_graph(self, sec4_profile):
        weak = tied_tail_profile(sec4_profile)
        edges = tuple(
            (a, o, weak.rank(a, o)) for a in range(3) for o in range(3)
        )
        g = LabeledBipartiteGraph(3, (0, 1, 2), (0, 1, 2), edges)
        _, sig = rank_maximal_matching(g)
        assert sig == (1, 2, 0)
        _, bsig = brute_force_rank_maximal(g)
        assert bsig == (1, 2, 0)

    def test_single_edge(self):
        g = LabeledBipartiteGraph(4, (0,), (2,), ((0, 2, 3),))
        _, sig = rank_maximal_matching(g)
        assert sig == (0, 0, 1, 0)

    def test_complete_all_label_one(self):
        n = 5
        edges = tuple((a, o, 1) for a in range(n) for o in range(n))
        g = LabeledBipartiteGraph(n, tuple(range(n)), tuple(range(n)), edges)
        M, sig = rank_maximal_matching(g)
        assert sig == (n, 0, 0, 0, 0)
        assert len(M) == n

    def test_empty_graph(self):
        g = LabeledBipartiteGraph(3, (), (), ())
        M, sig = brute_force_rank_maximal(g)
        assert len(M) == 0 and sig == (0, 0, 0)

    def test_agrees_with_brute_force(self):
        rng = random.Random(99)
        for _ in range(1000):
            n = rng.randint(1, 7)
            g = random_labeled(n, rng)
            _, sig = rank_maximal_matching(g)
            _, bsig = brute_force_rank_maximal(g)
            assert sig == bsig

    def test_brute_force_size_guard(self):
        edges = tuple((a, a, 1) for a in range(9))
        g = LabeledBipartiteGraph(9, tuple(range(9)), tuple(range(9)), edges)
        with pytest.raises(InvalidInputError):
            brute_force_rank_maximal(g)


class TestWeightEncoding:
    @given(
        st.integers(min_value=1, max_value=8).flatmap(
            lambda n: st.tuples(
                st.lists(
                    st.integers(min_value=0, max_value=n),
                    min_size=n, max_size=n,
                ),
                st.lists(
                    st.integers(min_value=0, max_value=n),
                    min_size=n, max_size=n,
                ),
            )
        )
    )
    def test_weight_order_matches_lex_order(self, pair):
        a, b = pair
        n = len(a)
        wa, wb = signature_weight(a, n), signature_weight(b, n)
        assert (wa > wb) == (tuple(a) > tuple(b))
        assert (wa == wb) == (tuple(a) == tuple(b))


class TestDeterminism:
    def test_solvers_are_deterministic(self):
        rng = random.Random(123)
        for _ in range(10):
            g = random_labeled(6, rng)
            assert rank_maximal_matching(g) == rank_maximal_matching(g)
            wg = random_weighted(6, rng)
            assert (
                min_weight_max_cardinality(wg).pairs
                == min_weight_max_cardinality(wg).pairs
            )
