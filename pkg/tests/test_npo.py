import itertools
import random

import pytest
from conftest import all_prefixes, random_matching, random_topk

from topkmatch.core import (
    InvalidInputError,
    Matching,
    TopKProfile,
    all_full_matchings,
    completions,
    is_pareto_optimal,
)
from topkmatch.npo import (
    build_improvement_digraph,
    check_npo,
    exists_npo,
    max_revealed_matching_size,
)


def npo_by_completion_enumeration(P: TopKProfile, M: Matching) -> bool:
    return all(is_pareto_optimal(R, M) for R in completions(P))


class TestImprovementDigraph:
    def test_sec4(self, sec4_profile, sec4_m):
        g = build_improvement_digraph(sec4_profile, sec4_m)
        assert g.edges == {(0, 1), (0, 2), (1, 2)}

    def test_all_top_choices(self):
        P = TopKProfile(3, ((0,), (1,), (2,)))
        M = Matching.of([(0, 0), (1, 1), (2, 2)])
        assert build_improvement_digraph(P, M).edges == frozenset()

    def test_empty_profile_two_cycle(self):
        P = TopKProfile(2, ((), ()))
        M = Matching.of([(0, 0), (1, 1)])
        g = build_improvement_digraph(P, M)
        assert g.edges == {(0, 1), (1, 0)}

    def test_rejects_partial_matching(self, sec4_profile):
        with pytest.raises(InvalidInputError):
            build_improvement_digraph(sec4_profile, Matching.of([(0, 0)]))

    def test_more_revelation_never_adds_edges_for_settled_agents(self):
        # an agent whose match is already revealed has her edge set fixed
        # by the part of the prefix above her match
        rng = random.Random(21)
        for _ in range(200):
            n = rng.randint(2, 5)
            P = random_topk(n, rng)
            M = random_matching(n, rng)
            g1 = build_improvement_digraph(P, M)
            assign = M.assignment()
            # extend one random agent's prefix by one object
            i = rng.randrange(n)
            rest = [o for o in range(n) if o not in P.prefs[i]]
            if not rest:
                continue
            prefs = list(P.prefs)
            prefs[i] = P.prefs[i] + (rng.choice(rest),)
            P2 = TopKProfile(n, tuple(prefs))
            g2 = build_improvement_digraph(P2, M)
            for a in range(n):
                if P.rank(a, assign[a]) is not None:
                    out1 = {e for e in g1.edges if e[0] == a}
                    out2 = {e for e in g2.edges if e[0] == a}
                    assert out2 <= out1


class TestCheckNpo:
    def test_sec4(self, sec4_profile, sec4_m):
        assert check_npo(sec4_profile, sec4_m)

    def test_empty_profile_never_npo(self):
        P = TopKProfile(2, ((), ()))
        for M in all_full_matchings(2):
            assert not check_npo(P, M)

    def test_exhaustive_n3_vs_oracle(self):
        prefixes = all_prefixes(3)
        matchings = list(all_full_matchings(3))
        for combo in itertools.product(prefixes, repeat=3):
            P = TopKProfile(3, combo)
            for M in matchings:
                assert check_npo(P, M) == npo_by_completion_enumeration(P, M)

    def test_random_n4_vs_oracle(self):
        rng = random.Random(4)
        for _ in range(400):
            P = random_topk(4, rng)
            M = random_matching(4, rng)
            assert check_npo(P, M) == npo_by_completion_enumeration(P, M)

    def test_monotone_under_safe_extension(self):
        # if M is fully revealed and NPO, revealing objects below each
        # agent's match cannot create a cycle
        rng = random.Random(31)
        checked = 0
        while checked < 100:
            n = rng.randint(2, 5)
            P = random_topk(n, rng, min_k=1)
            M = exists_npo(P)
            if M is None:
                continue
            assign = M.assignment()
            if any(P.rank(i, assign[i]) is None for i in range(n)):
                continue
            if not check_npo(P, M):
                continue
            prefs = [list(p) for p in P.prefs]
            for i in range(n):
                below = [o for o in range(n) if o not in prefs[i]]
                rng.shuffle(below)
                prefs[i].extend(below[: rng.randint(0, len(below))])
            P2 = TopKProfile(n, tuple(tuple(p) for p in prefs))
            assert check_npo(P2, M)
            checked += 1


class TestExistsNpo:
    def test_sec4(self, sec4_profile):
        M = exists_npo(sec4_profile)
        assert sorted(M.pairs) == [(0, 2), (1, 1), (2, 0)]

    def test_all_reveal_same_object(self):
        P = TopKProfile(3, ((0,), (0,), (0,)))
        assert exists_npo(P) is None

    def test_distinct_tops(self):
        n = 5
        P = TopKProfile(n, tuple((i,) for i in range(n)))
        M = exists_npo(P)
        assert sorted(M.pairs) == [(i, i) for i in range(n)]

    def test_n1_empty_profile(self):
        P = TopKProfile(1, ((),))
        M = exists_npo(P)
        assert sorted(M.pairs) == [(0, 0)]

    def test_characterization_and_soundness(self):
        rng = random.Random(77)
        for _ in range(1200):
            n = rng.randint(3, 6)
            P = random_topk(n, rng)
            M = exists_npo(P)
            assert (M is not None) == (max_revealed_matching_size(P) >= n - 1)
            if M is not None:
                assert check_npo(P, M)

    def test_returned_matching_passes_completion_oracle(self):
        rng = random.Random(78)
        for _ in range(150):
            n = rng.randint(1, 4)
            P = random_topk(n, rng)
            M = exists_npo(P)
            if M is not None:
                assert npo_by_completion_enumeration(P, M)
