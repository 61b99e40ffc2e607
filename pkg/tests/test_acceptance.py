"""Acceptance suite: one test (one pass/fail line under pytest -v) per
release criterion.  Each test restates its tolerance and time budget and is
self-contained, so a red line here points directly at the broken guarantee.
"""

import itertools
import math
import random
import time
from pathlib import Path

from conftest import all_prefixes, random_full, random_matching, random_topk
from fastapi.testclient import TestClient

from topkmatch.assignment import (
    LabeledBipartiteGraph,
    brute_force_rank_maximal,
    rank_maximal_matching,
)
from topkmatch.core import (
    FullProfile,
    Matching,
    TopKProfile,
    all_full_matchings,
    completions,
    is_pareto_optimal,
)
from topkmatch.elicitation import (
    NpoAdaptiveAdversary,
    NpoLowerBoundParams,
    NrmAdaptiveAdversary,
    NrmLowerBoundParams,
    SqrtNpoEngine,
    StaticOracle,
    elicit_naive,
    elicit_npo,
    gen_npo_lb_instance,
    gen_nrm_lb_instance,
    induced_profile,
    nrm_opt_plan,
    opt_queries_bruteforce,
    opt_strategy_npo_lb,
    run_engine,
)
from topkmatch.io_json import parse_instance
from topkmatch.npo import check_npo, exists_npo, max_revealed_matching_size
from topkmatch.nrm import SigOptQuery, brute_force_nrm_check, check_nrm, exists_nrm, sig_opt
from topkmatch.service import create_app

DATA = Path(__file__).parent / "data"

SEC4_P = TopKProfile(3, ((0, 1, 2), (0, 1), (0,)))
SEC4_M = Matching.of([(0, 2), (1, 1), (2, 0)])
SEC4_M_PRIME = Matching.of([(0, 0), (1, 1), (2, 2)])
SEC4_TRUTH = FullProfile(3, ((0, 1, 2), (0, 1, 2), (0, 2, 1)))


def elicited_profile(transcript) -> TopKProfile:
    prefs: list[list[int]] = [[] for _ in range(transcript.n)]
    for _, agent, _, obj in transcript.events:
        prefs[agent].append(obj)
    return TopKProfile(transcript.n, tuple(tuple(p) for p in prefs))


def test_c01_worked_example_exact_and_fast():
    """check_npo(M)=true, check_nrm(M)=false, check_nrm(M')=true, exists_nrm
    signature (1,2,0); exact values, best-of-five wall time < 1 ms."""

    def body():
        assert check_npo(SEC4_P, SEC4_M)
        assert not check_nrm(SEC4_P, SEC4_M)
        assert check_nrm(SEC4_P, SEC4_M_PRIME)
        M = exists_nrm(SEC4_P)
        sig, _ = sig_opt(SEC4_P, SigOptQuery.whole_instance(3))
        assert sig == (1, 2, 0)
        assert check_nrm(SEC4_P, M)

    body()  # warm-up (imports, caches)
    elapsed = []
    for _ in range(5):
        t0 = time.perf_counter()
        body()
        elapsed.append(time.perf_counter() - t0)
    assert min(elapsed) < 1e-3, f"worked example took {min(elapsed) * 1e3:.2f} ms"


def test_c02_npo_oracle_equivalence():
    """check_npo vs completion-enumeration brute force: exhaustive n=3 sweep
    x all 6 matchings plus 1,000 random (P, M) pairs at n=4; 100%, < 2 min."""
    t0 = time.perf_counter()
    matchings3 = list(all_full_matchings(3))
    for combo in itertools.product(all_prefixes(3), repeat=3):
        P = TopKProfile(3, combo)
        for M in matchings3:
            expected = all(is_pareto_optimal(R, M) for R in completions(P))
            assert check_npo(P, M) == expected
    rng = random.Random(1001)
    for _ in range(1000):
        P = random_topk(4, rng)
        M = random_matching(4, rng)
        expected = all(is_pareto_optimal(R, M) for R in completions(P))
        assert check_npo(P, M) == expected
    assert time.perf_counter() - t0 < 120


def test_c03_nrm_oracle_equivalence():
    """check_nrm vs brute_force_nrm_check: exhaustive n=3 sweep x all 6
    matchings plus 1,000 random (P, M) pairs at n=4; 100%, < 5 min."""
    t0 = time.perf_counter()
    matchings3 = list(all_full_matchings(3))
    for combo in itertools.product(all_prefixes(3), repeat=3):
        P = TopKProfile(3, combo)
        for M in matchings3:
            assert check_nrm(P, M) == brute_force_nrm_check(P, M)
    rng = random.Random(1002)
    for _ in range(1000):
        P = random_topk(4, rng)
        M = random_matching(4, rng)
        assert check_nrm(P, M) == brute_force_nrm_check(P, M)
    assert time.perf_counter() - t0 < 300


def test_c04_exists_npo_characterization():
    """exists_npo succeeds iff the revealed graph has a matching of size
    >= n-1, and every returned matching passes check_npo; 1,200 random
    profiles at n in {3..6}, 100%, < 1 min."""
    t0 = time.perf_counter()
    rng = random.Random(1003)
    for _ in range(1200):
        n = rng.randint(3, 6)
        P = random_topk(n, rng)
        M = exists_npo(P)
        assert (M is not None) == (max_revealed_matching_size(P) >= n - 1)
        if M is not None:
            assert check_npo(P, M)
    assert time.perf_counter() - t0 < 60


def test_c05_rank_maximal_solver_vs_brute_force():
    """Signature equality with brute force on 1,000 random labeled graphs
    with random missing (forbidden) edges, n <= 7; 100%, < 2 min."""
    t0 = time.perf_counter()
    rng = random.Random(1004)
    for _ in range(1000):
        n = rng.randint(1, 7)
        edges = tuple(
            (a, o, rng.randint(1, n))
            for a in range(n)
            for o in range(n)
            if rng.random() < 0.6  # dropped edges play the forbidden role
        )
        g = LabeledBipartiteGraph(n, tuple(range(n)), tuple(range(n)), edges)
        _, sig = rank_maximal_matching(g)
        _, expected = brute_force_rank_maximal(g)
        assert sig == expected
    assert time.perf_counter() - t0 < 120


def test_c06_lower_bound_family_matches_reference():
    """gen_npo_lb_instance(16, (2,2,2,2)) reproduces the checked-in reference
    fixture column for column, bit-exact."""
    fixture = parse_instance((DATA / "lb_npo_n16.json").read_text())
    generated = gen_npo_lb_instance(NpoLowerBoundParams(16, (2, 2, 2, 2)))
    assert fixture.profile.prefs == generated.prefs


def test_c07_constructive_opt_uses_3n_minus_2sqrt_n():
    """opt_strategy_npo_lb at n in {9,16,25} uses exactly 3n - 2*sqrt(n)
    queries and the induced profile admits an NPO matching."""
    rng = random.Random(1005)
    for n in (9, 16, 25):
        r = math.isqrt(n)
        t = tuple(rng.randint(1, r - 1) for _ in range(r))
        profile, total = opt_strategy_npo_lb(NpoLowerBoundParams(n, t))
        assert total == 3 * n - 2 * r
        assert exists_npo(profile) is not None


def test_c08_adaptive_adversary_bounds():
    """elicit_npo vs the adaptive adversary at n in {9,16,25}: at least
    (sqrt(n)-1)(n-2*sqrt(n)) queries (24 at n=16), ratio to the constructive
    OPT bound at most 2(sqrt(n)+1) (10 at n=16); < 10 s."""
    t0 = time.perf_counter()
    for n in (9, 16, 25):
        r = math.isqrt(n)
        adversary = NpoAdaptiveAdversary(n)
        M, transcript = elicit_npo(adversary, n)
        assert transcript.total >= (r - 1) * (n - 2 * r)
        if n == 16:
            assert (r - 1) * (n - 2 * r) == 24
        opt_bound = 3 * n - 2 * r
        assert transcript.total / opt_bound <= 2 * (r + 1)
        # every answer stays consistent with the committed instance
        truth = adversary.committed_instance()
        for _, agent, pos, obj in transcript.events:
            assert truth.prefs[agent][pos - 1] == obj
        assert check_npo(elicited_profile(transcript), M)
    assert time.perf_counter() - t0 < 10


def test_c09_competitive_bound_at_desk_scale():
    """210 random full profiles at n in {3,4,5}: elicit_npo total is at most
    2(sqrt(n)+1) times the brute-force OPT, and X_j >= n - s_j - 1 holds
    round by round for the OPT plan; 100%, < 10 min."""
    t0 = time.perf_counter()
    rng = random.Random(1006)
    for n in (3, 4, 5):
        for _ in range(70):
            truth = random_full(n, rng)
            _, transcript = elicit_npo(StaticOracle(truth), n)
            opt_k, opt_total = opt_queries_bruteforce(truth, "npo")
            assert opt_total >= 1
            assert transcript.total <= 2 * (math.sqrt(n) + 1) * opt_total
            for j in range(1, len(transcript.s_rounds)):
                s_j = transcript.s_rounds[j - 1]
                x_j = sum(1 for ki in opt_k if ki >= j)
                assert x_j >= n - s_j - 1
    assert time.perf_counter() - t0 < 600


def test_c10_nrm_family_plan_and_adversary():
    """At n in {4,6,8}: the 3n/2 plan reveals an NRM matching (and equals the
    brute-force OPT of 6 at n=4); the naive NRM elicitor needs at least
    2n-3 queries against the adaptive special-bit adversary."""
    rng = random.Random(1007)
    for n in (4, 6, 8):
        half = n // 2
        bits = tuple(rng.random() < 0.5 for _ in range(half))
        profile, total = nrm_opt_plan(NrmLowerBoundParams(n, bits))
        assert total == 3 * n // 2
        assert exists_nrm(profile) is not None
        if n == 4:
            truth = gen_nrm_lb_instance(NrmLowerBoundParams(4, bits))
            _, opt_total = opt_queries_bruteforce(truth, "nrm")
            assert opt_total == 6
        adversary = NrmAdaptiveAdversary(n)
        M, transcript = elicit_naive(adversary, n, "nrm")
        assert transcript.total >= 2 * n - 3
        assert check_nrm(elicited_profile(transcript), M)


def test_c11_service_engine_equivalence():
    """A scripted HTTP client replaying the worked-example truth through the
    session API produces the same transcript as the in-process engine, and
    the published result passes the matching checker for its goal."""
    for goal, offline in (
        ("npo", lambda: run_engine(SqrtNpoEngine(3), StaticOracle(SEC4_TRUTH))),
        ("nrm", lambda: elicit_naive(StaticOracle(SEC4_TRUTH), 3, "nrm")),
    ):
        offline_m, offline_t = offline()
        app = create_app()
        with TestClient(app) as client:
            body = client.post("/sessions", json={"n": 3, "goal": goal}).json()
            sid = body["id"]
            tokens = [body["join_tokens"][f"a{i + 1}"] for i in range(3)]
            asked = [0, 0, 0]
            for _ in range(20):
                if client.get(f"/sessions/{sid}").json()["state"] == "done":
                    break
                for agent, token in enumerate(tokens):
                    poll = client.get(f"/sessions/{sid}/agents/{token}/query")
                    assert poll.status_code == 200
                    if poll.json()["pending"] is not None:
                        obj = SEC4_TRUTH.prefs[agent][asked[agent]]
                        asked[agent] += 1
                        res = client.post(
                            f"/sessions/{sid}/agents/{token}/answer",
                            json={"object": f"o{obj + 1}"},
                        )
                        assert res.status_code == 200
            result = client.get(f"/sessions/{sid}/result")
            assert result.status_code == 200
            expected = {
                f"a{a + 1}": f"o{o + 1}" for a, o in sorted(offline_m.pairs)
            }
            assert result.json()["assignment"] == expected
            assert result.json()["total_queries"] == offline_t.total
            check = check_npo if goal == "npo" else check_nrm
            P = TopKProfile(
                3,
                tuple(
                    tuple(SEC4_TRUTH.prefs[i][: asked[i]]) for i in range(3)
                ),
            )
            assert check(P, offline_m)
