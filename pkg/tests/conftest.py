import itertools
import random

import pytest

from topkmatch.core import FullProfile, Matching, TopKProfile


@pytest.fixture
def sec4_profile() -> TopKProfile:
    """The three-agent worked example: P1 = o1>o2>o3, P2 = o1>o2, P3 = o1."""
    return TopKProfile(3, ((0, 1, 2), (0, 1), (0,)))


@pytest.fixture
def sec4_m() -> Matching:
    return Matching.of([(0, 2), (1, 1), (2, 0)])


@pytest.fixture
def sec4_m_prime() -> Matching:
    return Matching.of([(0, 0), (1, 1), (2, 2)])


@pytest.fixture
def sec4_completion() -> FullProfile:
    """R1 = o1>o2>o3, R2 = o1>o2>o3, R3 = o1>o3>o2."""
    return FullProfile(3, ((0, 1, 2), (0, 1, 2), (0, 2, 1)))


def random_topk(n: int, rng: random.Random, min_k: int = 0) -> TopKProfile:
    prefs = []
    for _ in range(n):
        perm = list(range(n))
        rng.shuffle(perm)
        k = rng.randint(min_k, n)
        prefs.append(tuple(perm[:k]))
    return TopKProfile(n, tuple(prefs))


def random_full(n: int, rng: random.Random) -> FullProfile:
    prefs = []
    for _ in range(n):
        perm = list(range(n))
        rng.shuffle(perm)
        prefs.append(tuple(perm))
    return FullProfile(n, tuple(prefs))


def random_matching(n: int, rng: random.Random) -> Matching:
    perm = list(range(n))
    rng.shuffle(perm)
    return Matching.of(zip(range(n), perm))


def all_prefixes(n: int):
    """Every possible single-agent top-k prefix for instance size n."""
    out = []
    for k in range(n + 1):
        out.extend(itertools.permutations(range(n), k))
    return out
