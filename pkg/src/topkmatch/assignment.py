"""Exact bipartite matching engines.

Maximum cardinality (Hopcroft-Karp), minimum-weight maximum-cardinality
(Hungarian on a padded square cost matrix), and rank-maximal matching over
position-labeled graphs via exact big-integer weights, plus brute-force
oracles for small instances.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .core import FullProfile, InvalidInputError, Matching, Signature


@dataclass(frozen=True)
class LabeledBipartiteGraph:
    """Bipartite graph whose edges carry 1-based position labels.

    `n` bounds the labels and fixes the signature length.  Forbidden pairs
    are simply absent edges.
    """

    n: int
    left: tuple[int, ...]
    right: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]  # (agent, object, label)

    def __post_init__(self):
        seen = set()
        for a, o, lab in self.edges:
            if (a, o) in seen:
                raise InvalidInputError(f"duplicate edge ({a}, {o})")
            seen.add((a, o))
            if not 1 <= lab <= self.n:
                raise InvalidInputError(f"label {lab} out of [1, {self.n}]")


@dataclass(frozen=True)
class WeightedBipartiteGraph:
    """Bipartite graph with non-negative integer edge weights."""

    n: int
    left: tuple[int, ...]
    right: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]  # (agent, object, weight)


def graph_from_topk(P, forbidden=frozenset()) -> LabeledBipartiteGraph:
    """Revealed graph of a top-k profile: edge per revealed pair, labeled
    with its rank."""
    edges = [
        (i, o, r + 1)
        for i in range(P.n)
        for r, o in enumerate(P.prefs[i])
        if (i, o) not in forbidden
    ]
    return LabeledBipartiteGraph(
        P.n, tuple(range(P.n)), tuple(range(P.n)), tuple(edges)
    )


def graph_from_full_profile(R: FullProfile) -> LabeledBipartiteGraph:
    edges = [
        (i, o, r + 1) for i in range(R.n) for r, o in enumerate(R.prefs[i])
    ]
    return LabeledBipartiteGraph(
        R.n, tuple(range(R.n)), tuple(range(R.n)), tuple(edges)
    )


def weighted_from_topk(P) -> WeightedBipartiteGraph:
    """Revealed graph with weight = rank of the object in the prefix."""
    edges = [
        (i, o, r + 1) for i in range(P.n) for r, o in enumerate(P.prefs[i])
    ]
    return WeightedBipartiteGraph(
        P.n, tuple(range(P.n)), tuple(range(P.n)), tuple(edges)
    )


# ---------------------------------------------------------------------------
# Maximum-cardinality matching (Hopcroft-Karp)
# ---------------------------------------------------------------------------

def max_cardinality_matching(
    g: LabeledBipartiteGraph | WeightedBipartiteGraph,
) -> Matching:
    """Hopcroft-Karp over the graph's edges, deterministic for a fixed
    input ordering (adjacency processed in sorted order)."""
    left = sorted(set(a for a, _, _ in g.edges))
    adj: dict[int, list[int]] = {a: [] for a in left}
    for a, o, _ in sorted(g.edges):
        adj[a].append(o)

    INF = float("inf")
    match_l: dict[int, int | None] = {a: None for a in left}
    match_r: dict[int, int | None] = {}

    def bfs() -> bool:
        dist = {}
        queue = []
        for a in left:
            if match_l[a] is None:
                dist[a] = 0
                queue.append(a)
        found = False
        qi = 0
        while qi < len(queue):
            a = queue[qi]
            qi += 1
            for o in adj[a]:
                nxt = match_r.get(o)
                if nxt is None:
                    found = True
                elif nxt not in dist:
                    dist[nxt] = dist[a] + 1
                    queue.append(nxt)
        self_dist.clear()
        self_dist.update(dist)
        return found

    self_dist: dict[int, int] = {}

    def dfs(a: int) -> bool:
        for o in adj[a]:
            nxt = match_r.get(o)
            if nxt is None or (
                self_dist.get(nxt) == self_dist[a] + 1 and dfs(nxt)
            ):
                match_l[a] = o
                match_r[o] = a
                return True
        self_dist.pop(a, None)
        return False

    while bfs():
        for a in left:
            if match_l[a] is None:
                dfs(a)

    return Matching.of((a, o) for a, o in match_l.items() if o is not None)


def brute_force_max_matching_size(
    g: LabeledBipartiteGraph | WeightedBipartiteGraph,
) -> int:
    """Exhaustive maximum matching size; test oracle for small graphs."""
    left = sorted(set(a for a, _, _ in g.edges))
    if len(left) > 10:
        raise InvalidInputError("brute force limited to 10 left vertices")
    adj = {a: sorted(o for aa, o, _ in g.edges if aa == a) for a in left}

    def go(idx: int, used: frozenset[int]) -> int:
        if idx == len(left):
            return 0
        best = go(idx + 1, used)
        for o in adj[left[idx]]:
            if o not in used:
                best = max(best, 1 + go(idx + 1, used | {o}))
        return best

    return go(0, frozenset())


# ---------------------------------------------------------------------------
# Hungarian method (square matrix, exact integer arithmetic)
# ---------------------------------------------------------------------------

def hungarian_min_cost(cost: list[list[int]]) -> list[int]:
    """Minimum-cost perfect matching of a square integer matrix.

    Returns col_of[row].  O(n^3) potentials method; exact with Python ints
    of any size.
    """
    n = len(cost)
    INF = float("inf")
    u = [0] * (n + 1)
    v = [0] * (n + 1)
    p = [0] * (n + 1)  # p[col] = row matched to col (1-based, 0 = none)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = INF
            j1 = 0
            row = cost[i0 - 1]
            for j in range(1, n + 1):
                if not used[j]:
                    cur = row[j - 1] - u[i0] - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    col_of = [0] * n
    for j in range(1, n + 1):
        col_of[p[j] - 1] = j - 1
    return col_of


def min_weight_max_cardinality(g: WeightedBipartiteGraph) -> Matching:
    """Among maximum-cardinality matchings, one of minimum total weight.

    Single Hungarian run on the padded square matrix with the cost
    transform c(e) = weight(e) - C, C = m*(m+1): any real edge saves more
    than the largest possible total weight, so cardinality dominates.
    """
    left = sorted(set(a for a, _, _ in g.edges))
    right = sorted(set(o for _, o, _ in g.edges))
    m = max(len(left), len(right), 1)
    max_w = max((w for _, _, w in g.edges), default=0)
    # one extra edge must beat any weight saving
    C = m * (max(max_w, m) + 1)
    lidx = {a: i for i, a in enumerate(left)}
    ridx = {o: j for j, o in enumerate(right)}
    cost = [[0] * m for _ in range(m)]
    for a, o, w in g.edges:
        if w < 0:
            raise InvalidInputError("weights must be non-negative")
        cost[lidx[a]][ridx[o]] = w - C
    col_of = hungarian_min_cost(cost)
    real = {(a, o) for a, o, _ in g.edges}
    pairs = []
    for i, a in enumerate(left):
        j = col_of[i]
        if j < len(right) and (a, right[j]) in real:
            pairs.append((a, right[j]))
    return Matching.of(pairs)


# ---------------------------------------------------------------------------
# Rank-maximal matching
# ---------------------------------------------------------------------------

def label_signature(
    g: LabeledBipartiteGraph, M: Matching
) -> Signature:
    """Per-label usage counts of a matching inside g."""
    labels = {(a, o): lab for a, o, lab in g.edges}
    counts = [0] * g.n
    for a, o in M.pairs:
        counts[labels[(a, o)] - 1] += 1
    return tuple(counts)


def signature_weight(sig, n: int) -> int:
    """Base-(n+1) positional encoding; strictly monotone in the
    lexicographic signature order for entries <= n."""
    base = n + 1
    total = 0
    for x in sig:
        total = total * base + x
    return total


def rank_maximal_matching(
    g: LabeledBipartiteGraph,
) -> tuple[Matching, Signature]:
    """Matching with lexicographically maximal label signature.

    Reduction to max-weight matching with exact weight (n+1)^(n-l) for
    label l, solved by the Hungarian method on negated weights.
    """
    left = sorted(set(a for a, _, _ in g.edges))
    right = sorted(set(o for _, o, _ in g.edges))
    if not g.edges:
        return Matching.of([]), (0,) * g.n
    m = max(len(left), len(right))
    base = g.n + 1
    lidx = {a: i for i, a in enumerate(left)}
    ridx = {o: j for j, o in enumerate(right)}
    cost = [[0] * m for _ in range(m)]
    for a, o, lab in g.edges:
        cost[lidx[a]][ridx[o]] = -(base ** (g.n - lab))
    col_of = hungarian_min_cost(cost)
    pairs = []
    for i, a in enumerate(left):
        j = col_of[i]
        if j < len(right) and cost[i][j] != 0:
            pairs.append((a, right[j]))
    M = Matching.of(pairs)
    return M, label_signature(g, M)


def _all_matchings(adj: dict[int, list[int]], left: list[int]):
    """Yield every matching (as a tuple of pairs) of the adjacency lists."""

    def go(idx: int, used: set[int], acc: list[tuple[int, int]]):
        if idx == len(left):
            yield tuple(acc)
            return
        yield from go(idx + 1, used, acc)
        a = left[idx]
        for o in adj[a]:
            if o not in used:
                used.add(o)
                acc.append((a, o))
                yield from go(idx + 1, used, acc)
                acc.pop()
                used.remove(o)

    yield from go(0, set(), [])


def brute_force_rank_maximal(
    g: LabeledBipartiteGraph,
) -> tuple[Matching, Signature]:
    """Exhaustive oracle: enumerate all matchings, keep a signature-maximal
    one.  Refuses more than 8 left vertices."""
    left = sorted(set(a for a, _, _ in g.edges))
    if len(left) > 8:
        raise InvalidInputError("brute force limited to 8 left vertices")
    adj = {a: sorted(o for aa, o, _ in g.edges if aa == a) for a in left}
    labels = {(a, o): lab for a, o, lab in g.edges}
    best_sig = (0,) * g.n
    best: tuple[tuple[int, int], ...] = ()
    for pairs in _all_matchings(adj, left):
        counts = [0] * g.n
        for a, o in pairs:
            counts[labels[(a, o)] - 1] += 1
        sig = tuple(counts)
        if sig > best_sig:
            best_sig = sig
            best = pairs
    return Matching.of(best), best_sig
