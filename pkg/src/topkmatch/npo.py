"""Necessary Pareto optimality: membership check via the possible-improvement
digraph, and existence/construction via min-weight max-cardinality matching
on the revealed graph.
"""

from __future__ import annotations

from dataclasses import dataclass

from .assignment import (
    max_cardinality_matching,
    min_weight_max_cardinality,
    weighted_from_topk,
)
from .core import InvalidInputError, Matching, TopKProfile, _has_cycle


@dataclass(frozen=True)
class ImprovementDigraph:
    """Edge (i, j) present iff agent i could prefer j's object to her own
    under some completion of her prefix."""

    n: int
    edges: frozenset[tuple[int, int]]

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in sorted(self.edges):
            adj[i].append(j)
        return adj


def build_improvement_digraph(P: TopKProfile, M: Matching) -> ImprovementDigraph:
    if not M.is_full(P.n):
        raise InvalidInputError("matching must be full")
    assign = M.assignment()
    edges = set()
    for i in range(P.n):
        my_rank = P.rank(i, assign[i])
        for j in range(P.n):
            if j == i:
                continue
            if my_rank is None:
                # own match unrevealed: a completion can put anything above it
                edges.add((i, j))
            else:
                other = P.rank(i, assign[j])
                if other is not None and other < my_rank:
                    edges.add((i, j))
    return ImprovementDigraph(P.n, frozenset(edges))


def check_npo(P: TopKProfile, M: Matching) -> bool:
    """True iff M is Pareto optimal under every completion of P:
    the improvement digraph must be acyclic."""
    g = build_improvement_digraph(P, M)
    return not _has_cycle(g.adjacency())


def exists_npo(P: TopKProfile) -> Matching | None:
    """Return an NPO matching if one exists, else None.

    An NPO matching exists iff the revealed graph has a matching of size
    at least n-1.  The construction takes a min-weight max-cardinality
    matching under rank weights and, at size n-1, pairs the one leftover
    agent with the one leftover object.
    """
    n = P.n
    M = min_weight_max_cardinality(weighted_from_topk(P))
    if len(M) <= n - 2:
        return None
    if len(M) == n:
        return M
    assign = M.assignment()
    free_agent = next(i for i in range(n) if i not in assign)
    used_objects = set(assign.values())
    free_object = next(o for o in range(n) if o not in used_objects)
    return Matching.of(list(M.pairs) + [(free_agent, free_object)])


def max_revealed_matching_size(P: TopKProfile) -> int:
    return len(max_cardinality_matching(weighted_from_topk(P)))
