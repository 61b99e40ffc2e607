"""Domain model: profiles, matchings, signatures, and ground-truth efficiency
predicates on complete profiles.

Agents and objects are dense 0-based indices in [0, n).  A signature is a
plain tuple of n non-negative ints compared lexicographically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence


class InvalidInputError(ValueError):
    pass


Signature = tuple[int, ...]


@dataclass(frozen=True)
class FullProfile:
    """Complete preference profile: each agent ranks all n objects."""

    n: int
    prefs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.prefs) != self.n:
            raise InvalidInputError("need one ranking per agent")
        universe = frozenset(range(self.n))
        for i, p in enumerate(self.prefs):
            if len(p) != self.n or set(p) != universe:
                raise InvalidInputError(
                    f"agent {i}: ranking must be a permutation of all {self.n} objects"
                )

    def rank(self, agent: int, obj: int) -> int:
        """1-based position of obj in the agent's ranking."""
        return self.prefs[agent].index(obj) + 1


@dataclass(frozen=True)
class TopKProfile:
    """Per-agent ordered prefix of distinct objects; k_i may be 0 (nothing
    revealed yet, the pre-elicitation state)."""

    n: int
    prefs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.prefs) != self.n:
            raise InvalidInputError("need one prefix per agent")
        for i, p in enumerate(self.prefs):
            if len(set(p)) != len(p):
                raise InvalidInputError(f"agent {i}: duplicate object in prefix")
            if len(p) > self.n or any(not (0 <= o < self.n) for o in p):
                raise InvalidInputError(f"agent {i}: invalid prefix")

    @property
    def k(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.prefs)

    def rank(self, agent: int, obj: int) -> int | None:
        """1-based position of obj in the agent's prefix, None if unrevealed."""
        try:
            return self.prefs[agent].index(obj) + 1
        except ValueError:
            return None

    def revealed_pairs(self) -> frozenset[tuple[int, int]]:
        """rev(P): all (agent, object) pairs the agent has revealed."""
        return frozenset((i, o) for i in range(self.n) for o in self.prefs[i])

    def unrevealed_pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (i, o)
            for i in range(self.n)
            for o in range(self.n)
            if o not in self.prefs[i]
        )


@dataclass(frozen=True)
class WeakOrderProfile:
    """Tiered preferences; an object's position is its 1-based tier index.

    Only produced internally (unrevealed objects tied below a revealed
    prefix); not a first-class input format.
    """

    n: int
    tiers: tuple[tuple[frozenset[int], ...], ...]

    def rank(self, agent: int, obj: int) -> int | None:
        for pos, tier in enumerate(self.tiers[agent], start=1):
            if obj in tier:
                return pos
        return None


@dataclass(frozen=True)
class Matching:
    """A set of (agent, object) pairs, each side used at most once."""

    pairs: frozenset[tuple[int, int]]

    def __post_init__(self):
        agents = [a for a, _ in self.pairs]
        objects = [o for _, o in self.pairs]
        if len(set(agents)) != len(agents) or len(set(objects)) != len(objects):
            raise InvalidInputError("matching reuses an agent or object")

    @classmethod
    def of(cls, pairs) -> "Matching":
        return cls(frozenset(pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(sorted(self.pairs))

    def assignment(self) -> dict[int, int]:
        return {a: o for a, o in self.pairs}

    def is_full(self, n: int) -> bool:
        return len(self.pairs) == n


def _require_full(M: Matching, n: int) -> None:
    if not M.is_full(n):
        raise InvalidInputError(f"expected a full matching of size {n}, got {len(M)}")


def compare_signatures(a: Sequence[int], b: Sequence[int]) -> int:
    """Lexicographic signature comparison: -1, 0, or 1."""
    if len(a) != len(b):
        raise InvalidInputError("signatures differ in length")
    ta, tb = tuple(a), tuple(b)
    return (ta > tb) - (ta < tb)


def sig_geq(a: Sequence[int], b: Sequence[int]) -> bool:
    return compare_signatures(a, b) >= 0


def signature_of(M: Matching, P: TopKProfile | FullProfile) -> Signature:
    """Count matched pairs per preference position; unrevealed pairs of a
    top-k profile are not counted anywhere."""
    _require_full(M, P.n)
    counts = [0] * P.n
    for a, o in M.pairs:
        r = P.rank(a, o)
        if r is not None:
            counts[r - 1] += 1
    return tuple(counts)


def extended_signature_of(M: Matching, P: TopKProfile) -> Signature:
    """Like signature_of, but the last entry also counts matches to
    unrevealed objects."""
    _require_full(M, P.n)
    counts = list(signature_of(M, P))
    counts[-1] += sum(1 for a, o in M.pairs if P.rank(a, o) is None)
    return tuple(counts)


def agent_completions(P: TopKProfile, agent: int) -> list[tuple[int, ...]]:
    """All linear orders consistent with one agent's prefix, suffixes in
    lexicographic order."""
    prefix = P.prefs[agent]
    rest = sorted(set(range(P.n)) - set(prefix))
    return [prefix + tail for tail in itertools.permutations(rest)]


def completions(P: TopKProfile) -> Iterator[FullProfile]:
    """Enumerate C(P): every consistent completion, deterministically.

    Brute-force support only; callers must bound n.
    """
    per_agent = [agent_completions(P, i) for i in range(P.n)]
    for combo in itertools.product(*per_agent):
        yield FullProfile(P.n, tuple(combo))


def count_completions(P: TopKProfile) -> int:
    total = 1
    for ki in P.k:
        for f in range(2, P.n - ki + 1):
            total *= f
    return total


def is_pareto_optimal(R: FullProfile, M: Matching) -> bool:
    """Ground-truth oracle on a complete profile: Pareto optimal iff the
    strict-improvement digraph (i -> j when i prefers j's object) is acyclic.
    """
    _require_full(M, R.n)
    assign = M.assignment()
    n = R.n
    # adj[i] = agents holding an object i strictly prefers to her own
    adj: list[list[int]] = []
    for i in range(n):
        my_rank = R.rank(i, assign[i])
        adj.append(
            [j for j in range(n) if j != i and R.rank(i, assign[j]) < my_rank]
        )
    return not _has_cycle(adj)


def _has_cycle(adj: list[list[int]]) -> bool:
    """Iterative three-color DFS cycle detection."""
    n = len(adj)
    color = [0] * n  # 0 unseen, 1 in progress, 2 done
    for start in range(n):
        if color[start]:
            continue
        stack: list[tuple[int, int]] = [(start, 0)]
        color[start] = 1
        while stack:
            node, idx = stack[-1]
            if idx < len(adj[node]):
                stack[-1] = (node, idx + 1)
                nxt = adj[node][idx]
                if color[nxt] == 1:
                    return True
                if color[nxt] == 0:
                    color[nxt] = 1
                    stack.append((nxt, 0))
            else:
                color[node] = 2
                stack.pop()
    return False


def all_full_matchings(n: int) -> Iterator[Matching]:
    """All n! bijections, in lexicographic order of the object permutation."""
    for perm in itertools.permutations(range(n)):
        yield Matching.of(zip(range(n), perm))


def is_rank_maximal(R: FullProfile, M: Matching) -> bool:
    """True iff sig_R(M) is lexicographically maximal over all matchings.

    Brute force for n <= 8; larger instances go through the exact
    rank-maximal solver.
    """
    _require_full(M, R.n)
    mine = signature_of(M, R)
    if R.n <= 8:
        for other in all_full_matchings(R.n):
            if signature_of(other, R) > mine:
                return False
        return True
    from . import assignment

    g = assignment.graph_from_full_profile(R)
    _, best = assignment.rank_maximal_matching(g)
    return mine == best
