"""Necessary rank-maximality: best-achievable signatures over completions,
NRM membership check, and NRM existence/construction, plus a completion
brute-force oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .assignment import LabeledBipartiteGraph, rank_maximal_matching
from .core import (
    InvalidInputError,
    Matching,
    Signature,
    TopKProfile,
    WeakOrderProfile,
    completions,
    count_completions,
    extended_signature_of,
    is_rank_maximal,
    sig_geq,
    signature_of,
)


@dataclass(frozen=True)
class SigOptQuery:
    """Restriction to an agent subset, object subset, and forbidden pairs."""

    agents: frozenset[int]
    objects: frozenset[int]
    forbidden: frozenset[tuple[int, int]] = frozenset()

    @classmethod
    def whole_instance(cls, n: int, forbidden=()) -> "SigOptQuery":
        return cls(frozenset(range(n)), frozenset(range(n)), frozenset(forbidden))


def tied_tail_profile(P: TopKProfile) -> WeakOrderProfile:
    """Weak-order profile keeping each revealed prefix and placing all of an
    agent's unrevealed objects tied at position k_i + 1."""
    tiers = []
    for i in range(P.n):
        agent_tiers = [frozenset({o}) for o in P.prefs[i]]
        rest = frozenset(range(P.n)) - set(P.prefs[i])
        if rest:
            agent_tiers.append(rest)
        tiers.append(tuple(agent_tiers))
    return WeakOrderProfile(P.n, tuple(tiers))


def sig_opt(P: TopKProfile, q: SigOptQuery) -> tuple[Signature, Matching]:
    """Best signature any matching of q.agents to q.objects (avoiding
    q.forbidden) can achieve under any completion of P, with a witness.
    """
    for a, o in q.forbidden:
        if a not in q.agents or o not in q.objects:
            raise InvalidInputError("forbidden pair outside S x T")
    weak = tied_tail_profile(P)
    edges = [
        (a, o, weak.rank(a, o))
        for a in sorted(q.agents)
        for o in sorted(q.objects)
        if (a, o) not in q.forbidden
    ]
    g = LabeledBipartiteGraph(
        P.n, tuple(sorted(q.agents)), tuple(sorted(q.objects)), tuple(edges)
    )
    M, sig = rank_maximal_matching(g)
    return sig, M


def check_nrm(P: TopKProfile, M: Matching) -> bool:
    """True iff M is rank-maximal under every completion of P."""
    if not M.is_full(P.n):
        raise InvalidInputError("matching must be full")
    n = P.n
    revealed = [(a, o) for a, o in M.pairs if P.rank(a, o) is not None]
    c = len(revealed)
    if c == n:
        opt, _ = sig_opt(P, SigOptQuery.whole_instance(n))
        return signature_of(M, P) == opt
    if c == n - 1:
        (ai, oj) = next(
            (a, o) for a, o in M.pairs if P.rank(a, o) is None
        )
        reduced = SigOptQuery(
            frozenset(range(n)) - {ai}, frozenset(range(n)) - {oj}
        )
        opt_reduced, _ = sig_opt(P, reduced)
        if not sig_geq(signature_of(M, P), opt_reduced):
            return False
        opt_forbid, _ = sig_opt(
            P, SigOptQuery.whole_instance(n, forbidden=[(ai, oj)])
        )
        return sig_geq(extended_signature_of(M, P), opt_forbid)
    return False


def _rank_maximal_on_revealed(P: TopKProfile) -> tuple[Matching, Signature]:
    """Rank-maximal matching using only revealed edges, labels = ranks."""
    edges = [
        (i, o, r + 1) for i in range(P.n) for r, o in enumerate(P.prefs[i])
    ]
    g = LabeledBipartiteGraph(
        P.n, tuple(range(P.n)), tuple(range(P.n)), tuple(edges)
    )
    return rank_maximal_matching(g)


def exists_nrm(P: TopKProfile) -> Matching | None:
    """Return an NRM matching if P admits one, else None."""
    n = P.n
    M, sig = _rank_maximal_on_revealed(P)
    if len(M) == n:
        opt, _ = sig_opt(P, SigOptQuery.whole_instance(n))
        if sig == opt:
            return M
    # try every size-(n-1) shape: one agent matched outside her prefix
    for ai, oj in sorted(P.unrevealed_pairs()):
        reduced = SigOptQuery(
            frozenset(range(n)) - {ai}, frozenset(range(n)) - {oj}
        )
        # rank-maximal over the tied-tail labels so the reduced instance
        # is always perfectly matched; check_nrm filters bad candidates
        _, X = sig_opt(P, reduced)
        if len(X) != n - 1:
            continue
        candidate = Matching.of(list(X.pairs) + [(ai, oj)])
        if check_nrm(P, candidate):
            return candidate
    return None


def brute_force_nrm_check(P: TopKProfile, M: Matching) -> bool:
    """Completion-enumeration oracle: M rank-maximal in every completion.

    Refuses instances with more than 10^6 completions or n > 6.
    """
    if P.n > 6 or count_completions(P) > 10**6:
        raise InvalidInputError("instance too large for the brute force")
    if not M.is_full(P.n):
        raise InvalidInputError("matching must be full")
    return all(is_rank_maximal(R, M) for R in completions(P))
