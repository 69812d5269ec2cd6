"""Feedback arc sets of interaction digraphs and selection of pinned nodes.

The exact solver treats a feedback arc set as a hitting set over the
elementary cycles.  It first finds the minimum cardinality ``c2`` by
branch-and-bound, then enumerates every hitting set of that size and keeps
the one with the fewest distinct ending vertices ``c1``, breaking ties by
the lexicographically smallest sorted edge list.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import islice
from typing import Iterator, Sequence

import networkx as nx

from .network import InteractionDigraph

__all__ = [
    "FeedbackArcSetResult",
    "CycleCapExceeded",
    "enumerate_cycles",
    "minimum_feedback_arc_sets",
    "greedy_feedback_arc_set",
    "solve_feedback_arc_set",
    "DEFAULT_CYCLE_CAP",
    "DEFAULT_OPTIMAL_CAP",
]

log = logging.getLogger(__name__)

DEFAULT_CYCLE_CAP = 100_000
DEFAULT_OPTIMAL_CAP = 10_000

Edge = tuple[int, int]


class CycleCapExceeded(RuntimeError):
    """More elementary cycles than the cap; ``partial`` holds the first ``cap``."""

    def __init__(self, cap: int, partial: list[list[Edge]]):
        self.cap = cap
        self.partial = partial
        super().__init__(f"more than {cap} elementary cycles")


@dataclass
class FeedbackArcSetResult:
    """A feedback arc set and the pinned vertices it induces.

    ``kappa`` counts the optimal sets seen (``None`` when not enumerated);
    ``complete`` is False when that enumeration stopped at its cap.
    """

    chosen: tuple[Edge, ...]
    c2: int
    pinned: tuple[int, ...]
    deleted_sources: dict[int, tuple[int, ...]]
    method: str
    kappa: int | None = None
    complete: bool = True
    objective: str = "lexicographic"

    @property
    def c1(self) -> int:
        return len(self.pinned)

    @classmethod
    def from_edges(cls, edges, method: str, **kw) -> "FeedbackArcSetResult":
        chosen = tuple(sorted(edges))
        sources: dict[int, list[int]] = {}
        for u, v in chosen:
            sources.setdefault(v, []).append(u)
        return cls(chosen, len(chosen), tuple(sorted(sources)),
                   {v: tuple(sorted(s)) for v, s in sorted(sources.items())}, method, **kw)


def enumerate_cycles(g: InteractionDigraph, cap: int = DEFAULT_CYCLE_CAP) -> list[list[Edge]]:
    """All elementary cycles as edge lists; self-loops come out as 1-edge cycles."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    found = []
    for cyc in islice(nx.simple_cycles(g.to_networkx()), cap + 1):
        found.append([(cyc[k], cyc[(k + 1) % len(cyc)]) for k in range(len(cyc))])
    if len(found) > cap:
        raise CycleCapExceeded(cap, found[:cap])
    return found


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _bits(x: int) -> Iterator[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class _HittingSet:
    """Branch-and-bound over sets given as bitmasks of element indices.

    Branching picks the open set with fewest admissible elements and tries
    each element e_i of it while excluding e_1..e_{i-1}, so every
    inclusion-minimal hitting set is reached exactly once.
    """

    def __init__(self, sets: Sequence[int]):
        self.sets = sorted(set(sets), key=lambda m: (_popcount(m), m))

    @staticmethod
    def _lower_bound(open_sets: list[int], excluded: int) -> int:
        used = 0
        count = 0
        for m in sorted((s & ~excluded for s in open_sets), key=_popcount):
            if not m & used:
                used |= m
                count += 1
        return count

    def _search(self, chosen, excluded, open_sets, size, limit, visit) -> bool:
        """Depth-first search; ``visit`` returning True aborts everything."""
        if not open_sets:
            return visit(chosen)
        if size + self._lower_bound(open_sets, excluded) > limit():
            return False
        pivot = min(open_sets, key=lambda s: _popcount(s & ~excluded))
        avail = pivot & ~excluded
        if not avail:
            return False
        prior = 0
        for e in _bits(avail):
            bit = 1 << e
            rest = [s for s in open_sets if not s & bit]
            if self._search(chosen | bit, excluded | prior, rest, size + 1, limit, visit):
                return True
            prior |= bit
        return False

    def minimum_size(self, upper: int) -> int:
        """Smallest hitting set size, given one known feasible size ``upper``."""
        best = [upper]

        def visit(chosen):
            best[0] = min(best[0], _popcount(chosen))
            return False

        self._search(0, 0, list(self.sets), 0, lambda: best[0] - 1, visit)
        return best[0]

    def all_of_size(self, size: int, cap: int) -> tuple[list[int], bool]:
        out: list[int] = []

        def visit(chosen):
            if _popcount(chosen) == size:
                out.append(chosen)
            return len(out) > cap

        aborted = self._search(0, 0, list(self.sets), 0, lambda: size, visit)
        return out[:cap], not aborted


def minimum_feedback_arc_sets(
    g: InteractionDigraph,
    cycles: Sequence[Sequence[Edge]],
    optimal_cap: int = DEFAULT_OPTIMAL_CAP,
    objective: str = "lexicographic",
) -> FeedbackArcSetResult:
    """Exact minimum feedback arc set with fewest ending vertices.

    ``objective="lexicographic"`` minimizes the number of deleted edges c2
    first and then the number of ending vertices c1 among all sets of size
    c2.  ``objective="vertices"`` is an extension that minimizes c1 over all
    feedback arc sets (then c2), which can pin fewer nodes at the price of
    deleting more edges.
    """
    if objective not in ("lexicographic", "vertices"):
        raise ValueError(f"unknown objective {objective!r}")
    if not cycles:
        return FeedbackArcSetResult.from_edges((), "exact", kappa=1, objective=objective)
    if objective == "vertices":
        return _min_vertex_pinning(g, cycles, optimal_cap)

    edges = sorted({e for cyc in cycles for e in cyc})
    pos = {e: k for k, e in enumerate(edges)}
    masks = [sum(1 << pos[e] for e in cyc) for cyc in cycles]
    solver = _HittingSet(masks)
    c2 = solver.minimum_size(len(greedy_feedback_arc_set(g).chosen) if g.n else len(edges))
    sols, complete = solver.all_of_size(c2, optimal_cap)
    if not complete:
        log.warning("optimal feedback arc set enumeration stopped at %d sets", optimal_cap)

    def key(mask):
        chosen = [edges[k] for k in _bits(mask)]
        return len({v for _, v in chosen}), sorted(chosen)

    best = min(sols, key=key)
    return FeedbackArcSetResult.from_edges([edges[k] for k in _bits(best)], "exact",
                                           kappa=len(sols), complete=complete, objective=objective)


def _min_vertex_pinning(g, cycles, optimal_cap) -> FeedbackArcSetResult:
    # every cycle must contain a pinned vertex: a minimum feedback vertex set
    vertex_masks = [sum(1 << v for _, v in cyc) for cyc in cycles]
    vsolver = _HittingSet(vertex_masks)
    c1 = vsolver.minimum_size(g.n)
    best = None
    vsols, complete = vsolver.all_of_size(c1, optimal_cap)
    for vmask in vsols:
        into = sorted({e for cyc in cycles for e in cyc if (vmask >> e[1]) & 1})
        pos = {e: k for k, e in enumerate(into)}
        masks = [sum(1 << pos[e] for e in cyc if e in pos) for cyc in cycles]
        solver = _HittingSet(masks)
        c2 = solver.minimum_size(len(into))
        sols, ok = solver.all_of_size(c2, optimal_cap)
        complete = complete and ok
        for m in sols:
            chosen = sorted(into[k] for k in _bits(m))
            cand = (len({v for _, v in chosen}), len(chosen), chosen)
            if best is None or cand < best:
                best = cand
    return FeedbackArcSetResult.from_edges(best[2], "exact", kappa=None, complete=complete,
                                           objective="vertices")


def _short_cycle_pool(g: nx.DiGraph) -> list[list[Edge]]:
    """One shortest cycle through each edge inside a nontrivial strongly connected component."""
    pool = []
    for comp in nx.strongly_connected_components(g):
        if len(comp) == 1:
            v = next(iter(comp))
            if g.has_edge(v, v):
                pool.append([(v, v)])
            continue
        sub = g.subgraph(comp)
        for u, v in sub.edges():
            if u == v:
                pool.append([(u, u)])
                continue
            path = nx.shortest_path(sub, v, u)
            pool.append([(u, v)] + list(zip(path, path[1:])))
    return pool


def greedy_feedback_arc_set(g: InteractionDigraph) -> FeedbackArcSetResult:
    """Heuristic feedback arc set for graphs too large for exact search.

    Keeps a pool of short cycles (one shortest cycle per edge of every
    strongly connected component), deletes the edge lying on most open
    cycles of the pool, drops the cycles it hits, and refills the pool from
    the residual graph whenever it runs dry.  The result is acyclic but not
    necessarily minimum.
    """
    h = g.to_networkx()
    removed: list[Edge] = []
    pool = _short_cycle_pool(h)
    while pool:
        counts: dict[Edge, int] = {}
        for cyc in pool:
            for e in cyc:
                counts[e] = counts.get(e, 0) + 1
        # most cycles hit; ties go to the smaller edge so runs are reproducible
        e = min(counts, key=lambda x: (-counts[x], x))
        removed.append(e)
        h.remove_edge(*e)
        pool = [cyc for cyc in pool if e not in cyc]
        if not pool:
            pool = _short_cycle_pool(h)
    return FeedbackArcSetResult.from_edges(removed, "greedy")


def solve_feedback_arc_set(
    g: InteractionDigraph,
    method: str = "exact",
    cycle_cap: int = DEFAULT_CYCLE_CAP,
    optimal_cap: int = DEFAULT_OPTIMAL_CAP,
    objective: str = "lexicographic",
) -> FeedbackArcSetResult:
    """Pick the pinned vertices for ``g``.

    In exact mode the cycles are enumerated up to ``cycle_cap``.  Past the
    cap the solver works lazily: it solves over the cycles it knows, and
    while the residual graph still has a cycle, adds it and solves again.
    The lazy answer is still optimal for (c2, c1), but ``kappa`` is unknown.
    """
    if method == "greedy":
        return greedy_feedback_arc_set(g)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    try:
        cycles = enumerate_cycles(g, cycle_cap)
        lazy = False
    except CycleCapExceeded as exc:
        cycles = exc.partial
        lazy = True
        log.info("cycle cap %d exceeded; switching to lazy constraint generation", cycle_cap)
    known = {tuple(c) for c in cycles}
    while True:
        res = minimum_feedback_arc_sets(g, cycles, optimal_cap, objective)
        if not lazy:
            return res
        residual = g.without(res.chosen).to_networkx()
        try:
            cyc = [tuple(e[:2]) for e in nx.find_cycle(residual)]
        except nx.NetworkXNoCycle:
            res.kappa = None
            return res
        if tuple(cyc) in known:
            raise AssertionError("lazy feedback arc set loop stalled")
        known.add(tuple(cyc))
        cycles = list(cycles) + [cyc]
