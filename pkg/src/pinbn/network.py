"""Boolean network model, rule-file ingestion and interaction digraph."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import expr as ex
from .stp import LogicalMatrix, structure_matrix

__all__ = [
    "CapExceeded",
    "RuleFileError",
    "BooleanNetwork",
    "InteractionDigraph",
    "parse_network",
    "read_network",
    "minimize",
    "interaction_digraph",
    "algebraic_form_L",
    "to_rules",
    "DEFAULT_MAX_INDEGREE",
    "DENSE_L_CAP",
]

DEFAULT_MAX_INDEGREE = 16
DENSE_L_CAP = 20


class CapExceeded(RuntimeError):
    """A computation over all 2^n states was requested beyond its cap."""


class RuleFileError(ValueError):
    """Malformed rule file.  ``line`` and ``col`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}" + (f", col {col}" if col is not None else "") + ": "
        super().__init__(where + message)


@dataclass(frozen=True, eq=False)
class BooleanNetwork:
    """Synchronous Boolean network.

    ``in_neighbors[i]`` is a strictly ascending tuple of 0-based node indices
    and ``tables[i]`` the truth table of node i over them, in canonical
    column order (all inputs true first).  ``exprs`` optionally keeps source
    text for each rule, used when exporting controlled networks.
    """

    nodes: tuple[str, ...]
    in_neighbors: tuple[tuple[int, ...], ...]
    tables: tuple[np.ndarray, ...]
    exprs: tuple[str | None, ...] | None = None
    max_indegree: int = field(default=DEFAULT_MAX_INDEGREE, compare=False)

    def __post_init__(self):
        n = len(self.nodes)
        if len(set(self.nodes)) != n:
            raise ValueError("duplicate node names")
        if len(self.in_neighbors) != n or len(self.tables) != n:
            raise ValueError("nodes, in_neighbors and tables must have equal length")
        fixed = []
        for i, (nbrs, table) in enumerate(zip(self.in_neighbors, self.tables)):
            if any(b <= a for a, b in zip(nbrs, nbrs[1:])):
                raise ValueError(f"neighbors of {self.nodes[i]} are not strictly ascending")
            if nbrs and (nbrs[0] < 0 or nbrs[-1] >= n):
                raise ValueError(f"neighbor index out of range for {self.nodes[i]}")
            if len(nbrs) > self.max_indegree:
                raise ValueError(
                    f"{self.nodes[i]} has {len(nbrs)} inputs, above the cap of {self.max_indegree}")
            t = np.asarray(table, dtype=np.uint8).ravel().copy()
            if t.size != 1 << len(nbrs) or not np.all(t <= 1):
                raise ValueError(f"bad truth table for {self.nodes[i]}")
            t.setflags(write=False)
            fixed.append(t)
        object.__setattr__(self, "in_neighbors", tuple(tuple(int(b) for b in x)
                                                       for x in self.in_neighbors))
        object.__setattr__(self, "tables", tuple(fixed))
        if self.exprs is not None and len(self.exprs) != n:
            raise ValueError("exprs must have one entry per node")

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def max_in_degree(self) -> int:
        """K, the largest number of in-neighbors of any node."""
        return max((len(x) for x in self.in_neighbors), default=0)

    def index(self, name: str) -> int:
        return self.nodes.index(name)

    def structure_matrix(self, i: int) -> LogicalMatrix:
        return structure_matrix(self.tables[i])

    def evaluate_node(self, i: int, state_bits: Sequence[int]) -> int:
        j = 0
        for b in self.in_neighbors[i]:
            j = (j << 1) | (1 - int(state_bits[b]))
        return int(self.tables[i][j])

    def is_minimal(self) -> bool:
        return all(not _nonfunctional(t, len(nb)) for t, nb in zip(self.tables, self.in_neighbors))

    def replace(self, updates: dict[int, tuple[Sequence[int], np.ndarray, str | None]]) -> "BooleanNetwork":
        """New network with some nodes' (neighbors, table, expr) replaced."""
        nbrs = list(self.in_neighbors)
        tables = list(self.tables)
        exprs = list(self.exprs) if self.exprs is not None else [None] * self.n
        for i, (nb, t, e) in updates.items():
            nbrs[i] = tuple(nb)
            tables[i] = t
            exprs[i] = e
        return BooleanNetwork(self.nodes, tuple(nbrs), tuple(tables), tuple(exprs), self.max_indegree)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BooleanNetwork):
            return NotImplemented
        return (self.nodes == other.nodes and self.in_neighbors == other.in_neighbors
                and all(np.array_equal(a, b) for a, b in zip(self.tables, other.tables)))

    def __repr__(self) -> str:
        return f"BooleanNetwork(n={self.n}, K={self.max_in_degree})"


@dataclass(frozen=True)
class InteractionDigraph:
    """Edge ``(i, j)`` means node j depends on node i (0-based)."""

    n: int
    edges: tuple[tuple[int, int], ...]

    @staticmethod
    def start(e: tuple[int, int]) -> int:
        return e[0]

    @staticmethod
    def end(e: tuple[int, int]) -> int:
        return e[1]

    def to_networkx(self):
        import networkx as nx

        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def is_acyclic(self) -> bool:
        import networkx as nx

        return nx.is_directed_acyclic_graph(self.to_networkx())

    def without(self, removed) -> "InteractionDigraph":
        gone = set(removed)
        return InteractionDigraph(self.n, tuple(e for e in self.edges if e not in gone))


_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _strip_line(raw: str) -> str:
    return raw.split("#", 1)[0].rstrip()


def parse_network(text: str, max_indegree: int = DEFAULT_MAX_INDEGREE) -> BooleanNetwork:
    """Parse a ``name, expression`` rule file.

    Neighbor lists are the syntactic variables of each rule; call
    :func:`minimize` to drop nonfunctional ones.
    """
    rules: list[tuple[str, ex.Expr, str, int]] = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_line(raw)
        if not line.strip():
            continue
        if "," not in line:
            raise RuleFileError("expected 'name, expression'", lineno)
        name, body = line.split(",", 1)
        lead = len(line) - len(line.lstrip())
        name = name.strip()
        if not rules and name.lower() == "targets" and body.strip().lower() == "factors":
            continue
        if not _NAME.fullmatch(name):
            raise RuleFileError(f"invalid node name {name!r}", lineno, lead + 1)
        if name in seen:
            raise RuleFileError(f"duplicate rule for {name!r} (first at line {seen[name]})", lineno, lead + 1)
        offset = len(line) - len(body) + 1
        try:
            tree = ex.parse_expression(body)
        except ex.ExpressionError as err:
            raise RuleFileError(err.message, lineno, offset + err.col - 1) from None
        seen[name] = lineno
        rules.append((name, tree, body.strip(), lineno))

    if not rules:
        raise RuleFileError("no rules found")
    names = tuple(r[0] for r in rules)
    pos = {name: i for i, name in enumerate(names)}
    nbrs, tables, exprs = [], [], []
    for name, tree, src, lineno in rules:
        used = ex.variables(tree)
        unknown = [v for v in used if v not in pos]
        if unknown:
            raise RuleFileError(f"unknown node {unknown[0]!r} in rule for {name!r}", lineno)
        order = sorted(pos[v] for v in used)
        if len(order) > max_indegree:
            raise RuleFileError(f"{name!r} has {len(order)} inputs, above the cap of {max_indegree}", lineno)
        nbrs.append(tuple(order))
        tables.append(ex.expression_table(tree, [names[b] for b in order]))
        exprs.append(src)
    return BooleanNetwork(names, tuple(nbrs), tuple(tables), tuple(exprs), max_indegree)


def read_network(path, max_indegree: int = DEFAULT_MAX_INDEGREE) -> BooleanNetwork:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read(), max_indegree)


def _nonfunctional(table: np.ndarray, k: int) -> list[int]:
    """Positions m whose flip never changes the output."""
    out = []
    t = table.reshape((2,) * k) if k else table
    for m in range(k):
        if np.array_equal(np.take(t, 0, axis=m), np.take(t, 1, axis=m)):
            out.append(m)
    return out


def minimize(net: BooleanNetwork) -> BooleanNetwork:
    """Remove every nonfunctional input and project the truth tables."""
    updates = {}
    for i, (nb, table) in enumerate(zip(net.in_neighbors, net.tables)):
        k = len(nb)
        t = table.reshape((2,) * k) if k else table
        keep = list(range(k))
        for m in reversed(range(k)):
            if np.array_equal(np.take(t, 0, axis=m), np.take(t, 1, axis=m)):
                t = np.take(t, 0, axis=m)
                keep.pop(m)
        if len(keep) != k:
            expr = net.exprs[i] if net.exprs is not None else None
            updates[i] = (tuple(nb[m] for m in keep), np.asarray(t).ravel(), expr)
    return net.replace(updates) if updates else net


def interaction_digraph(net: BooleanNetwork) -> InteractionDigraph:
    edges = sorted((i, j) for j, nb in enumerate(net.in_neighbors) for i in nb)
    return InteractionDigraph(net.n, tuple(edges))


def algebraic_form_L(net: BooleanNetwork, cap: int = DENSE_L_CAP) -> LogicalMatrix:
    """State transition matrix ``L``; meant for oracles and export only."""
    n = net.n
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the dense-L cap of {cap}")
    size = 1 << n
    codes = np.arange(size, dtype=np.int64)
    succ = np.zeros(size, dtype=np.int64)
    for i in range(n):
        j = np.zeros(size, dtype=np.int64)
        for b in net.in_neighbors[i]:
            j = (j << 1) | (1 - ((codes >> (n - 1 - b)) & 1))
        succ |= net.tables[i][j].astype(np.int64) << (n - 1 - i)
    # code s (x_1 as the high bit) has gamma = 2^n - s, so column c is code size-1-c
    return LogicalMatrix(size, size - succ[::-1])


def to_rules(net: BooleanNetwork, header: str | None = None) -> str:
    """Rule-file text; nodes without stored source get a rendered expression."""
    lines = [f"# {h}" for h in header.splitlines()] if header else []
    for i, name in enumerate(net.nodes):
        src = net.exprs[i] if net.exprs is not None else None
        if src is None:
            src = ex.render_expression(net.tables[i], [net.nodes[b] for b in net.in_neighbors[i]])
        lines.append(f"{name}, {src}")
    return "\n".join(lines) + "\n"
