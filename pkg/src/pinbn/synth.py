"""Two-step synthesis of distributed pinning controllers.

Step 1 picks a feedback arc set of the interaction digraph and, for every
ending vertex, replaces the node's function by one that ignores the deleted
in-neighbors; a controller ``u = g(neighbors)`` combined through a binary
connective realizes the replacement.  The reduced network is acyclic and so
globally stable.  Step 2 rewrites, with one more controller per node, the
single column of each reduced function that disagrees with the requested
fixed point.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from . import expr as ex
from .dynamics import (
    EXHAUSTIVE_CAP,
    StateIndex,
    VerificationReport,
    verify_global_stability,
)
from .fas import (
    DEFAULT_CYCLE_CAP,
    DEFAULT_OPTIMAL_CAP,
    FeedbackArcSetResult,
    solve_feedback_arc_set,
)
from .network import BooleanNetwork, interaction_digraph, minimize
from .stp import LogicalMatrix, column_of_bits, ones_row_collapse, truth_table

__all__ = [
    "SynthesisError",
    "NodeTransform",
    "ControllerPair",
    "Step2Pin",
    "PinningPlan",
    "SynthesisResult",
    "IFF",
    "reorder_inputs",
    "choose_replacement",
    "controller_product",
    "solve_controller_equation",
    "enumerate_controller_solutions",
    "solve_step2_equation",
    "reduced_system",
    "pin_fixed_point",
    "compose_plan",
    "synthesize",
    "lift_table",
    "apply_connective",
]

log = logging.getLogger(__name__)

# biconditional u <-> f, the canonical connective
IFF = LogicalMatrix(2, [1, 2, 2, 1])


class SynthesisError(RuntimeError):
    """Internal inconsistency, or a plan that failed verification."""


@dataclass
class NodeTransform:
    node: int
    neighbors: tuple[int, ...]
    kept: tuple[int, ...]
    deleted: tuple[int, ...]
    a_bar: LogicalMatrix
    a_hat: LogicalMatrix
    a_tilde: LogicalMatrix


@dataclass
class ControllerPair:
    """Connective ``M_oplus`` and controller ``K`` for one node.

    ``k`` is indexed by ``neighbors`` in ascending order; ``k_bold`` is the
    same function in the argument order used by the solver.
    """

    node: int
    neighbors: tuple[int, ...]
    m_oplus: LogicalMatrix
    k: LogicalMatrix
    k_bold: LogicalMatrix
    expression: str = ""
    connective: str = ""


@dataclass
class Step2Pin:
    node: int
    neighbors: tuple[int, ...]
    a_hat: LogicalMatrix
    a_check: LogicalMatrix
    column: int
    pair: ControllerPair | None = None


@dataclass
class PinningPlan:
    target: StateIndex
    fas: FeedbackArcSetResult
    step1: list[tuple[NodeTransform, ControllerPair]]
    step2: list[Step2Pin]
    nodes: tuple[str, ...]
    replacement: str = "target"
    verification: VerificationReport | None = None
    acyclic: bool | None = None

    @property
    def omega(self) -> set[int]:
        return {t.node for t, _ in self.step1}

    @property
    def tau(self) -> set[int]:
        return {p.node for p in self.step2}

    @property
    def u_plus(self) -> list[int]:
        return sorted(self.omega | self.tau)

    @property
    def u_minus(self) -> list[int]:
        return sorted(self.omega & self.tau)

    @property
    def u_omega(self) -> list[int]:
        return sorted(self.omega - self.tau)

    @property
    def u_tau(self) -> list[int]:
        return sorted(self.tau - self.omega)

    @property
    def c1(self) -> int:
        return self.fas.c1

    @property
    def c2(self) -> int:
        return self.fas.c2

    @property
    def c3(self) -> int:
        return len(self.step2)

    def to_json(self) -> dict:
        names = self.nodes

        def nm(ix):
            return [names[i] for i in ix]

        def cols(m: LogicalMatrix):
            return [int(c) for c in m.col_index]

        step1 = []
        for t, p in self.step1:
            step1.append({
                "node": names[t.node],
                "neighbors": nm(t.neighbors),
                "kept_neighbors": nm(t.kept),
                "deleted_neighbors": nm(t.deleted),
                "A_bar": cols(t.a_bar),
                "A_hat": cols(t.a_hat),
                "A_tilde": cols(t.a_tilde),
                "M_oplus": cols(p.m_oplus),
                "K": cols(p.k),
                "expression": p.expression,
                "connective": p.connective,
            })
        step2 = []
        for s in self.step2:
            step2.append({
                "node": names[s.node],
                "neighbors": nm(s.neighbors),
                "A_hat": cols(s.a_hat),
                "A_check": cols(s.a_check),
                "changed_column": s.column + 1,
                "M_oplus": cols(s.pair.m_oplus),
                "K": cols(s.pair.k),
                "expression": s.pair.expression,
                "connective": s.pair.connective,
            })
        return {
            "target": {"bits": str(self.target), "gamma": self.target.gamma},
            "costs": {"c1": self.c1, "c2": self.c2, "c3": self.c3},
            "method": {
                "fas": self.fas.method,
                "objective": self.fas.objective,
                "kappa": self.fas.kappa,
                "fas_complete": self.fas.complete,
                "replacement": self.replacement,
            },
            "deleted_edges": [[names[u], names[v]] for u, v in self.fas.chosen],
            "pinned_step1": step1,
            "pinned_step2": step2,
            "sets": {
                "U_plus": nm(self.u_plus),
                "U_minus": nm(self.u_minus),
                "U_omega": nm(self.u_omega),
                "U_tau": nm(self.u_tau),
            },
            "controlled_acyclic": self.acyclic,
            "verification": self.verification.to_json() if self.verification else None,
        }


@dataclass
class SynthesisResult:
    plan: PinningPlan
    controlled: BooleanNetwork
    reduced: BooleanNetwork


def _permutation_index(k: int, source_pos: Sequence[int]) -> np.ndarray:
    """Old column for each new column, where new argument m sits at old position source_pos[m]."""
    jn = np.arange(1 << k, dtype=np.int64)
    old = np.zeros_like(jn)
    for m, p in enumerate(source_pos):
        old |= ((jn >> (k - 1 - m)) & 1) << (k - 1 - p)
    return old


def reorder_inputs(a: LogicalMatrix, neighbors: Sequence[int], kept: Sequence[int],
                   deleted: Sequence[int]) -> LogicalMatrix:
    """The same function with arguments ordered (kept ascending, deleted ascending)."""
    if sorted([*kept, *deleted]) != sorted(neighbors) or set(kept) & set(deleted):
        raise ValueError("kept and deleted must partition the neighbors")
    where = {b: m for m, b in enumerate(neighbors)}
    order = [where[b] for b in sorted(kept)] + [where[b] for b in sorted(deleted)]
    return LogicalMatrix(a.rows, a.col_index[_permutation_index(len(neighbors), order)])


def restore_order(a_bar: LogicalMatrix, neighbors: Sequence[int], kept: Sequence[int],
                  deleted: Sequence[int]) -> LogicalMatrix:
    """Inverse of :func:`reorder_inputs`."""
    new_order = list(sorted(kept)) + list(sorted(deleted))
    where = {b: m for m, b in enumerate(new_order)}
    order = [where[b] for b in neighbors]
    return LogicalMatrix(a_bar.rows, a_bar.col_index[_permutation_index(len(neighbors), order)])


def choose_replacement(a_bar: LogicalMatrix, n_kept: int, deleted_bits: Sequence[int],
                       a_hat: LogicalMatrix | None = None) -> tuple[LogicalMatrix, LogicalMatrix]:
    """Replacement ``A_hat`` over the kept inputs and its padded form ``A_tilde``.

    By default ``A_hat`` is ``a_bar`` with the deleted inputs frozen at
    ``deleted_bits``.  A caller-supplied ``a_hat`` is used as is.
    """
    n_del = len(deleted_bits)
    if a_hat is None:
        tail = column_of_bits(deleted_bits)
        cols = (np.arange(1 << n_kept, dtype=np.int64) << n_del) | tail
        a_hat = LogicalMatrix(2, a_bar.col_index[cols])
    elif a_hat.shape != (2, 1 << n_kept):
        raise ValueError(f"A_hat must be 2 x {1 << n_kept}")
    return a_hat, ones_row_collapse(a_hat, n_del)


def controller_product(m_oplus: LogicalMatrix, k_bold: LogicalMatrix,
                       a_bar: LogicalMatrix) -> LogicalMatrix:
    """``M K (I kron A) Phi`` column by column: column i is M applied to (K_i, A_i)."""
    if k_bold.shape != a_bar.shape or m_oplus.shape != (2, 4):
        raise ValueError("shape mismatch")
    return LogicalMatrix(2, m_oplus.col_index[(k_bold.col_index - 1) * 2 + (a_bar.col_index - 1)])


def solve_controller_equation(target: LogicalMatrix, base: LogicalMatrix) -> tuple[LogicalMatrix, LogicalMatrix]:
    """Canonical ``(M_oplus, K)`` with ``M K (I kron base) Phi = target``.

    ``M_oplus`` is the biconditional and ``K`` is true exactly where the
    target and base columns agree, which covers all four (target, base)
    column cases at once.
    """
    if target.shape != base.shape or target.rows != 2:
        raise ValueError("target and base must both be 2 x 2^k")
    beta = target.col_index == base.col_index
    k_bold = LogicalMatrix(2, np.where(beta, 1, 2))
    if controller_product(IFF, k_bold, base) != target:
        raise SynthesisError("controller equation check failed")
    return IFF, k_bold


def enumerate_controller_solutions(target: LogicalMatrix, base: LogicalMatrix,
                                   ) -> Iterator[tuple[LogicalMatrix, LogicalMatrix]]:
    """Every ``(M_oplus, K)`` solving the controller equation.

    For each of the 16 connectives the admissible values of each K column
    are fixed independently, so the solutions are a product of per-column
    choices.
    """
    a = (target.col_index == 1).astype(int)
    y = (base.col_index == 1).astype(int)
    for alpha in itertools.product((1, 0), repeat=4):
        m = LogicalMatrix(2, [1 if v else 2 for v in alpha])
        choices = []
        for ai, yi in zip(a, y):
            ok = [b for b in (1, 0) if alpha[(1 - b) * 2 + (1 - yi)] == ai]
            if not ok:
                break
            choices.append(ok)
        else:
            for betas in itertools.product(*choices):
                yield m, LogicalMatrix(2, [1 if b else 2 for b in betas])


def solve_step2_equation(a_check: LogicalMatrix, a_hat: LogicalMatrix) -> tuple[LogicalMatrix, LogicalMatrix]:
    return solve_controller_equation(a_check, a_hat)


def lift_table(table: np.ndarray, sub: Sequence[int], full: Sequence[int]) -> np.ndarray:
    """Truth table over ``full`` of a function that only reads ``sub`` (both ascending)."""
    k = len(full)
    where = {b: m for m, b in enumerate(full)}
    j = np.arange(1 << k, dtype=np.int64)
    idx = np.zeros_like(j)
    for b in sub:
        idx = (idx << 1) | ((j >> (k - 1 - where[b])) & 1)
    return np.asarray(table)[idx]


def apply_connective(m_oplus: LogicalMatrix, u: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Pointwise ``u (+) f`` for truth tables u, f of equal length."""
    col = (1 - u.astype(np.int64)) * 2 + (1 - f.astype(np.int64))
    return (2 - m_oplus.col_index[col]).astype(np.uint8)


_NAMED_CONNECTIVES = {
    (1, 2, 2, 1): "u <-> f",
    (1, 1, 1, 2): "u | f",
    (1, 2, 2, 2): "u & f",
    (2, 1, 1, 2): "u ^ f",
    (1, 2, 1, 1): "u -> f",
}


def _connective_text(m_oplus: LogicalMatrix, u_text: str, f_text: str) -> str:
    key = tuple(int(c) for c in m_oplus.col_index)
    form = ex.parse_expression(_NAMED_CONNECTIVES.get(key) or
                               ex.render_expression(truth_table(m_oplus), ["u", "f"]))
    return ex.to_text(ex.substitute(form, {"u": ex.parse_expression(u_text),
                                           "f": ex.parse_expression(f_text)}))


def reduced_system(net: BooleanNetwork, transforms: Sequence[NodeTransform]) -> BooleanNetwork:
    """Network with every pinned node running its replacement over the kept inputs."""
    updates = {t.node: (t.kept, truth_table(t.a_hat), None) for t in transforms}
    reduced = net.replace(updates) if updates else net
    if not interaction_digraph(reduced).is_acyclic():
        raise SynthesisError("reduced network still has a cycle")
    return reduced


def pin_fixed_point(reduced: BooleanNetwork, target: StateIndex) -> list[Step2Pin]:
    """Nodes whose reduced function disagrees with the target at the target.

    The per-node constraints are independent, so pinning exactly the
    disagreeing nodes minimizes their number.  Only the one offending column
    is changed.
    """
    pins = []
    for i, nb in enumerate(reduced.in_neighbors):
        col = column_of_bits([target.bits[b] for b in nb])
        a_hat = reduced.structure_matrix(i)
        want = 1 if target.bits[i] else 2
        if a_hat.col_index[col] != want:
            idx = a_hat.col_index.copy()
            idx[col] = want
            pins.append(Step2Pin(i, nb, a_hat, LogicalMatrix(2, idx), col))
    return pins


def _node_expression(net: BooleanNetwork, i: int) -> str:
    if net.exprs is not None and net.exprs[i] is not None:
        return net.exprs[i]
    return ex.render_expression(net.tables[i], [net.nodes[b] for b in net.in_neighbors[i]])


def compose_plan(
    net: BooleanNetwork,
    fas: FeedbackArcSetResult,
    step1: Sequence[tuple[NodeTransform, ControllerPair]],
    step2: Sequence[Step2Pin],
    target: StateIndex,
    replacement: str = "target",
) -> tuple[PinningPlan, BooleanNetwork]:
    """Assemble the plan and the closed-loop network.

    Each controlled node keeps its original in-neighbors.  Its closed-loop
    table is built from the controllers themselves and checked against the
    intended replacement (``A_tilde`` after step 1, ``A_check`` after step 2).
    """
    names = net.nodes
    by1 = {t.node: (t, p) for t, p in step1}
    by2 = {s.node: s for s in step2}
    updates = {}
    for j in sorted(set(by1) | set(by2)):
        nb = net.in_neighbors[j]
        table = net.tables[j]
        text = _node_expression(net, j)
        if j in by1:
            t, p = by1[j]
            u = truth_table(p.k)
            table = apply_connective(p.m_oplus, u, table)
            want = lift_table(truth_table(t.a_hat), t.kept, nb)
            if not np.array_equal(table, want):
                raise SynthesisError(f"step-1 controller of {names[j]} does not realize A_tilde")
            text = p.connective
        if j in by2:
            s = by2[j]
            u = lift_table(truth_table(s.pair.k), s.neighbors, nb)
            table = apply_connective(s.pair.m_oplus, u, table)
            want = lift_table(truth_table(s.a_check), s.neighbors, nb)
            if not np.array_equal(table, want):
                raise SynthesisError(f"step-2 controller of {names[j]} does not realize A_check")
            text = _connective_text(s.pair.m_oplus, s.pair.expression, text)
            s.pair.connective = text
        updates[j] = (nb, table, text)
    controlled = net.replace(updates) if updates else net
    plan = PinningPlan(target, fas, list(step1), list(step2), names, replacement)
    return plan, controlled


def synthesize(
    net: BooleanNetwork,
    target: StateIndex,
    fas_method: str = "exact",
    objective: str = "lexicographic",
    cycle_cap: int = DEFAULT_CYCLE_CAP,
    optimal_cap: int = DEFAULT_OPTIMAL_CAP,
    replacement: str | Mapping[int, LogicalMatrix] = "target",
    verify: bool = True,
    exhaustive_cap: int = EXHAUSTIVE_CAP,
    samples: int = 500,
    steps: int | None = None,
    seed: int = 0,
) -> SynthesisResult:
    """Design pinning controllers that globally stabilize ``net`` to ``target``.

    ``replacement`` chooses how deleted inputs are frozen in step 1:
    ``"target"`` (their values in the target state), ``"one"``, ``"zero"``,
    or a mapping from node index to an explicit ``A_hat``.  With ``verify``
    the closed loop is checked exhaustively when ``n <= exhaustive_cap`` and
    by ``samples`` random trajectories otherwise; a failed check raises
    :class:`SynthesisError`.
    """
    if target.n != net.n:
        raise ValueError(f"target has {target.n} bits, network has {net.n} nodes")
    net = minimize(net)
    names = net.nodes
    fas = solve_feedback_arc_set(interaction_digraph(net), fas_method, cycle_cap, optimal_cap, objective)

    step1 = []
    for w in fas.pinned:
        nb = net.in_neighbors[w]
        deleted = fas.deleted_sources[w]
        kept = tuple(b for b in nb if b not in deleted)
        a_bar = reorder_inputs(net.structure_matrix(w), nb, kept, deleted)
        if isinstance(replacement, str):
            freeze = {"target": [target.bits[b] for b in deleted],
                      "one": [1] * len(deleted), "zero": [0] * len(deleted)}.get(replacement)
            if freeze is None:
                raise ValueError(f"unknown replacement policy {replacement!r}")
            a_hat, a_tilde = choose_replacement(a_bar, len(kept), freeze)
        else:
            given = replacement.get(w)
            if given is None:
                a_hat, a_tilde = choose_replacement(a_bar, len(kept), [target.bits[b] for b in deleted])
            else:
                a_hat, a_tilde = choose_replacement(a_bar, len(kept), [0] * len(deleted), given)
        m, k_bold = solve_controller_equation(a_tilde, a_bar)
        k = restore_order(k_bold, nb, kept, deleted)
        nb_names = [names[b] for b in nb]
        u_text = ex.render_expression(truth_table(k), nb_names)
        pair = ControllerPair(w, nb, m, k, k_bold, u_text,
                              _connective_text(m, u_text, _node_expression(net, w)))
        step1.append((NodeTransform(w, nb, kept, deleted, a_bar, a_hat, a_tilde), pair))

    reduced = reduced_system(net, [t for t, _ in step1])
    step2 = pin_fixed_point(reduced, target)
    for s in step2:
        m, k = solve_step2_equation(s.a_check, s.a_hat)
        s.pair = ControllerPair(s.node, s.neighbors, m, k, k,
                                ex.render_expression(truth_table(k), [names[b] for b in s.neighbors]))

    policy = replacement if isinstance(replacement, str) else "custom"
    plan, controlled = compose_plan(net, fas, step1, step2, target, policy)
    plan.acyclic = interaction_digraph(minimize(controlled)).is_acyclic()
    if verify:
        if net.n <= exhaustive_cap:
            report = verify_global_stability(controlled, target, "exhaustive", cap=exhaustive_cap)
        else:
            report = verify_global_stability(controlled, target, "sampled", samples=samples,
                                             steps=steps, seed=seed)
        plan.verification = report
        if not report.verified:
            raise SynthesisError(f"closed loop failed verification: {report.note}")
    return SynthesisResult(plan, controlled, reduced)
