"""State-space analysis of synchronous Boolean networks.

States are handled as bit-packed integer codes with ``x_1`` as the most
significant bit, so the code of a state is ``2^n - gamma``.  Nothing here
builds the ``2^n x 2^n`` transition matrix; the exhaustive sweep works on a
successor array of length ``2^n`` and is gated by ``EXHAUSTIVE_CAP``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .network import BooleanNetwork, CapExceeded

__all__ = [
    "StateIndex",
    "Attractor",
    "AttractorReport",
    "VerificationReport",
    "CapExceeded",
    "step",
    "successor_codes",
    "step_bits",
    "attractors",
    "verify_global_stability",
    "state_transition_graph",
    "stg_to_dot",
    "forward_orbits",
    "EXHAUSTIVE_CAP",
]

EXHAUSTIVE_CAP = 22
DEFAULT_SAMPLES = 500


@dataclass(frozen=True)
class StateIndex:
    """A network state, as bits ``(x_1..x_n)`` and as the index gamma of delta_{2^n}^gamma."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError("state bits must be 0 or 1")
        object.__setattr__(self, "bits", bits)

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def code(self) -> int:
        c = 0
        for b in self.bits:
            c = (c << 1) | b
        return c

    @property
    def gamma(self) -> int:
        return (1 << self.n) - self.code

    @classmethod
    def from_gamma(cls, gamma: int, n: int) -> "StateIndex":
        if not 1 <= gamma <= 1 << n:
            raise ValueError(f"gamma must lie in [1, {1 << n}]")
        return cls.from_code((1 << n) - gamma, n)

    @classmethod
    def from_code(cls, code: int, n: int) -> "StateIndex":
        return cls(tuple((int(code) >> (n - 1 - i)) & 1 for i in range(n)))

    @classmethod
    def from_string(cls, s: str) -> "StateIndex":
        s = s.strip()
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a bit string: {s!r}")
        return cls(tuple(int(c) for c in s))

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


def step(net: BooleanNetwork, state: StateIndex) -> StateIndex:
    """Synchronous update of every node from its own truth table."""
    if state.n != net.n:
        raise ValueError(f"state has {state.n} bits, network has {net.n} nodes")
    return StateIndex(tuple(net.evaluate_node(i, state.bits) for i in range(net.n)))


def successor_codes(net: BooleanNetwork, codes: np.ndarray) -> np.ndarray:
    """Successor codes for an int64 array of state codes (n <= 62)."""
    n = net.n
    if n > 62:
        raise ValueError("integer state codes need n <= 62; use step_bits")
    codes = np.asarray(codes, dtype=np.int64)
    out = np.zeros_like(codes)
    for i in range(n):
        j = np.zeros_like(codes)
        for b in net.in_neighbors[i]:
            j = (j << 1) | (1 - ((codes >> (n - 1 - b)) & 1))
        out |= net.tables[i][j].astype(np.int64) << (n - 1 - i)
    return out


def step_bits(net: BooleanNetwork, x: np.ndarray) -> np.ndarray:
    """Successors of a ``(m, n)`` 0/1 state matrix; works for any n."""
    out = np.empty_like(x)
    for i in range(net.n):
        j = np.zeros(x.shape[0], dtype=np.int64)
        for b in net.in_neighbors[i]:
            j = (j << 1) | (1 - x[:, b].astype(np.int64))
        out[:, i] = net.tables[i][j]
    return out


@dataclass
class Attractor:
    states: list[StateIndex]
    basin_size: int

    @property
    def is_fixed_point(self) -> bool:
        return len(self.states) == 1

    def to_json(self) -> dict:
        return {
            "kind": "fixed_point" if self.is_fixed_point else "cycle",
            "length": len(self.states),
            "states": [str(s) for s in self.states],
            "gammas": [s.gamma for s in self.states],
            "basin_size": self.basin_size,
        }


@dataclass
class AttractorReport:
    n: int
    attractors: list[Attractor]

    @property
    def fixed_points(self) -> list[StateIndex]:
        return [a.states[0] for a in self.attractors if a.is_fixed_point]

    @property
    def cycles(self) -> list[list[StateIndex]]:
        return [a.states for a in self.attractors if not a.is_fixed_point]

    @property
    def basin_sizes(self) -> list[int]:
        return [a.basin_size for a in self.attractors]

    def to_json(self) -> dict:
        return {"n": self.n, "attractors": [a.to_json() for a in self.attractors]}


@dataclass
class VerificationReport:
    verified: bool
    mode: str
    target: StateIndex
    T: int | None = None
    counterexample: StateIndex | None = None
    violating_node: int | None = None
    samples: int | None = None
    steps: int | None = None
    seed: int | None = None
    note: str = ""

    def to_json(self) -> dict:
        return {
            "verified": self.verified,
            "mode": self.mode,
            "probabilistic": self.mode == "sampled",
            "target_bits": str(self.target),
            "target_gamma": self.target.gamma,
            "T": self.T,
            "counterexample": str(self.counterexample) if self.counterexample else None,
            "violating_node": self.violating_node,
            "samples": self.samples,
            "steps": self.steps,
            "seed": self.seed,
            "note": self.note,
        }


def _check_cap(n: int, cap: int):
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the exhaustive cap of {cap}; use sampled verification")


def _sweep(net: BooleanNetwork):
    """Successor array plus, per state, the cycle state it eventually enters."""
    size = 1 << net.n
    succ = successor_codes(net, np.arange(size, dtype=np.int64))
    # after n doublings far = succ^(2^n), which lies on a cycle for every state
    far = succ.copy()
    for _ in range(net.n):
        far = far[far]
    # label every cycle state by the smallest code on its cycle
    label = np.arange(size, dtype=np.int64)
    jump = succ.copy()
    for _ in range(net.n + 1):
        label = np.minimum(label, label[jump])
        jump = jump[jump]
    return succ, far, label


def attractors(net: BooleanNetwork, cap: int = EXHAUSTIVE_CAP) -> AttractorReport:
    """All fixed points and cycles with their basin sizes, by an exhaustive sweep."""
    _check_cap(net.n, cap)
    succ, far, label = _sweep(net)
    basin_of = label[far]
    reps, counts = np.unique(basin_of, return_counts=True)
    found = []
    for rep, count in zip(reps.tolist(), counts.tolist()):
        cyc = [rep]
        s = int(succ[rep])
        while s != rep:
            cyc.append(s)
            s = int(succ[s])
        found.append(Attractor([StateIndex.from_code(c, net.n) for c in cyc], int(count)))
    # order by gamma of the representative, smallest first
    found.sort(key=lambda a: min(s.gamma for s in a.states))
    return AttractorReport(net.n, found)


def _fixed_point_violation(net: BooleanNetwork, target: StateIndex) -> int | None:
    for i in range(net.n):
        if net.evaluate_node(i, target.bits) != target.bits[i]:
            return i
    return None


def verify_global_stability(
    net: BooleanNetwork,
    target: StateIndex,
    mode: str = "exhaustive",
    samples: int = DEFAULT_SAMPLES,
    steps: int | None = None,
    seed: int | None = None,
    cap: int = EXHAUSTIVE_CAP,
) -> VerificationReport:
    """Check that every trajectory reaches ``target`` and stays there.

    ``mode="exhaustive"`` sweeps all ``2^n`` states and reports the largest
    first-hit time T.  ``mode="sampled"`` runs ``samples`` random initial
    states for ``steps`` steps (default ``4n``); a positive answer there is
    evidence, not proof.
    """
    if target.n != net.n:
        raise ValueError(f"target has {target.n} bits, network has {net.n} nodes")
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    bad = _fixed_point_violation(net, target)
    if bad is not None:
        return VerificationReport(False, mode, target, violating_node=bad,
                                  note=f"target is not a fixed point: node {net.nodes[bad]} changes")

    if mode == "exhaustive":
        _check_cap(net.n, cap)
        size = 1 << net.n
        succ, far, _ = _sweep(net)
        tcode = target.code
        miss = np.flatnonzero(far != tcode)
        if miss.size:
            return VerificationReport(False, mode, target,
                                      counterexample=StateIndex.from_code(int(miss[0]), net.n),
                                      note="some trajectory never reaches the target")
        dist = np.full(size, -1, dtype=np.int64)
        dist[tcode] = 0
        t = 0
        while (dist < 0).any():
            t += 1
            newly = (dist < 0) & (dist[succ] == t - 1)
            dist[newly] = t
        return VerificationReport(True, mode, target, T=int(dist.max()))

    if samples < 1:
        raise ValueError("samples must be >= 1")
    if seed is None:
        raise ValueError("sampled mode needs a seed for reproducibility")
    steps = 4 * net.n if steps is None else steps
    if steps < 1:
        raise ValueError("steps must be >= 1")
    rng = np.random.default_rng(seed)
    x = rng.integers(0, 2, size=(samples, net.n), dtype=np.uint8)
    goal = np.array(target.bits, dtype=np.uint8)
    hit = np.full(samples, -1, dtype=np.int64)
    at = np.all(x == goal, axis=1)
    hit[at] = 0
    x0 = x.copy()
    for t in range(1, steps + 1):
        x = step_bits(net, x)
        at = np.all(x == goal, axis=1)
        hit[(hit < 0) & at] = t
    ok = bool((hit >= 0).all())
    report = VerificationReport(ok, "sampled", target, samples=samples, steps=steps, seed=seed,
                                note="probabilistic evidence only")
    if ok:
        report.T = int(hit.max())
    else:
        report.counterexample = StateIndex(tuple(x0[int(np.flatnonzero(hit < 0)[0])]))
    return report


def _orbit(net: BooleanNetwork, start: StateIndex, max_len: int) -> list[StateIndex]:
    states = [start]
    seen = {start.bits}
    while len(states) <= max_len:
        t = step(net, states[-1])
        states.append(t)
        if t.bits in seen:
            break
        seen.add(t.bits)
    return states


def forward_orbits(
    net: BooleanNetwork,
    init: Iterable[StateIndex] | None = None,
    samples: int | None = None,
    seed: int | None = None,
    max_orbit: int = 10_000,
) -> list[list[StateIndex]]:
    """One orbit per initial state, ending at the first repeated state.

    Initial states are ``init`` followed by ``samples`` random states drawn
    with ``seed``.  Orbits are cut after ``max_orbit`` steps.
    """
    starts = list(init or [])
    if samples:
        if seed is None:
            raise ValueError("random initial states need a seed")
        rng = np.random.default_rng(seed)
        starts += [StateIndex(tuple(r)) for r in rng.integers(0, 2, size=(samples, net.n))]
    for s in starts:
        if s.n != net.n:
            raise ValueError(f"state has {s.n} bits, network has {net.n} nodes")
    return [_orbit(net, s, max_orbit) for s in starts]


def state_transition_graph(
    net: BooleanNetwork,
    init: Iterable[StateIndex] | None = None,
    samples: int | None = None,
    seed: int | None = None,
    cap: int = EXHAUSTIVE_CAP,
    max_orbit: int = 10_000,
) -> list[tuple[StateIndex, StateIndex]]:
    """Edges ``s -> step(s)``.

    With no ``init`` and no ``samples`` the whole graph is returned (needs
    ``n <= cap``).  Otherwise the forward orbits of the given initial states,
    or of ``samples`` random ones, are followed until a state repeats or
    ``max_orbit`` steps have been taken.
    """
    if init is None and samples is None:
        _check_cap(net.n, cap)
        size = 1 << net.n
        succ = successor_codes(net, np.arange(size, dtype=np.int64))
        order = np.arange(size - 1, -1, -1)  # ascending gamma
        return [(StateIndex.from_code(int(c), net.n), StateIndex.from_code(int(succ[c]), net.n))
                for c in order]
    edges: dict[tuple[int, ...], tuple[StateIndex, StateIndex]] = {}
    for orbit in forward_orbits(net, init, samples, seed, max_orbit):
        for s, t in zip(orbit, orbit[1:]):
            edges.setdefault(s.bits, (s, t))
    return list(edges.values())


def stg_to_dot(edges: Sequence[tuple[StateIndex, StateIndex]], name: str = "stg") -> str:
    lines = [f"digraph {name} {{"]
    nodes: dict[str, None] = {}
    for s, t in edges:
        nodes.setdefault(str(s))
        nodes.setdefault(str(t))
    for label in nodes:
        lines.append(f'  "{label}";')
    for s, t in edges:
        lines.append(f'  "{s}" -> "{t}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
