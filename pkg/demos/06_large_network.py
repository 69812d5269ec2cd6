"""
Scaling to 90 nodes
===================

With bounded in-degree every synthesis step works on per-node tables of
size 2^K.  Only verification would need the 2^n state space, so for large
networks it is replaced by sampling random trajectories.
"""

import time

import numpy as np

from pinbn import BooleanNetwork, StateIndex, synthesize

rng = np.random.default_rng(42)
n, kmax = 90, 5
nbrs, tables = [], []
for i in range(n):
    k = int(rng.integers(1, kmax + 1))
    nb = tuple(sorted(rng.choice(n, size=k, replace=False).tolist()))
    nbrs.append(nb)
    tables.append(rng.integers(0, 2, 1 << k))
net = BooleanNetwork(tuple(f"g{i}" for i in range(n)), tuple(nbrs), tuple(tables))
target = StateIndex(tuple(rng.integers(0, 2, n).tolist()))

t0 = time.perf_counter()
res = synthesize(net, target, fas_method="greedy", samples=500, seed=1)
elapsed = time.perf_counter() - t0

plan = res.plan
v = plan.verification
print(f"{elapsed:.2f} s, {plan.c2} edges deleted, {len(plan.u_plus)} nodes pinned")
print(f"sampled check: {v.verified} over {v.samples} starts x {v.steps} steps, max hit time {v.T}")
