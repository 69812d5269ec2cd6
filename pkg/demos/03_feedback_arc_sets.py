"""
Breaking every cycle with few pinned nodes
==========================================

Deleting a feedback arc set makes the interaction digraph acyclic.  Among
the smallest such sets we want the one whose edges end in the fewest
distinct nodes, since those are the nodes that need a controller.
"""

import numpy as np

from pinbn import interaction_digraph, minimize
from pinbn.cli import load_network
from pinbn.fas import enumerate_cycles, greedy_feedback_arc_set, solve_feedback_arc_set
from pinbn.network import InteractionDigraph

net = minimize(load_network("corpus/tlgl6"))
g = interaction_digraph(net)
name = net.nodes

cycles = enumerate_cycles(g)
print(len(cycles), "elementary cycles")
for cyc in cycles:
    print("  " + " -> ".join(name[u] for u, _ in cyc))

# %%
# Exact search: first the smallest number of deleted edges c2, then the
# smallest number of ending vertices c1 among all sets of that size.
res = solve_feedback_arc_set(g)
print("c2 =", res.c2, "c1 =", res.c1, "optimal sets seen:", res.kappa)
print("delete", [(name[u], name[v]) for u, v in res.chosen])
print("pin", [name[v] for v in res.pinned])

# the 'vertices' objective minimizes pinned nodes directly
alt = solve_feedback_arc_set(g, objective="vertices")
print("vertex-first:", alt.c1, "pinned,", alt.c2, "edges")

# %%
# On large graphs a greedy pass over short cycles is the practical option.
rng = np.random.default_rng(0)
n = 90
edges = sorted({(int(u), v) for v in range(n)
                for u in rng.choice(n, size=int(rng.integers(0, 4)), replace=False)})
big = InteractionDigraph(n, tuple(edges))
greedy = greedy_feedback_arc_set(big)
print(len(edges), "edges,", greedy.c2, "deleted,", greedy.c1, "nodes pinned")
print("acyclic after deletion:", big.without(greedy.chosen).is_acyclic())
