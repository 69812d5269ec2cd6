"""
Parsing a network and exploring its dynamics
============================================

The six-node T-LGL survival network ships with the package.  We parse it,
look at its interaction digraph, list its attractors and check whether it
is globally stable to the apoptosis-free state 100001.
"""

from pinbn import (
    StateIndex,
    algebraic_form_L,
    attractors,
    interaction_digraph,
    minimize,
    verify_global_stability,
)
from pinbn.cli import digraph_dot, load_network
from pinbn.dynamics import forward_orbits, state_transition_graph, stg_to_dot

net = minimize(load_network("corpus/tlgl6"))
print(net, "nodes:", net.nodes)

# edge i -> j means the rule of node j reads node i
g = interaction_digraph(net)
print([(net.nodes[u], net.nodes[v]) for u, v in g.edges])
print(digraph_dot(net))

# %%
# Attractors by an exhaustive sweep over all 64 states.
rep = attractors(net)
for a in rep.attractors:
    print([str(s) for s in a.states], "basin", a.basin_size)

# %%
# The target is gamma = 31, i.e. x1 = x6 = 1 and everything else 0.
target = StateIndex.from_gamma(31, 6)
report = verify_global_stability(net, target)
print(target, report.verified, report.note)

# %%
# The three-node example has a transition matrix small enough to print.
small = load_network("corpus/ex31")
print(algebraic_form_L(small))
print(stg_to_dot(state_transition_graph(small)))

# a few random forward orbits of the six-node model
for orbit in forward_orbits(net, samples=5, seed=3):
    print(" -> ".join(str(s) for s in orbit))
