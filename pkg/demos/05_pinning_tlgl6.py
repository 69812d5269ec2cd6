"""
Pinning control of the six-node T-LGL network
=============================================

Full synthesis: choose pinned nodes from a feedback arc set, replace their
rules so the network becomes acyclic, fix the target as the unique fixed
point, and compose the controllers.  The closed loop is checked
exhaustively.
"""

import json

from pinbn import StateIndex, attractors, synthesize, to_rules
from pinbn.cli import load_network

net = load_network("corpus/tlgl6")
target = StateIndex.from_string("100001")
res = synthesize(net, target)
plan = res.plan

print("pinned in step 1:", [net.nodes[t.node] for t, _ in plan.step1])
print("pinned in step 2:", [net.nodes[p.node] for p in plan.step2])
print("costs c1, c2, c3:", plan.c1, plan.c2, plan.c3)
for t, pair in plan.step1:
    print(f"  u_{net.nodes[t.node]} = {pair.expression}")

# %%
# The closed loop, as a rule file
print(to_rules(res.controlled))
rep = attractors(res.controlled)
print("fixed points:", [str(s) for s in rep.fixed_points], "T =", plan.verification.T)

# %%
# The same plan as JSON, the format the command line writes
print(json.dumps(plan.to_json()["sets"], indent=1))

# %%
# The three-node example: no cycles, so only step 2 is needed.
small = load_network("corpus/ex31")
for gamma in (7, 3):
    p = synthesize(small, StateIndex.from_gamma(gamma, 3)).plan
    print(gamma, "pins", [small.nodes[s.node] for s in p.step2],
          "A_check", [s.a_check for s in p.step2])
