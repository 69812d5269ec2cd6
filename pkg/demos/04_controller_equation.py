"""
Solving the controller equation
===============================

A pinned node runs u (+) f, where f is its own rule and u a controller
over its in-neighbors.  Given the rule A and the wanted behaviour A~, we
need a connective M and controller K with M K (I kron A) Phi = A~.  The
biconditional always works: u is true exactly where A already agrees with
A~.
"""

from itertools import islice

from pinbn.expr import render_expression
from pinbn.stp import delta, truth_table
from pinbn.synth import controller_product, enumerate_controller_solutions, solve_controller_equation

base = delta(2, 1, 2, 2, 2)        # x & y
want = delta(2, 1, 1, 1, 2)        # x | y
m, k = solve_controller_equation(want, base)
print("M =", m, "K =", k)
print("u =", render_expression(truth_table(k), ["x", "y"]))
print(controller_product(m, k, base) == want)

# %%
# The biconditional is one choice among many.  Enumeration lists them all.
for m, k in islice(enumerate_controller_solutions(want, base), 6):
    print(m, k)
print(sum(1 for _ in enumerate_controller_solutions(want, base)), "solutions in total")
