"""
Logical matrices and the semi-tensor product
============================================

Boolean values are unit vectors: true is delta_2^1 and false is delta_2^2.
A logical matrix stores only the row index of the single 1 in each column,
so products reduce to integer indexing.
"""

import numpy as np

from pinbn.stp import (
    delta,
    power_reducing_matrix,
    stp,
    structure_matrix,
    swap_matrix,
    truth_table,
)

# two unit vectors multiply into the unit vector of the pair
print(stp(delta(2, 1), delta(2, 2)))          # delta_4[2]
print(stp(delta(2, 2), delta(2, 1)))          # delta_4[3]

# dimensions need not match; the smaller side is lifted by a Kronecker factor
a = delta(2, 1, 2, 2, 2)                      # AND of two inputs
print(a @ delta(2, 1) @ delta(2, 2))          # true & false -> delta_2[2]

# %%
# Structure matrices are truth tables read in canonical order, all-true
# input first.  (x1 & x2) | (x1 & !x2) is just x1.
table = [1, 1, 0, 0]
print(structure_matrix(table), truth_table(structure_matrix(table)))

# %%
# The swap matrix exchanges two factors and the power-reducing matrix
# duplicates one.
w = swap_matrix(2, 4)
x, y = delta(2, 2), delta(4, 3)
print(w @ stp(x, y) == stp(y, x))

phi = power_reducing_matrix(2)
z = delta(4, 3)
print(phi @ z, stp(z, z))

# dense expansion, for inspection only
print(swap_matrix(2, 2).to_dense())
print(np.array_equal(phi.to_dense().sum(axis=0), np.ones(4)))
