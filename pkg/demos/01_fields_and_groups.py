"""
Exact arithmetic over GF(p) and small groups
============================================

Everything in twistmod is a numpy int64 array reduced mod p.  Groups are
multiplication tables; subgroups carry an explicit embedding.
"""

import numpy as np

from twistmod import linalg
from twistmod.groups import cyclic, direct_product, klein_four, left_cosets, subgroups

# solve A X = B over GF(2); the particular solution is checked by multiplying back
a = np.array([[1, 1], [0, 1]])
sol = linalg.solve_linear(a, np.eye(2, dtype=np.int64), 2)
print("X =", sol.particular.tolist(), " A X =", linalg.matmul(a, sol.particular, 2).tolist())

# an infeasible system returns None
print("x*(1,1) = (1,2) over GF(3):", linalg.solve_linear(np.array([[1], [1]]), np.array([[1], [2]]), 3))

print("rank [[1,2],[2,4]] mod 5 =", linalg.rank(np.array([[1, 2], [2, 4]]), 5))

# the Klein four group as C2 x C2; element (a, b) has index 2a + b
v4, left, right = direct_product(cyclic(2), cyclic(2), name="V4")
print(v4, "element orders:", [v4.element_order(x) for x in range(4)])

for h in subgroups(klein_four()):
    print(f"  subgroup {sorted(h.image)} has {len(left_cosets(h).reps)} cosets")
