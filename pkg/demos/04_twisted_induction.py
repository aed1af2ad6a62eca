"""
Twisted induction of a short exact sequence
===========================================

From 0 -> X -> Y -> Z -> 0 over H and a power q of p we build a module over
H x C_q on X^(q-1) + Y + Z^(q-1), with the cyclic generator acting as the
identity plus a shift along the chain X -> ... -> X -> Y -> Z -> ... -> Z.
The result is relatively H-projective exactly when X -> Y splits.
"""

import numpy as np

from twistmod import linalg
from twistmod.fixtures import ses_fixtures, valid_qs
from twistmod.twist import (
    binomial_identity_check,
    extract_splitting,
    relation_failures,
    solve_factorization,
    twist_projectivity,
    twisted_induction,
)

print(f"{'sequence':<28} q  dim  d1 split  H-projective  factorization")
for fx in ses_fixtures():
    for q in valid_qs(fx.p):
        T = twisted_induction(fx.ses, q)
        f = solve_factorization(T)
        print(f"{fx.name:<28} {q} {T.dim:4}  {str(fx.split):8}  {str(twist_projectivity(T).projective):12}  "
              f"{'found' if f is not None else 'infeasible'}")

# a feasible factorization hands back the splitting: s = theta_{1,q}
fx = next(f for f in ses_fixtures(3) if f.split)
blocks = solve_factorization(twisted_induction(fx.ses, 3))
s = extract_splitting(blocks)
print("\n", fx.name, "s d1 =", linalg.matmul(s.matrix, fx.ses.d1.matrix, 3).tolist(),
      " block relations violated:", relation_failures(blocks))

# the binomial chain only collapses to 1 when q is a power of p
for q, p in [(4, 2), (9, 3), (6, 2)]:
    rep = binomial_identity_check(q, p)
    print(f"(-1)^i C({q - 1}, i) mod {p}: {list(rep.residues)}  ->  {'pass' if rep.passed else 'fail'}")
