"""
Relative projectivity, P(w) and vertices
========================================

``is_rel_projective`` looks for an H-endomorphism whose relative trace is
the identity.  ``is_w_projective`` asks whether the evaluation map
W (x) W* (x) M -> M splits.  Both return verified witnesses.
"""

from twistmod.groups import klein_four, subgroups, trivial_subgroup
from twistmod.relproj import is_rel_projective, is_w_projective, lifting_oracle, vertex
from twistmod.reps import permutation_module, regular_module, trivial_module
from twistmod.telescope import string_module_v4

g = klein_four()
subs = subgroups(g)
k = trivial_module(g, 2)
m2 = string_module_v4(2, g)

for name, m in [("k", k), ("kV4", regular_module(g, 2)), ("string m_2", m2)]:
    row = [int(is_rel_projective(m, h).projective) for h in subs]
    print(f"{name:>10}: H-projective for subgroup orders {[h.sub.order for h in subs]} -> {row}")

# the lifting oracle is an independent test of the same property
print("lifting oracle agrees on k:", all(lifting_oracle(k, h) == is_rel_projective(k, h).projective for h in subs))

# w = k[G/H] recovers H-projectivity, w = kG recovers ordinary projectivity
h = subs[1]
w = permutation_module(h, 2)
perm = permutation_module(subs[2], 2)
print("P(k[G/H]) membership of k[G/H']:", is_w_projective(perm, w).projective,
      " H-projective:", is_rel_projective(perm, h).projective)
print("P(kG) membership of m_2:", is_w_projective(m2, regular_module(g, 2)).projective,
      " projective:", is_rel_projective(m2, trivial_subgroup(g)).projective)

for name, m in [("k", k), ("k[G/H]", w), ("kV4", regular_module(g, 2))]:
    print(f"vertex({name}) =", [sorted(v.image) for v in vertex(m)])
