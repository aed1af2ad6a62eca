"""
Modules, equivariant maps and split tests
=========================================

A module stores one action matrix per group element.  Split tests solve a
linear system for a retraction or section; a ``None`` answer means that
system is infeasible.
"""

import numpy as np

from twistmod.groups import cyclic
from twistmod.morph import EquivariantMap, ShortExactSeq, check_ses, hom_dim, is_split_mono, is_w_split
from twistmod.reps import direct_sum, regular_module, trivial_module

C2 = cyclic(2)
k = trivial_module(C2, 2)
kC2 = regular_module(C2, 2)
print("regular module, action of the generator:", kC2.action[1].tolist())
print("dim Hom(k, kC2) =", hom_dim(k, kC2), " dim End(kC2) =", hom_dim(kC2, kC2))

# 0 -> k -> kC2 -> k -> 0 in characteristic 2: the socle has no complement
socle = ShortExactSeq(EquivariantMap(k, kC2, [[1], [1]]), EquivariantMap(kC2, k, [[1, 1]]), "socle")
print("exact:", check_ses(socle).ok, " split:", is_split_mono(socle.d1) is not None)

# tensoring with a free module splits it, tensoring with k does not
print("kC2 (x) S splits:", is_w_split(socle, kC2)[0], "  k (x) S splits:", is_w_split(socle, k)[0])

# the inclusion into a direct sum splits and the retraction is returned
inc = EquivariantMap(kC2, direct_sum(kC2, k), np.vstack([np.eye(2, dtype=np.int64), [[0, 0]]]))
r = is_split_mono(inc)
print("retraction of kC2 -> kC2 + k:", r.matrix.tolist())
