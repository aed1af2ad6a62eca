"""
Telescopes of string modules over the Klein four group
======================================================

The string modules m_1 -> m_2 -> ... are indecomposable and none of the
inclusions splits.  Each finite stage
0 -> m_1 + ... + m_N -> m_1 + ... + m_{N+1} -> m_{N+1} -> 0 does split, so its
twisted module is H-projective.
"""

from twistmod.groups import cyclic, direct_product
from twistmod.morph import is_isomorphic, is_split_mono
from twistmod.reps import induce, permutation_module, restrict, tensor
from twistmod.telescope import (
    probably_indecomposable,
    stage_twist_projective,
    string_family_v4,
    tensor_family,
)

fam = string_family_v4(6)
print("dims:", [m.dim for m in fam.modules])
print("inclusions split:", [is_split_mono(fam.inclusion(n)) is not None for n in range(1, 6)])
print("probably indecomposable:", [probably_indecomposable(m) for m in fam.modules[:4]])

for q in (2, 4):
    for N in range(1, 6):
        r = stage_twist_projective(fam, N, q)
        print(f"q={q} N={N}: stage dims {r.dims}, twisted dim {r.twist_dim:3}, split={r.stage_split}, "
              f"H-projective={r.projective}  ({sum(r.timings.values()):.2f}s)")

# the projection formula Ind(Res(w) (x) m) = w (x) Ind(m), witnessed by an explicit isomorphism
H = fam.modules[0].group
G, emb, _ = direct_product(H, cyclic(2), name="V4xC2")
w = permutation_module(emb, 2)
for n in (1, 2, 3):
    m = fam.module(n)
    iso = is_isomorphic(induce(emb, tensor(restrict(emb, w), m)), tensor(w, induce(emb, m)))
    print(f"projection formula for m_{n}: {iso.status}")
print("tensored family dims:", [m.dim for m in tensor_family(restrict(emb, w), fam).modules])
