"""A short tour of p-complexes: blocks, tensor products, cohomology and symbols."""

from __future__ import annotations

import random

from pdgcat import pcomplex as pc

p = 5

# V_i is H/(d^{i+1}); the balanced version sits symmetrically around degree 0.
V1 = pc.balanced_block(p, 1)
print("V~_1 dims:", V1.dims)

# In characteristic 5 the product V~_1 (x) V~_1 splits as V~_0 + V~_2.
T = pc.tensor(V1, V1)
print("V~_1 (x) V~_1 =", pc.decompose(T).as_dict())

# Past the middle the rule produces free summands V_{p-1}.
T = pc.tensor(pc.balanced_block(p, 3), pc.balanced_block(p, 3))
print("V~_3 (x) V~_3 =", pc.decompose(T).as_dict())

# Slash cohomology sees only the non-free part.
U, planted = pc.random_complex(p, random.Random(7))
print("random complex, planted blocks:", sorted(planted))
for k in range(p - 1):
    print(f"  H_/{k}:", pc.slash_cohomology(U, k))
print("  four-term sequences exact:", not pc.exactness_defects(U))

# The symbol lives in O_p = Z[q]/(Phi_p(q^2)); free blocks contribute 0.
res = pc.symbol(U)
print("symbol:", res.value.pretty(), "(certified)" if res.verified else "(uncertified)")
print("free block symbol:", pc.symbol(pc.block(p, p - 1)).value.pretty())
