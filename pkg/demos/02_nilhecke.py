"""The nilHecke algebra with its differentials d_a: where it is acyclic and where it is not."""

from __future__ import annotations

from pdgcat import nilhecke as nh
from pdgcat.oring import project

p = 3

# Straightening: dots move left past crossings.
print("d1 x1 =", nh.nh_normalize("d1 x1", p, 2))
print("d1 d1 =", nh.nh_normalize("d1 d1", p, 2))

# d_a(delta_1) = a - (a+1) x1 delta_1 + (a-1) x2 delta_1
for a in range(p):
    print(f"d_{a}(delta_1) =", nh.nh_derive(nh.nh_delta(p, 2, 1), a))

# With three strands in characteristic 3 the algebra is acyclic at a = 1:
# y = d_1(delta_1 delta_2) satisfies d_1(y) = 1.
y = nh.nh_derive(nh.nh_normalize("d1 d2", p, 3), 1)
print("y =", y)
print("d_1(y) == 1:", nh.nh_derive(y, 1) == nh.nh_one(p, 3))
print("search agrees:", nh.nh_find_contraction(3, 1, p) is not None)

# Below p strands no contraction exists; the symbol of NH_2 tells the values of a apart.
p = 5
for a in range(p):
    s = nh.nh_symbol(2, a, p, (-2, 40)).value
    print(f"[NH_2, d_{a}] = {s.pretty():<22} F_p image {project(s, 'F_p')}")
