"""Divided powers of small quantum sl2 against the nilHecke symbols."""

from __future__ import annotations

from pdgcat import uqgroup as uq

p = 5
E = [uq.divided_power(p, n) for n in range(p)]

print("E E =", E[1] * E[1])
print("E^(2) E^(3) =", E[2] * E[3])
print("Delta(E^(2)) =", uq.u_comul(E[2]))

# The tensor square needs a twist; q^-2 per unit of |x2||y1| is the one that
# makes Delta multiplicative for this comultiplication.
lhs = uq.u_comul(E[1] * E[1])
for twist in (1, uq.TWIST):
    rhs = uq.twisted_tensor_mul(uq.u_comul(E[1]), uq.u_comul(E[1]), twist=twist)
    print(f"twist q^{twist}: Delta(E)^2 == Delta(E E) is {rhs == lhs}")

print("bialgebra checks:", uq.verify_bialgebra(p).as_dict())

# Twisted restriction and induction of nilHecke modules give the same numbers.
for n, m in [(1, 1), (2, 1), (2, 2)]:
    rep = uq.categorification_crosscheck(p, n, m)
    print(f"(n, m) = ({n}, {m}):", rep["restriction"], "vs", rep["comultiplication"], "|",
          rep["induction"], "vs", rep["multiplication"])
