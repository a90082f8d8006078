"""KLR algebras of type A2: which differentials see the quantum Serre relation."""

from __future__ import annotations

from pdgcat import klr

q = klr.Quiver.A2()
p = 5

# The mod-p equations coming from the Serre relation have two solutions.
print("QSR solutions at p=5:", sorted(klr.qsr_parameter_solve(p)))
print("QSR solutions at p=3:", sorted(klr.qsr_parameter_solve(3)))

# The Cartan matrix of weight 2i+j, read off the crossing filtration.
for params in [(1, 1, 1, 1), (1, 1, 0, 1)]:
    mat, _ = klr.cartan_matrix_A2(klr.DiffParams.a2(*params), p, route="filtration")
    print(f"Cartan matrix at {params}:")
    for row in mat:
        print("   ", [e.pretty() for e in row])
    print("    [2] row2 = row1 + row3:", klr.row_identity(mat))

# At p = 3 the extra solution (0,0,2,2) of the mod-p equations fails the identity in O_3.
mat, _ = klr.cartan_matrix_A2(klr.DiffParams.a2(0, 0, 2, 2), 3, route="filtration")
print("p=3, (0,0,2,2): row identity", klr.row_identity(mat))

# The idempotent framework: x y + x' y' = 1_iji and the ten conditions at d_1.
x, y, xp, yp = klr.serre_quadruple(p)
print("x y + x' y' == 1_iji:", x * y + xp * yp == klr.klr_idempotent(q, p, "iji"))
for params in [(1, 1, 1, 1), (1, 1, 0, 0)]:
    rep = klr.serre_idempotent_check(x, y, xp, yp, klr.DiffParams.a2(*params))
    failed = [k for k, v in rep.conditions.items() if not v]
    print(f"Serre conditions at {params}:", "all pass" if rep.ok else f"failing {failed}")
