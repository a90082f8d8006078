"""The eleven acceptance criteria, each timed against its budget.

Run with `pytest tests/test_acceptance.py -v`, or as a script, to get one
PASS/FAIL line per criterion.
"""

from __future__ import annotations

import itertools
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import seed  # noqa: E402
from oracles import (  # noqa: E402
    a1xa1_rhom_formula,
    balanced_product_rule,
    cartan_closed_forms,
    jordan_blocks,
    nh2_symbol_formula,
    nh_iterate_delta1,
    slash_by_definition,
)

from pdgcat import klr, nilhecke as nh, pcomplex as pc, toymatrix as tm, uqgroup as uq  # noqa: E402
from pdgcat.base_arith import Poly  # noqa: E402
from pdgcat.oring import OElem, project  # noqa: E402

RESULTS: dict = {}


def ac1():
    for p in (3, 5):
        for n in range(1, 5):
            for a in range(p):
                if not nh.nh_check_pnilpotent(n, a, p):
                    return False, f"d_{a}^{p} nonzero on NH_{n}"
    p = 5
    x1, x2 = Poly.var(p, 2, 1), Poly.var(p, 2, 2)
    d = nh.nh_delta(p, 2, 1)
    for a in range(p):
        cube = nh.nh_derive(nh.nh_derive(nh.nh_derive(d, a), a), a)
        if cube != nh_iterate_delta1(p, a, 3):
            return False, f"cube of d_{a} on delta_1 differs from the closed form"
        c = (a + 1) * a * (a - 1)
        flipped = nh.nh_poly(((x1 - x2) ** 3).scale(c)) * d + nh.nh_poly(((x1 - x2) ** 2).scale(c))
        if c % p and cube == flipped:
            return False, "sign of the cubic term not resolved"
    return True, "d^p = 0 on generators; cube matches the general-k closed form at k = 3"


def ac2():
    for case in [(3, 1, 3), (3, 2, 3), (5, 1, 5)]:
        y = nh.nh_find_contraction(*case)
        if y is None or nh.nh_derive(y, case[1]) != nh.nh_one(case[2], case[0]):
            return False, f"no verified witness at {case}"
    for case in [(2, 1, 3), (2, 0, 3), (4, 1, 5)]:
        if nh.nh_find_contraction(*case) is not None:
            return False, f"unexpected witness at {case}"
    return True, "witnesses at (3,1,3) (3,2,3) (5,1,5); none at (2,1,3) (2,0,3) (4,1,5)"


def ac3():
    p = 5
    for a in range(p):
        res = nh.nh_symbol(2, a, p, (-2, 40))
        if not res.verified or res.value != nh2_symbol_formula(p, a):
            return False, f"symbol mismatch at a = {a}: {res.value.pretty()}"
        fp = project(res.value, "F_p")
        if fp != (5 - a * a) % p:
            return False, f"F_p projection {fp} at a = {a}"
        if (fp == 4) != (a in (1, p - 1)):
            return False, f"value 4 at a = {a}"
    return True, "symbol formula and F_p projection 5 - a^2 for all a"


def ac4():
    p = 5
    for i in range(p):
        for j in range(p):
            T = pc.tensor(pc.balanced_block(p, i), pc.balanced_block(p, j))
            if pc.decompose(T).as_dict() != balanced_product_rule(p, i, j):
                return False, f"tensor rule fails at ({i}, {j})"
    return True, "25 products match the balanced rule"


def ac5():
    for p in (3, 5):
        rng = random.Random(seed() + 1000 * p)
        for _ in range(200):
            U, _ = pc.random_complex(p, rng)
            if pc.exactness_defects(U):
                return False, f"four-term identity fails at p = {p}"
            if pc.decompose(U).as_dict() != jordan_blocks(U):
                return False, f"decompose differs from the oracle at p = {p}"
            for k in range(p - 1):
                if pc.slash_cohomology(U, k) != slash_by_definition(U, k):
                    return False, f"slash cohomology differs from its definition at p = {p}"
    return True, "200 random complexes per p in {3, 5}"


def ac6():
    got5, got7 = klr.qsr_parameter_solve(5), klr.qsr_parameter_solve(7)
    ok = got5 == {(1, 1, 1, 1), (4, 4, 0, 0)} and got7 == {(1, 1, 1, 1), (6, 6, 0, 0)}
    return ok, f"p=5 {sorted(got5)}, p=7 {sorted(got7)}"


def ac7():
    p = 5
    mat, flags = klr.cartan_matrix_A2(klr.DiffParams.a2(1, 1, 1, 1), p, (-12, 60))
    closed = cartan_closed_forms(p, 1, 1, 1, 1)
    for u in range(3):
        for v in range(3):
            if not flags[u][v]:
                return False, f"entry ({u + 1}, {v + 1}) not certified"
            if mat[u][v] != closed[(u + 1, v + 1)]:
                return False, f"entry ({u + 1}, {v + 1}) = {mat[u][v].pretty()}"
    if not klr.row_identity(mat):
        return False, "row identity fails at (1,1,1,1)"
    bad, bad_flags = klr.cartan_matrix_A2(klr.DiffParams.a2(1, 1, 0, 1), p, (-12, 60))
    if not all(all(r) for r in bad_flags):
        return False, "entries at (1,1,0,1) not certified"
    if klr.row_identity(bad):
        return False, "row identity holds at (1,1,0,1)"
    return True, "nine closed forms and [2] row2 = row1 + row3; fails at (1,1,0,1)"


def ac8():
    p = 5
    plus = klr.serre_idempotent_check(*klr.serre_quadruple(p), klr.DiffParams.a2(1, 1, 1, 1))
    minus = klr.serre_idempotent_check(*klr.serre_quadruple(p, image=True), klr.DiffParams.a2(-1, -1, 0, 0))
    if not plus.ok or not minus.ok:
        failed = [k for k, v in {**plus.conditions, **minus.conditions}.items() if not v]
        return False, f"failed conditions {failed}"
    syms = klr.serre_symbols(p)
    if not (syms["holds"] and syms["verified"]):
        return False, f"[P_iji] = {syms['P_iji'].pretty()} vs {syms['P_i2j'].pretty()} + {syms['P_ji2'].pretty()}"
    return True, f"10 + 10 conditions; [P_iji] = {syms['P_iji'].pretty()}"


def ac9():
    p = 5
    for u, v in itertools.product(range(p), repeat=2):
        res = klr.rhom_A1xA1(v, u, p)
        if not res.verified or res.value != a1xa1_rhom_formula(p, u, v):
            return False, f"mismatch at (u, v) = ({u}, {v})"
        if (res.value == OElem.one(p)) != (u == v == 0):
            return False, f"value 1 at (u, v) = ({u}, {v})"
    return True, "25 parameter pairs; trivial only at u = v = 0"


def ac10():
    for p in (3, 5, 7):
        rep = uq.verify_bialgebra(p)
        if not rep.ok:
            return False, f"bialgebra fails at p = {p}: {rep.failures[:3]}"
    for p in (3, 5):
        for n in range(p):
            for m in range(p - n):
                if not uq.categorification_crosscheck(p, n, m)["ok"]:
                    return False, f"crosscheck fails at p = {p}, (n, m) = ({n}, {m})"
    return True, "bialgebra at p = 3, 5, 7; crosschecks at p = 3, 5"


def ac11():
    for p in (3, 5, 7):
        tm.contraction_witness_matrix(p)
    for p in (3, 5):
        for n in range(1, p + 1):
            if not tm.corner_ring_check(n, p):
                return False, f"corner ring fails at n = {n}, p = {p}"
            blocks = pc.decompose(tm.column_module(n, p)).as_dict()
            if blocks != {(n, 0): 1}:
                return False, f"column module at n = {n}, p = {p}: {blocks}"
    return True, "witnesses, corner rings and column modules V_(n-1)"


CRITERIA = [
    (1, "derivation nilpotency", ac1, 10),
    (2, "NH_p acyclicity", ac2, 60),
    (3, "NH_2 symbol", ac3, 60),
    (4, "tensor decomposition", ac4, 5),
    (5, "cohomology exactness", ac5, 60),
    (6, "QSR solver", ac6, 5),
    (7, "A2 Cartan matrix", ac7, 600),
    (8, "categorified Serre", ac8, 300),
    (9, "A1 x A1", ac9, 60),
    (10, "twisted bialgebra", ac10, 300),
    (11, "toy matrix model", ac11, 10),
]


def run(num, name, fn, budget):
    start = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # report, then fail
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if ok and elapsed > budget:
        ok, detail = False, f"{detail} (over budget)"
    line = f"AC{num:<2} {'PASS' if ok else 'FAIL'}  {name:<24} {elapsed:7.2f}s / {budget}s  {detail}"
    RESULTS[num] = line
    return ok, line


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    reporter = request.config.pluginmanager.getplugin("terminalreporter")
    if reporter is None:
        return
    reporter.write_line("")
    for num in sorted(RESULTS):
        reporter.write_line(RESULTS[num])


@pytest.mark.parametrize("num,name,fn,budget", CRITERIA, ids=[f"AC{c[0]}" for c in CRITERIA])
def test_criterion(num, name, fn, budget):
    ok, line = run(num, name, fn, budget)
    print(line)
    assert ok, line


if __name__ == "__main__":
    results = [run(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
