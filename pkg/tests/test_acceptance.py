"""Acceptance criteria, one test each.

Run with pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from artifact import affine as af  # noqa: E402
from artifact import linrel as lr  # noqa: E402
from artifact import netlist as nl  # noqa: E402
from artifact import stabilizer as stab  # noqa: E402
from artifact import symplectic as sp  # noqa: E402
from artifact.field import QX, RatFun, parse_ratfun, prime_field  # noqa: E402

from conftest import random_circuit, random_lagrangian, random_linrel, random_state  # noqa: E402

TITLES = {
    1: "Lagrangian closure of random circuits (p in 2,3,5,7; 500 each; < 30 s)",
    2: "graph-state synthesis round trip (p in 3,5,7; 200 each)",
    3: "Euler identity S1;V1;S1 = F (p in 2,3,5,7,11)",
    4: "orthocomplement involution and covariant functoriality (200 pairs per field)",
    5: "discards generated by a single cap (p in 3,5,7)",
    6: "purification reassembles exactly (p in 3,5; 100 each)",
    7: "stabilizer correspondence (p = 3, n <= 2, 100 circuits, eps 1e-9; < 60 s)",
    8: "affine equations and phased-spider fusion (p in 3,5,7)",
    9: "electrical laws over Q(x)",
    10: "gate right action equals column operations (100 states per field)",
}


# ---------------------------------------------------------------------------
# 1


def test_criterion_01_lagrangian_closure():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    for p in (2, 3, 5, 7):
        f = prime_field(p)
        for _ in range(500):
            n = int(rng.integers(1, 5))
            r = sp.evaluate(random_circuit(rng, f, n, 12, kinds="FSVCDZ"))
            assert sp.symplectic_dual(r) == r
            assert r.dim == r.dom + r.cod
    elapsed = time.perf_counter() - start
    assert elapsed < 30, f"took {elapsed:.1f} s"


# ---------------------------------------------------------------------------
# 2


def test_criterion_02_synthesis_round_trip():
    rng = np.random.default_rng(102)
    for p in (3, 5, 7):
        f = prime_field(p)
        for _ in range(200):
            s = random_state(rng, f, int(rng.integers(1, 5)), 16)
            zp, _ = sp.graph_form(s)
            assert (zp.data == zp.data.T).all()
            assert sp.evaluate(sp.synthesize(s)) == s


# ---------------------------------------------------------------------------
# 3


def test_criterion_03_euler_identity():
    for p in (2, 3, 5, 7, 11):
        f = prime_field(p)
        lhs = sp.compose_all(sp.s_from_discard(1, f), sp.v_from_discard(1, f), sp.s_from_discard(1, f))
        assert lhs == sp.gate(sp.F(0), 1, f)


# ---------------------------------------------------------------------------
# 4


def _random_qx_linrel(rng, n, m):
    k = int(rng.integers(0, n + m + 1))
    rows = [[QX.random(rng, degree=1, size=2) for _ in range(n + m)] for _ in range(k)]
    return lr.LinearRelation.from_rows(QX, n, m, rows)


def test_criterion_04_orthocomplement_functor():
    rng = np.random.default_rng(104)
    perp = lr.orthocomplement
    for f in (prime_field(2), prime_field(3), prime_field(5), prime_field(7), QX):
        for _ in range(200):
            a, b, c = (int(v) for v in rng.integers(0, 3, size=3))
            if f is QX:
                r, s = _random_qx_linrel(rng, a, b), _random_qx_linrel(rng, b, c)
            else:
                r, s = random_linrel(rng, f, a, b), random_linrel(rng, f, b, c)
            assert perp(perp(r)) == r
            assert perp(lr.compose(r, s)) == lr.compose(perp(r), perp(s))


# ---------------------------------------------------------------------------
# 5


def test_criterion_05_discards_from_cap():
    for p in (3, 5, 7):
        f = prime_field(p)
        for n in range(p):
            assert sp.discard_from_cap(n, f) == sp.discard(n, f)


# ---------------------------------------------------------------------------
# 6


def test_criterion_06_purification():
    rng = np.random.default_rng(106)
    for p in (3, 5):
        f = prime_field(p)
        impure = 0
        for k in range(100):
            if k % 2:
                r = random_lagrangian(rng, f, int(rng.integers(0, 3)), int(rng.integers(1, 3)))
            else:
                r = sp.evaluate(random_circuit(rng, f, int(rng.integers(1, 4)), 12, kinds="FSVCDZ"))
            pur = sp.purify(r)
            impure += bool(pur.discards)
            assert sp.reassemble(pur, f) == r
        assert impure > 0


# ---------------------------------------------------------------------------
# 7


def test_criterion_07_stabilizer_correspondence():
    rng = np.random.default_rng(107)
    f = prime_field(3)
    start = time.perf_counter()
    # even: closed circuits from |0..0>, odd: open wires bent round by cups
    circuits = [random_circuit(rng, f, int(rng.integers(1, 3)), 8, kinds="FSVCZPXY", inputs=bool(k % 2))
                for k in range(100)]
    rels, dense = [], []
    for i, c in enumerate(circuits):
        v = stab.verify_h_functor(c, f"c{i}", eps=1e-9)   # support, phases, Empty <=> zero
        assert v.ok
        rel, d = stab.relation_state(c), stab.simulate_dense(c)
        assert rel.is_empty == d.is_zero
        rels.append(rel)
        dense.append(d)
    for i, j in itertools.combinations(range(len(circuits)), 2):
        if rels[i].cod != rels[j].cod:
            continue
        assert (rels[i] == rels[j]) == dense[i].same_ray(dense[j], eps=1e-9), (i, j)
    elapsed = time.perf_counter() - start
    assert elapsed < 60, f"took {elapsed:.1f} s"


# ---------------------------------------------------------------------------
# 8


def test_criterion_08_affine_equations():
    rng = np.random.default_rng(108)
    for p in (3, 5, 7):
        f = prime_field(p)
        assert all(af.aih_axiom_check(f).values())
        phases = list(itertools.product(range(p), repeat=4))
        if p > 3:
            phases = [phases[int(i)] for i in rng.choice(len(phases), 40, replace=False)]
        for n1, m1, n2, m2 in phases:
            for colour in "ZX":
                lhs = af.affine_compose(af.phased_spider(colour, (n1, m1), 2, 1, f),
                                        af.phased_spider(colour, (n2, m2), 1, 2, f))
                assert lhs == af.phased_spider(colour, (n1 + n2, m1 + m2), 2, 2, f)


# ---------------------------------------------------------------------------
# 9


def _ohmic_rows(scale):
    return af.graded(sp.GradedRelation.from_rows(QX, 1, 1, [[1, 1, 0, 0], [0, scale, 1, 1]]))


def test_criterion_09_electrical_laws():
    x = RatFun.x()
    pairs = [("3", "2*x"), ("1", "1"), ("x+1", "2"), ("1/x", "x^2")]
    for sa, sb in pairs:
        a, b = parse_ratfun(sa), parse_ratfun(sb)
        series = nl.parse_netlist(f"net v1\nnode p m q\nR p m {a}\nR m q {b}\nPORT p\nPORT q\n")
        assert nl.analyze(series) == nl.resistor(a + b)
        parallel = nl.parse_netlist(f"net v1\nnode p q\nR p q {a}\nR p q {b}\nPORT p\nPORT q\n")
        assert nl.analyze(parallel) == nl.resistor(a * b / (a + b))
        assert nl.resistor(a) == _ohmic_rows(a)
        assert nl.inductor(a) == _ohmic_rows(a * x)
        assert nl.capacitor(a) == _ohmic_rows(-(a * x))
        chain = nl.current_source_chain(a)
        assert all(d == chain[0] for d in chain)


# ---------------------------------------------------------------------------
# 10


def _bullet(field, state, op):
    """Column operations on a spanning matrix (x_1..x_n | z_1..z_n)."""
    g = state.space.data.copy()
    n = state.cod
    neg = field.neg
    if op.kind == "F":
        i = op.wires[0]
        xi, zi = g[:, i].copy(), g[:, n + i].copy()
        g[:, i], g[:, n + i] = neg(zi), xi
    elif op.kind == "S":
        i = op.wires[0]
        g[:, n + i] = g[:, n + i] + op.param * g[:, i]
    elif op.kind == "C":
        i, j = op.wires
        g[:, j] = g[:, j] - op.param * g[:, i]
        g[:, n + i] = g[:, n + i] + op.param * g[:, n + j]
    if field.is_prime:
        g = field.reduce(g)
    return sp.GradedRelation._from_array(field, 0, n, g)


def _qx_state(rng, n):
    ops = [sp.ZeroPrep(i) for i in range(n)]
    for _ in range(8):
        w = int(rng.integers(n))
        a = QX.random(rng, degree=1, size=2)
        k = int(rng.integers(3))
        if k == 0:
            ops.append(sp.F(w))
        elif k == 1:
            ops.append(sp.S(a, w))
        elif n > 1:
            ops.append(sp.C(a, w, (w + 1) % n))
    return sp.evaluate(sp.Circuit(QX, n, tuple(ops)))


def test_criterion_10_gate_column_operations():
    rng = np.random.default_rng(110)
    for f in (prime_field(2), prime_field(3), prime_field(5), prime_field(7), QX):
        for _ in range(100):
            n = int(rng.integers(1, 4))
            s = _qx_state(rng, n) if f is QX else random_state(rng, f, n)
            w = int(rng.integers(n))
            a = QX.random(rng, degree=1, size=2) if f is QX else int(rng.integers(1, f.p))
            ops = [sp.F(w), sp.S(a, w)]
            if n > 1:
                ops.append(sp.C(a, w, (w + 1 + int(rng.integers(n - 1))) % n))
            for op in ops:
                op = sp.Circuit(f, n, (op,)).ops[0]    # parameters reduced into the field
                assert sp.apply_gate(s, op) == _bullet(f, s, op) == sp.column_action(s, op)


# ---------------------------------------------------------------------------


def main() -> int:
    failed = 0
    for k in sorted(TITLES):
        fn = next(v for name, v in globals().items() if name.startswith(f"test_criterion_{k:02d}_"))
        start = time.perf_counter()
        try:
            fn()
            verdict = "PASS"
        except AssertionError as exc:
            verdict = f"FAIL ({exc})" if str(exc) else "FAIL"
            failed += 1
        print(f"{verdict.split()[0]} criterion {k:2d}: {TITLES[k]} [{time.perf_counter() - start:.1f} s]"
              + (f" {verdict[5:]}" if verdict != "PASS" else ""))
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
