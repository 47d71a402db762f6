"""Shared generators and brute-force oracles for the test suite."""

from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import settings

from artifact import linrel as lr
from artifact import symplectic as sp
from artifact.field import prime_field

settings.register_profile("default", max_examples=60, deadline=None, derandomize=True)
settings.load_profile("default")


# ---------------------------------------------------------------------------
# random objects


def random_circuit(rng, field, n, length=10, kinds="FSVCDZ", inputs=True):
    """Random circuit on n wires from the given op letters.

    Letters: F (F or Finv), S, V, C, D (discard), Z (ZeroPrep), P (post),
    X / Y (X / Z shifts). Wires start as inputs unless ``inputs`` is false.
    """
    p = field.p
    ops = [] if inputs else [sp.ZeroPrep(i) for i in range(n)]
    live = set(range(n))
    for _ in range(length if n else 0):
        w = int(rng.integers(n))
        a = int(rng.integers(p))
        if w not in live:
            if "Z" in kinds:
                ops.append(sp.ZeroPrep(w))
                live.add(w)
            continue
        k = kinds[int(rng.integers(len(kinds)))]
        others = sorted(live - {w})
        if k == "F":
            ops.append(sp.F(w) if rng.integers(2) else sp.Finv(w))
        elif k == "S":
            ops.append(sp.S(a, w))
        elif k == "V":
            ops.append(sp.V(a, w))
        elif k == "C" and others:
            ops.append(sp.C(a, w, others[int(rng.integers(len(others)))]))
        elif k == "D":
            ops.append(sp.Discard(a, w))
            live.discard(w)
        elif k == "P":
            ops.append(sp.Post(w))
            live.discard(w)
        elif k == "X":
            ops.append(sp.XShift(a, w))
        elif k == "Y":
            ops.append(sp.ZShift(a, w))
    return sp.Circuit(field, n, tuple(ops))


def random_state(rng, field, n, length=12):
    """A random Lagrangian state reached by pure gates from |0...0>."""
    c = random_circuit(rng, field, n, length, kinds="FSVC", inputs=False)
    return sp.evaluate(c)


def random_lagrangian(rng, field, n, m, length=12):
    """A random (possibly impure) Lagrangian relation n -> m."""
    return sp.uncurry(random_state(rng, field, n + m, length), n)


def random_linrel(rng, field, n, m, rank=None):
    w = n + m
    k = int(rng.integers(0, w + 1)) if rank is None else rank
    rows = rng.integers(0, field.p, size=(k, w)).tolist()
    return lr.LinearRelation.from_rows(field, n, m, rows)


# ---------------------------------------------------------------------------
# brute-force oracles over small prime fields


def vectors(p, w):
    return itertools.product(range(p), repeat=w)


def span_points(rows, p, w):
    """Set of all vectors in the row span, by enumeration."""
    rows = [np.array(r, dtype=np.int64) for r in rows]
    out = set()
    for cs in itertools.product(range(p), repeat=len(rows)):
        v = np.zeros(w, dtype=np.int64)
        for c, r in zip(cs, rows):
            v = v + c * r
        out.add(tuple(int(x) for x in v % p))
    return out


def relation_points(r):
    return set(lr.points(r))


def brute_compose(r, s, p):
    """{(a, c) : (a, b) in r and (b, c) in s for some b}."""
    rp, spts = relation_points(r), relation_points(s)
    by_mid = {}
    for v in spts:
        by_mid.setdefault(v[:s.dom], []).append(v[s.dom:])
    out = set()
    for v in rp:
        for c in by_mid.get(v[r.dom:], []):
            out.add(v[:r.dom] + c)
    return out


def brute_symplectic_dual(rows, p, n, m):
    """All u with omega_cod(v, u) - omega_dom(v, u) = 0 for every v."""
    w = 2 * (n + m)
    pts = span_points(rows, p, w)

    def form(a, b):
        xa, za = a[: n + m], a[n + m:]
        xb, zb = b[: n + m], b[n + m:]
        tot = 0
        for i in range(n + m):
            sign = -1 if i < n else 1
            tot += sign * (xa[i] * zb[i] - za[i] * xb[i])
        return tot % p

    return {u for u in vectors(p, w) if all(form(v, u) == 0 for v in pts)}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=[2, 3, 5, 7])
def field(request):
    return prime_field(request.param)


# ---------------------------------------------------------------------------
# acceptance summary: one PASS/FAIL line per criterion


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import TITLES

    outcomes = {}
    for key in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(key, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in nodeid or rep.when not in ("call", "setup"):
                continue
            k = int(nodeid.split("test_criterion_")[1][:2])
            if key != "passed" or k not in outcomes:
                outcomes[k] = ("PASS" if key == "passed" else "FAIL", rep.duration)
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(TITLES):
        verdict, secs = outcomes.get(k, ("NOT RUN", 0.0))
        terminalreporter.write_line(f"{verdict} criterion {k:2d}: {TITLES[k]} [{secs:.1f} s]")
