import numpy as np
import pytest
from hypothesis import given, strategies as st

from artifact import affine as af
from artifact import linrel as lr
from artifact import symplectic as sp
from artifact.affine import AffineGradedRelation, AffineRelation
from artifact.errors import BadParameter, ParseError, UnknownGate
from artifact.field import QX, RatFun, prime_field
from artifact.textio import (dumps, dumps_purified, format_circuit, loads, loads_purified,
                             parse_circuit)

from conftest import random_circuit, random_lagrangian, random_linrel

seeds = st.integers(0, 2 ** 32 - 1)


@given(seeds, st.sampled_from([2, 3, 5, 7]))
def test_relation_round_trips(seed, p):
    rng = np.random.default_rng(seed)
    f = prime_field(p)
    n, m = (int(v) for v in rng.integers(0, 3, size=2))
    lin = random_linrel(rng, f, n, m)
    graded = random_lagrangian(rng, f, n, m)
    aff = AffineRelation.coset(rng.integers(0, p, size=n + m).tolist(), lin)
    agr = af.evaluate(random_circuit(rng, f, 2, 10, kinds="FSVCZPXY"))
    for r in (lin, graded):
        text = dumps(r)
        assert loads(text) == r
        assert dumps(loads(text)) == text
    for r in (aff, agr):
        text = dumps(r)
        assert loads(text, affine=True) == r
        assert dumps(loads(text, affine=True)) == text


def test_qx_round_trip():
    x = RatFun.x()
    r = lr.LinearRelation.from_rows(QX, 1, 1, [[1, x / (x + 1)]])
    assert loads(dumps(r)) == r


def test_relation_file_layout():
    f = prime_field(5)
    r = lr.scalar(f, 3)
    assert dumps(r) == "linrel v1\nfield Fp 5\ndom 1\ncod 1\nrows 1\n1 3\n"
    s = sp.gate(sp.F(0), 1, f)
    assert dumps(s).splitlines()[:3] == ["graded v1", "field Fp 5", "wires 1 1"]
    e = AffineGradedRelation.empty(f, 0, 1)
    assert dumps(e) == "graded v1\nfield Fp 5\nwires 0 1\nempty\n"
    assert loads(dumps(e)) == e


def test_comments_and_blank_lines():
    text = "# a relation\nlinrel v1\n\nfield Fp 3  # small\ndom 1\ncod 1\nrows 1\n1 2\n"
    assert loads(text) == lr.scalar(prime_field(3), 2)


@pytest.mark.parametrize("text,line", [
    ("relation v2\n", 1),
    ("linrel v1\nfield Fp 4\n", 2),
    ("linrel v1\nfield Fp 3\ndom x\n", 3),
    ("linrel v1\nfield Fp 3\ndom 1\ncod 1\nrows 2\n1 2\n", 6),
    ("linrel v1\nfield Fp 3\ndom 1\ncod 1\nrows 1\n1 2 0\n", 6),
    ("linrel v1\nfield Fp 5\ndom 1\ncod 1\nrows 1\n2 1\n", 6),             # not rref
    ("linrel v1\nfield Fp 5\ndom 1\ncod 1\noffset 1 1\nrows 1\n1 1\n", 5),  # offset not canonical
    ("linrel v1\nfield Fp 5\ndom 1\ncod 1\nrows 0\nextra\n", 6),
])
def test_relation_parse_errors(text, line):
    with pytest.raises(ParseError) as exc:
        loads(text)
    assert exc.value.line == line


def test_purified_round_trip():
    f = prime_field(5)
    rng = np.random.default_rng(3)
    r = random_lagrangian(rng, f, 1, 2)
    pure, discards = sp.purify(r)
    text = dumps_purified(pure, discards)
    back = loads_purified(text)
    assert back[0] == pure and [(w, int(a)) for w, a in back[1]] == [(w, int(a)) for w, a in discards]


# ---------------------------------------------------------------------------
# circuit language


def test_circuit_examples():
    c = parse_circuit("circuit p=3 wires=1\nZERO 0\nS 2 0")
    assert [str(op.kind) for op in c.ops] == ["ZERO", "S"] and c.ops[1].param == 2
    c = parse_circuit("circuit p=5 wires=2\nC 3 0 1")
    assert c.ops[0].kind == "C" and c.ops[0].wires == (0, 1) and c.ops[0].param == 3


def test_all_op_names_parse():
    text = ("circuit p=7 wires=3  # header\nZERO 0\nF 0\nFinv 1\nS 3 0\nV 6 1\nC 2 0 2\n"
            "XSHIFT 1 2\nZSHIFT 5 0\nD 4 1\nPOST 2\n")
    c = parse_circuit(text)
    assert [op.kind for op in c.ops] == ["ZERO", "F", "Finv", "S", "V", "C", "XSHIFT", "ZSHIFT",
                                         "D", "POST"]
    assert parse_circuit(format_circuit(c)) == c


@given(seeds)
def test_circuit_round_trip(seed):
    rng = np.random.default_rng(seed)
    f = prime_field(5)
    c = random_circuit(rng, f, 3, 12, kinds="FSVCDZPXY")
    assert parse_circuit(format_circuit(c)) == c


def test_parameters_are_reduced():
    c = parse_circuit("circuit p=3 wires=1\nS -1 0\nV 7 0\n")
    assert [op.param for op in c.ops] == [2, 1]


@pytest.mark.parametrize("text,err,line,col", [
    ("circuit p=3 wires=1\nS x 0", BadParameter, 2, 3),
    ("circuit p=3 wires=1\nH 0", UnknownGate, 2, 1),
    ("circuit p=3 wires=1\n  S 1 5", BadParameter, 2, 7),
    ("circuit p=3 wires=2\nC 1 1 1", BadParameter, 2, 1),
    ("circuit p=4 wires=1\n", BadParameter, 1, 9),
    ("circuit p=3\n", ParseError, 1, 1),
    ("circ p=3 wires=1\n", ParseError, 1, 1),
    ("circuit p=3 wires=1\nF\n", ParseError, 2, 1),
    ("", ParseError, 1, 1),
])
def test_circuit_parse_errors(text, err, line, col):
    with pytest.raises(err) as exc:
        parse_circuit(text)
    assert (exc.value.line, exc.value.col) == (line, col)
