"""Line-oriented text formats: relation files and the circuit DSL.

Relation files::

    linrel v1            # or: graded v1
    field Fp 7           # or: field Qx
    dom 2                # graded files use one line: wires 2 1
    cod 1
    offset 0 0 1         # optional, affine relations only
    rows 2
    1 0 3
    0 1 4

An affine relation with no points has the single body line ``empty`` in
place of offset and rows. Rows must already be in rref and the offset must
be the canonical coset representative; anything else is rejected.
"""

from __future__ import annotations

from typing import Union

import numpy as np

from . import symplectic as sp
from .affine import AffineGradedRelation, AffineRelation
from .errors import BadParameter, ParseError, UnknownGate
from .field import Field, parse_field, prime_field
from .linalg import Matrix, rref_array
from .linrel import LinearRelation
from .symplectic import Circuit, GradedRelation

Relation = Union[LinearRelation, GradedRelation, AffineRelation, AffineGradedRelation]


# ---------------------------------------------------------------------------
# relation files


def _render_rows(field: Field, a: np.ndarray) -> list[str]:
    return [" ".join(field.render(v) for v in row) for row in a]


def dumps(r: Relation) -> str:
    """Canonical text of a relation; a zero offset is left out."""
    graded = isinstance(r, (GradedRelation, AffineGradedRelation))
    f = r.field
    lines = ["graded v1" if graded else "linrel v1", f"field {f.spec()}"]
    if graded:
        lines.append(f"wires {r.dom} {r.cod}")
    else:
        lines += [f"dom {r.dom}", f"cod {r.cod}"]
    if isinstance(r, (AffineRelation, AffineGradedRelation)):
        if r.is_empty:
            lines.append("empty")
            return "\n".join(lines) + "\n"
        if bool(np.any(f.nonzero(r.offset))):
            lines.append("offset " + " ".join(f.render(v) for v in r.offset))
        space = r.linear.space
    else:
        space = r.space
    lines.append(f"rows {space.rows}")
    lines += _render_rows(f, space.data)
    return "\n".join(lines) + "\n"


class _Lines:
    """Cursor over significant lines, keeping 1-based line numbers."""

    def __init__(self, text: str):
        self.items = []
        for n, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0].rstrip()
            if body.strip():
                self.items.append((n, body))
        self.pos = 0

    def next(self, what: str):
        if self.pos >= len(self.items):
            last = self.items[-1][0] if self.items else 1
            raise ParseError(f"unexpected end of file, expected {what}", last)
        item = self.items[self.pos]
        self.pos += 1
        return item

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else None

    def done(self) -> bool:
        return self.pos >= len(self.items)


def _col(body: str, tok: str) -> int:
    return body.find(tok) + 1


def _keyword(lines: _Lines, key: str, count: int) -> tuple[int, str, list[str]]:
    n, body = lines.next(f"'{key}'")
    toks = body.split()
    if toks[0] != key:
        raise ParseError(f"expected '{key}', got {toks[0]!r}", n, _col(body, toks[0]))
    if len(toks) != count + 1:
        raise ParseError(f"'{key}' takes {count} value(s)", n, 1)
    return n, body, toks[1:]


def _count(tok: str, n: int, body: str) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(f"expected a count, got {tok!r}", n, _col(body, tok)) from None
    if v < 0:
        raise ParseError(f"negative count {v}", n, _col(body, tok))
    return v


def _parse_vector(field: Field, toks: list[str], n: int, body: str, width: int) -> list:
    if len(toks) != width:
        raise ParseError(f"expected {width} entries, got {len(toks)}", n, 1)
    out = []
    for t in toks:
        try:
            out.append(field.parse(t))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad field element {t!r}: {exc}", n, _col(body, t)) from None
    return out


def loads(text: str, affine: bool = False) -> Relation:
    """Parse a relation file.

    Returns the linear type unless the file has an offset or empty body, or
    ``affine`` is set, in which case the affine type is returned.
    """
    lines = _Lines(text)
    n, body = lines.next("header")
    header = body.split()
    if header not in (["linrel", "v1"], ["graded", "v1"]):
        raise ParseError(f"unknown header {body.strip()!r}", n, 1)
    graded = header[0] == "graded"
    n, body = lines.next("'field'")
    ftoks = body.split()
    if ftoks[0] != "field":
        raise ParseError("expected 'field'", n, 1)
    try:
        field = parse_field(" ".join(ftoks[1:]))
    except (ValueError, KeyError) as exc:
        raise ParseError(f"bad field: {exc}", n, _col(body, ftoks[1] if len(ftoks) > 1 else "field")) from None
    if graded:
        n, body, (a, b) = _keyword(lines, "wires", 2)
        dom, cod = _count(a, n, body), _count(b, n, body)
        width = 2 * (dom + cod)
    else:
        n, body, (a,) = _keyword(lines, "dom", 1)
        dom = _count(a, n, body)
        n, body, (b,) = _keyword(lines, "cod", 1)
        cod = _count(b, n, body)
        width = dom + cod
    aff_cls = AffineGradedRelation if graded else AffineRelation

    nxt = lines.peek()
    if nxt is not None and nxt[1].split() == ["empty"]:
        lines.next("empty")
        if not lines.done():
            n, _ = lines.next("end")
            raise ParseError("unexpected content after 'empty'", n, 1)
        return aff_cls.empty(field, dom, cod)
    offset = None
    if nxt is not None and nxt[1].split()[0] == "offset":
        n, body = lines.next("offset")
        offset = _parse_vector(field, body.split()[1:], n, body, width)
        off_line = n
    n, body, (k,) = _keyword(lines, "rows", 1)
    k = _count(k, n, body)
    rows = []
    for _ in range(k):
        n, body = lines.next("matrix row")
        rows.append(_parse_vector(field, body.split(), n, body, width))
    if not lines.done():
        n, _ = lines.next("end")
        raise ParseError("unexpected content after the rows", n, 1)

    data = field.array(rows) if rows else field.zeros((0, width))
    red, piv = rref_array(field, data)
    if red.shape != data.shape or not bool(np.all(red == data)):
        raise ParseError("rows are not in reduced row echelon form", n if rows else 1)
    if graded:
        lin = GradedRelation(dom, cod, Matrix(field, data), canonical=True)
    else:
        lin = LinearRelation(dom, cod, Matrix(field, data), canonical=True)
    if offset is None:
        return aff_cls.lift(lin) if affine else lin
    out = aff_cls.coset(offset, lin)
    if not bool(np.all(out.offset == field.array([offset])[0])):
        raise ParseError("offset is not the canonical coset representative", off_line)
    return out


def dumps_purified(pure: LinearRelation, discards) -> str:
    f = pure.field
    text = dumps(pure)
    lines = [f"discards {len(discards)}"] + [f"{w} {f.render(a)}" for w, a in discards]
    return text + "\n".join(lines) + "\n"


def loads_purified(text: str):
    """Inverse of ``dumps_purified``: (pure relation, [(wire, scalar)])."""
    head, sep, tail = text.partition("\ndiscards ")
    if not sep:
        raise ParseError("missing 'discards' section")
    pure = loads(head + "\n")
    tail_lines = tail.splitlines()
    k = int(tail_lines[0])
    discards = []
    for line in tail_lines[1:1 + k]:
        w, a = line.split()
        discards.append((int(w), pure.field.parse(a)))
    return pure, discards


# ---------------------------------------------------------------------------
# circuit DSL

_ARITY = {  # (takes a parameter, number of wires)
    "F": (False, 1), "Finv": (False, 1), "S": (True, 1), "V": (True, 1), "C": (True, 2),
    "D": (True, 1), "XSHIFT": (True, 1), "ZSHIFT": (True, 1), "ZERO": (False, 1), "POST": (False, 1),
}


def parse_circuit(text: str) -> Circuit:
    """Parse the circuit language: a header line then one operation per line."""
    lines = _Lines(text)
    if lines.done():
        raise ParseError("empty circuit file", 1, 1)
    n, body = lines.next("header")
    toks = body.split()
    params = {}
    if not toks or toks[0] != "circuit":
        raise ParseError("expected 'circuit p=<prime> wires=<n>'", n, 1)
    for t in toks[1:]:
        key, eq, val = t.partition("=")
        if not eq or key not in ("p", "wires"):
            raise ParseError(f"bad header entry {t!r}", n, _col(body, t))
        try:
            params[key] = int(val)
        except ValueError:
            raise BadParameter(f"{key} must be an integer, got {val!r}", n, _col(body, t)) from None
    if set(params) != {"p", "wires"}:
        raise ParseError("header needs both p= and wires=", n, 1)
    try:
        field = prime_field(params["p"])
    except ValueError as exc:
        raise BadParameter(str(exc), n, _col(body, "p=")) from None
    wires = params["wires"]
    if wires < 0:
        raise BadParameter("negative wire count", n, _col(body, "wires="))

    ops = []
    while not lines.done():
        n, body = lines.next("operation")
        toks = body.split()
        name = toks[0]
        if name not in _ARITY:
            raise UnknownGate(f"unknown gate {name!r}", n, _col(body, name))
        has_param, nwires = _ARITY[name]
        expect = 1 + int(has_param) + nwires
        if len(toks) != expect:
            raise ParseError(f"{name} takes {expect - 1} argument(s), got {len(toks) - 1}", n,
                             _col(body, name))
        args = toks[1:]
        pos = 0
        param = None
        search_from = len(body) - len(body.lstrip()) + len(name)

        def col_of(tok):
            nonlocal search_from
            i = body.find(tok, search_from)
            search_from = i + len(tok)
            return i + 1

        if has_param:
            tok = args[0]
            c = col_of(tok)
            try:
                param = int(tok) % field.p
            except ValueError:
                raise BadParameter(f"parameter must be an integer, got {tok!r}", n, c) from None
            pos = 1
        idx = []
        for tok in args[pos:]:
            c = col_of(tok)
            try:
                w = int(tok)
            except ValueError:
                raise BadParameter(f"wire index must be an integer, got {tok!r}", n, c) from None
            if not 0 <= w < wires:
                raise BadParameter(f"wire {w} outside 0..{wires - 1}", n, c)
            idx.append(w)
        if len(set(idx)) != len(idx):
            raise BadParameter(f"{name} needs distinct wires", n, _col(body, name))
        ops.append(sp.Op(name, tuple(idx), param))
    return Circuit(field, wires, tuple(ops))


def format_circuit(c: Circuit) -> str:
    if not c.field.is_prime:
        raise ValueError("the circuit language only covers prime fields")
    lines = [f"circuit p={c.field.p} wires={c.wires}"]
    for op in c.ops:
        if op.kind == "PURE":
            raise ValueError("pure sub-relations have no circuit-language form")
        lines.append(str(op) if op.param is None else
                     " ".join([op.kind, c.field.render(op.param)] + [str(w) for w in op.wires]))
    return "\n".join(lines) + "\n"
