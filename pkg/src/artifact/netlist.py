"""Electrical networks over Q(x) as affine Lagrangian relations.

Each terminal is a doubled wire whose X grading is the potential and whose Z
grading is the current. A two-terminal component is a relation from its
bottom terminal to its top terminal; a node is the junction spider that
makes all potentials equal and balances the currents.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
import numpy as np

from . import affine as af
from . import linrel as lr
from .affine import AffineGradedRelation, AffineRelation
from .errors import DanglingNode, EmptyBehaviour, NegativeValue, ParseError
from .field import QX, RatFun, parse_ratfun
from .linalg import join, kernel_array
from .symplectic import GradedRelation, T

KINDS = ("R", "L", "C", "V", "I", "W")


def _check_value(v: RatFun):
    if any(c < 0 for c in v.numerator) or any(c < 0 for c in v.denominator):
        raise NegativeValue(f"component value {v} has a negative coefficient")


def _graded_strands(xs: AffineRelation, zs: AffineRelation) -> AffineGradedRelation:
    """Put an X-strand diagram and a Z-strand diagram side by side."""
    if (xs.dom, xs.cod) != (zs.dom, zs.cod):
        raise ValueError("strands must have the same arity")
    n, m = xs.dom, xs.cod
    if xs.is_empty or zs.is_empty:
        return AffineGradedRelation.empty(QX, n, m)
    xl = [T] + [("x", "a", i) for i in range(n)] + [("x", "b", j) for j in range(m)]
    zl = [T] + [("z", "a", i) for i in range(n)] + [("z", "b", j) for j in range(m)]
    keep = [T] + xl[1:] + zl[1:]
    out = join(QX, [(xs.hom(), xl), (zs.hom(), zl)], keep)
    return AffineGradedRelation(QX, n, m, out)


def _ohmic(a: RatFun) -> AffineGradedRelation:
    """X node fed by the scalar a of the Z copy: v_top = v_bottom + a * i."""
    rows = [[1, 1, 0, 0], [0, a, 1, 1]]
    return af.graded(GradedRelation.from_rows(QX, 1, 1, rows))


def resistor(a) -> AffineGradedRelation:
    a = QX.raw(a)
    _check_value(a)
    return _ohmic(a)


def inductor(a) -> AffineGradedRelation:
    a = QX.raw(a)
    _check_value(a)
    return _ohmic(a * RatFun.x())


def capacitor(a) -> AffineGradedRelation:
    """Scalar -a*x, exactly as displayed for the capacitor (not 1/(a*x))."""
    a = QX.raw(a)
    _check_value(a)
    return _ohmic(-(a * RatFun.x()))


def voltage_source(a) -> AffineGradedRelation:
    """Potential shifted by a*x across the component, current passed through."""
    a = QX.raw(a)
    _check_value(a)
    return af.affine_shift(a * RatFun.x(), 0, "X", 1, QX)


def current_source(a) -> AffineGradedRelation:
    """Both terminal currents pinned to a; potentials free."""
    a = QX.raw(a)
    _check_value(a)
    return current_source_chain(a)[0]


def wire() -> AffineGradedRelation:
    return af.graded(GradedRelation.from_rows(QX, 1, 1, [[1, 1, 0, 0], [0, 0, 1, 1]]))


def _junction(legs_in: int, legs_out: int) -> np.ndarray:
    """Homogeneous span of the junction on [t, X in, X out, Z in, Z out]."""
    w = legs_in + legs_out
    rows = []
    for j in range(1, w):
        row = [0] * (1 + 2 * w)
        row[1] = 1
        row[1 + j] = -1
        rows.append(row)
    if w:
        rows.append([0] + [0] * w + [1] * legs_in + [-1] * legs_out)
    else:
        return QX.array([[1]])
    return kernel_array(QX, QX.array(rows))


def junction(legs_in: int, legs_out: int) -> AffineGradedRelation:
    """Equal potentials on every leg, incoming currents sum to outgoing."""
    return AffineGradedRelation(QX, legs_in, legs_out, _junction(legs_in, legs_out))


# ---------------------------------------------------------------------------
# the chain of equal diagrams for the source that pins the current


def current_source_chain(a) -> list[AffineGradedRelation]:
    """The five displayed diagrams for the current-pinning source, evaluated.

    Every diagram keeps the potential strand and the current strand apart, so
    each is built as an X-strand relation beside a Z-strand relation, bottom
    terminal to top terminal.
    """
    f = QX
    a = f.raw(a)
    u = af.ungraded
    comp, tens = af.affine_compose_all, af.affine_tensor
    one = af.one_state(f)
    free, delete = u(lr.z_spider(f, 0, 1)), u(lr.z_spider(f, 1, 0))
    wire_ = u(lr.identity(f, 1))
    sc = lambda v: u(lr.scalar(f, v))
    co = lambda v: u(lr.co_scalar(f, v))
    phase_one_effect = af.x_phase(f, 1, 0, 1)      # in + 1 = 0
    phase_a_state = af.x_phase(f, 0, 1, a)
    loose = comp(delete, free)

    # Z node on bottom, top and the 1-state scaled by a
    z1 = comp(tens(wire_, comp(one, sc(a))), u(lr.z_spider(f, 2, 1)))
    # 1-state into a Z node, co-scaled by a below and scaled by a above
    node_one = comp(tens(wire_, one), u(lr.z_spider(f, 2, 1)))
    z2 = comp(co(a), node_one, sc(a))
    # bottom: co-scalar a, antipode, phase-1 effect; top: phase-a state
    z3 = comp(co(a), u(lr.antipode(f)), phase_one_effect, phase_a_state)
    # potentials: scalar -a into delete, free state co-scaled by a;
    # currents: co-scalar -a into the phase-1 effect, 1-state scaled by a
    x4 = comp(sc(-a), delete, free, co(a))
    z4 = comp(co(-a), phase_one_effect, one, sc(a))
    # as above, with the effects spelled out through 2->0 spiders
    x5 = comp(tens(sc(-a), free), u(lr.z_spider(f, 2, 0)), free, co(a))
    z5 = comp(tens(co(-a), one), u(lr.x_spider(f, 2, 0)), one, sc(a))
    return [_graded_strands(loose, z1), _graded_strands(loose, z2), _graded_strands(loose, z3),
            _graded_strands(x4, z4), _graded_strands(x5, z5)]


# ---------------------------------------------------------------------------
# netlists


@dataclass(frozen=True)
class Component:
    kind: str
    value: RatFun | None
    bottom: str
    top: str

    def semantics(self) -> AffineGradedRelation:
        return component_semantics(self)


@dataclass
class Netlist:
    nodes: list[str] = dc_field(default_factory=list)
    components: list[Component] = dc_field(default_factory=list)
    ports: list[str] = dc_field(default_factory=list)


def component_semantics(c: Component) -> AffineGradedRelation:
    table = {"R": resistor, "L": inductor, "C": capacitor, "V": voltage_source, "I": current_source}
    if c.kind == "W":
        return wire()
    if c.kind not in table:
        raise ValueError(f"unknown component kind {c.kind!r}")
    return table[c.kind](c.value)


def analyze(net: Netlist, inputs: int | None = None) -> AffineGradedRelation:
    """Terminal behaviour of the network on its ports.

    The first ``inputs`` ports form the domain (potential, current flowing
    in), the rest the codomain (potential, current flowing out). By default
    one input port, or none if there is a single port.
    """
    if inputs is None:
        inputs = 0 if len(net.ports) <= 1 else 1
    if not 0 <= inputs <= len(net.ports):
        raise ValueError(f"{inputs} input ports out of {len(net.ports)}")
    known = set(net.nodes)
    for c in net.components:
        for nd in (c.bottom, c.top):
            if nd not in known:
                raise DanglingNode(f"component {c.kind} uses undeclared node {nd!r}")
    for p in net.ports:
        if p not in known:
            raise DanglingNode(f"port on undeclared node {p!r}")

    parts = []
    legs: dict[str, tuple[list, list]] = {nd: ([], []) for nd in net.nodes}
    for k, c in enumerate(net.components):
        rel = component_semantics(c)
        if rel.is_empty:
            raise EmptyBehaviour(f"component {k} has empty behaviour")
        bx, tx, bz, tz = ("x", "b", k), ("x", "t", k), ("z", "b", k), ("z", "t", k)
        parts.append((rel.hom(), [T, bx, tx, bz, tz]))
        legs[c.top][0].append((tx, tz))      # current arrives at the node
        legs[c.bottom][1].append((bx, bz))   # current leaves towards the component
    for nd, (ins, outs) in legs.items():
        if not ins and not outs:
            raise DanglingNode(f"node {nd!r} has no component terminals")
    dom_labels, cod_labels = [], []
    for i, nd in enumerate(net.ports):
        if i < inputs:
            lab = (("x", "in", i), ("z", "in", i))
            legs[nd][0].append(lab)
            dom_labels.append(lab)
        else:
            lab = (("x", "out", i), ("z", "out", i))
            legs[nd][1].append(lab)
            cod_labels.append(lab)
    for nd, (ins, outs) in legs.items():
        span = _junction(len(ins), len(outs))
        labels = [T] + [l[0] for l in ins] + [l[0] for l in outs] + [l[1] for l in ins] + [l[1] for l in outs]
        parts.append((span, labels))
    keep = [T] + [l[0] for l in dom_labels] + [l[0] for l in cod_labels] \
        + [l[1] for l in dom_labels] + [l[1] for l in cod_labels]
    out = AffineGradedRelation(QX, len(dom_labels), len(cod_labels), join(QX, parts, keep))
    if out.is_empty:
        raise EmptyBehaviour("the network constraints are inconsistent")
    return out


# ---------------------------------------------------------------------------
# text format


def parse_value(token: str, line: int, col: int) -> RatFun:
    try:
        return parse_ratfun(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad component value {token!r}: {exc}", line, col) from None


def parse_netlist(text: str) -> Netlist:
    net = Netlist()
    header = False
    for ln, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = body.split()
        if not toks:
            continue
        col = lambda i: body.index(toks[i]) + 1
        if not header:
            if toks != ["net", "v1"]:
                raise ParseError("expected header 'net v1'", ln, col(0))
            header = True
            continue
        head = toks[0]
        if head == "node":
            for t in toks[1:]:
                if t in net.nodes:
                    raise ParseError(f"node {t!r} declared twice", ln, col(toks.index(t)))
                net.nodes.append(t)
        elif head == "PORT":
            if len(toks) != 2:
                raise ParseError("PORT takes one node", ln, col(0))
            net.ports.append(toks[1])
        elif head == "W":
            if len(toks) != 3:
                raise ParseError("W takes two nodes", ln, col(0))
            net.components.append(Component("W", None, toks[1], toks[2]))
        elif head in KINDS:
            if len(toks) != 4:
                raise ParseError(f"{head} takes two nodes and a value", ln, col(0))
            value = parse_value(toks[3], ln, col(3))
            try:
                _check_value(value)
            except NegativeValue as exc:
                raise ParseError(str(exc), ln, col(3)) from None
            net.components.append(Component(head, value, toks[1], toks[2]))
        else:
            raise ParseError(f"unknown netlist line {head!r}", ln, col(0))
    if not header:
        raise ParseError("empty netlist", 1, 1)
    return net


def format_netlist(net: Netlist) -> str:
    lines = ["net v1"]
    if net.nodes:
        lines.append("node " + " ".join(net.nodes))
    for c in net.components:
        val = "" if c.value is None else " " + str(c.value)
        lines.append(f"{c.kind} {c.bottom} {c.top}{val}")
    lines += [f"PORT {p}" for p in net.ports]
    return "\n".join(lines) + "\n"


def series_parallel_values(a, b) -> tuple[RatFun, RatFun]:
    """Closed forms a + b and ab / (a + b) used by the Kirchhoff oracle."""
    a, b = QX.raw(a), QX.raw(b)
    return a + b, (a * b) / (a + b)


__all__ = ["Component", "Netlist", "analyze", "component_semantics", "resistor", "inductor",
           "capacitor", "voltage_source", "current_source", "current_source_chain", "wire",
           "junction", "parse_netlist", "format_netlist"]
