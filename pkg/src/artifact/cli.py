"""Command-line front end.

Exit status: 0 success, 1 a verification failed, 2 bad input (parse or I/O).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import affine as af
from . import linrel as lr
from . import symplectic as sp
from . import netlist as nl
from . import stabilizer as st
from .affine import AffineGradedRelation, AffineRelation
from .errors import ArtifactError, CorrespondenceViolation, EulerIdentityFailed, ParseError
from .field import QX, parse_field
from .symplectic import GradedRelation
from .textio import dumps, dumps_purified, format_circuit, loads, parse_circuit

OK, FAILED, BAD_INPUT = 0, 1, 2


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None


def _emit(text: str, out: str | None):
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise ParseError(f"{out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def _check_field(path: str, field, field_spec: str | None) -> None:
    if field_spec is not None and field != parse_field(field_spec):
        raise ParseError(f"{path}: declared field {field.spec()} differs from --field {field_spec}")


def _load(path: str, field_spec: str | None):
    r = loads(_read(path))
    _check_field(path, r.field, field_spec)
    return r


def _load_circuit(path: str, field_spec: str | None) -> sp.Circuit:
    c = parse_circuit(_read(path))
    _check_field(path, c.field, field_spec)
    return c


def _lagrangian_input(path: str, field_spec: str | None) -> GradedRelation:
    r = _load(path, field_spec)
    if isinstance(r, AffineGradedRelation):
        if r.is_empty:
            raise ParseError(f"{path}: empty relation has no linear part")
        r = r.linear
    if not isinstance(r, GradedRelation):
        raise ParseError(f"{path}: expected a graded relation file")
    return r


# ---------------------------------------------------------------------------
# verbs


def cmd_compose(args) -> int:
    r, s = _load(args.first, args.field), _load(args.second, args.field)
    affine = isinstance(r, (AffineRelation, AffineGradedRelation)) or \
        isinstance(s, (AffineRelation, AffineGradedRelation))
    graded = isinstance(r, (GradedRelation, AffineGradedRelation))
    if graded != isinstance(s, (GradedRelation, AffineGradedRelation)):
        raise ParseError("cannot compose a graded relation with an ungraded one")
    if affine:
        cls = AffineGradedRelation if graded else AffineRelation
        lift = lambda v: v if isinstance(v, cls) else cls.lift(v)
        out = af.affine_compose(lift(r), lift(s))
    elif graded:
        out = sp.compose(r, s)
    else:
        out = lr.compose(r, s)
    _emit(dumps(out), args.out)
    return OK


def cmd_check(args) -> int:
    r = _lagrangian_input(args.relation, args.field)
    iso, co, lag = sp.is_isotropic(r), sp.is_coisotropic(r), sp.is_lagrangian(r)
    yn = lambda b: "yes" if b else "no"
    _emit(f"isotropic: {yn(iso)}\ncoisotropic: {yn(co)}\nlagrangian: {yn(lag)}\n", args.out)
    return OK if lag else FAILED


def cmd_synth(args) -> int:
    r = _lagrangian_input(args.relation, args.field)
    state = sp.curry(r) if r.dom else r
    _emit(format_circuit(sp.synthesize(state)), args.out)
    return OK


def cmd_purify(args) -> int:
    r = _lagrangian_input(args.relation, args.field)
    pure, discards = sp.purify(r)
    _emit(dumps_purified(pure, discards), args.out)
    return OK


def cmd_sim(args) -> int:
    c = _load_circuit(args.circuit, args.field)
    _emit(dumps(af.evaluate(c)), args.out)
    return OK


def _random_circuit(rng: np.random.Generator, field, wires: int, length: int) -> sp.Circuit:
    p = field.p
    ops = [sp.ZeroPrep(i) for i in range(wires)]
    live = set(range(wires))
    for _ in range(length):
        w = int(rng.integers(wires))
        a = int(rng.integers(1, p))
        if w not in live:
            ops.append(sp.ZeroPrep(w))
            live.add(w)
            continue
        others = sorted(live - {w})
        k = int(rng.integers(9 if others else 8))
        if k == 8:
            ops.append(sp.C(a, w, others[int(rng.integers(len(others)))]))
        elif k == 7:
            ops.append(sp.Post(w))
            live.discard(w)
        else:
            ops.append([sp.F(w), sp.Finv(w), sp.S(a, w), sp.V(a, w), sp.XShift(a, w),
                        sp.ZShift(a, w), sp.F(w), sp.S(a, w)][k])
    return sp.Circuit(field, wires, tuple(ops))


def cmd_verify(args) -> int:
    circuits = []
    for path in args.circuits:
        circuits.append((Path(path).name, _load_circuit(path, args.field)))
    if not circuits:
        field = parse_field(args.field or "Fp 3")
        rng = np.random.default_rng(args.seed)
        for i in range(args.count):
            wires = int(rng.integers(1, args.wires + 1))
            circuits.append((f"random{i}", _random_circuit(rng, field, wires, args.length)))
    verdicts, failed = [], False
    for name, c in circuits:
        try:
            verdicts.append(st.verify_h_functor(c, name, eps=args.eps))
        except CorrespondenceViolation as exc:
            failed = True
            verdicts.append(st.Verdict(name, -1, 0, False, str(exc)))
    text = st.report(verdicts) + "\n" + ("correspondence: FAILED\n" if failed else "correspondence: ok\n")
    _emit(text, args.out)
    return FAILED if failed else OK


def cmd_net(args) -> int:
    net = nl.parse_netlist(_read(args.netlist))
    _check_field(args.netlist, QX, args.field)
    _emit(dumps(nl.analyze(net, args.inputs)), args.out)
    return OK


def cmd_axioms(args) -> int:
    field = parse_field(args.field or "Fp 3")
    lines, ok = [], True
    for name, good in af.aih_axiom_check(field).items():
        lines.append(f"{name}: {'ok' if good else 'FAILED'}")
        ok &= good
    try:
        sp.euler_fourier(field)
        lines.append("euler S1 V1 S1 = F: ok")
    except EulerIdentityFailed:
        lines.append("euler S1 V1 S1 = F: FAILED")
        ok = False
    _emit("\n".join(lines) + "\n", args.out)
    return OK if ok else FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="artifact", description="Lagrangian relations toolkit")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="field declaration, e.g. 'Fp 5' or 'Qx'")
    common.add_argument("--out", help="write the result here instead of stdout")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("compose", parents=[common], help="compose two relation files")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("check", parents=[common], help="isotropic / Lagrangian verdict")
    p.add_argument("relation")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("synth", parents=[common], help="circuit for a Lagrangian state")
    p.add_argument("relation")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("purify", parents=[common], help="pure part and discard list")
    p.add_argument("relation")
    p.set_defaults(func=cmd_purify)

    p = sub.add_parser("sim", parents=[common], help="affine relation of a circuit")
    p.add_argument("circuit")
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("verify", parents=[common], help="dense stabilizer cross-check")
    p.add_argument("circuits", nargs="*", help="circuit files; a random batch if none")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--eps", type=float, default=1e-9)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--wires", type=int, default=2)
    p.add_argument("--length", type=int, default=8)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("net", parents=[common], help="terminal behaviour of a netlist")
    p.add_argument("netlist")
    p.add_argument("--inputs", type=int, default=None, help="number of domain ports")
    p.set_defaults(func=cmd_net)

    p = sub.add_parser("axioms", parents=[common], help="affine equations and Euler identity")
    p.set_defaults(func=cmd_axioms)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    try:
        return args.func(args)
    except (ArtifactError, ValueError) as exc:
        print(f"artifact {args.verb}: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
