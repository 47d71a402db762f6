"""Dense qudit stabilizer oracle and its cross-check against the affine
Lagrangian semantics of circuits.

Conventions. A point (x, z) of a doubled wire corresponds to the Weyl
operator X^z Z^x: the Z grading is the boost exponent, the X grading the
shift exponent. The zero state span{(1, 0)} is then |0>, stabilized by the
powers of Z. Gates map to Clifford unitaries U with U W(u) U^dag ~ W(u M)
for the gate's right-action matrix M.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np
from sympy import isprime

from . import affine as af
from . import symplectic as sp
from .errors import (CircuitTooLarge, CorrespondenceViolation, EvenOrNonPrime, NonStabilizerGate,
                     StateNotStabilizer)

EPS = 1e-9
MAX_DIM = 3 ** 5        # dense vector length
MAX_WEYL = 3 ** 8       # Weyl candidates scanned by stabilizer_group


def _check_p(p: int):
    if p % 2 == 0 or not isprime(p):
        raise EvenOrNonPrime(f"stabilizer oracle needs an odd prime, got {p}")


@lru_cache(maxsize=None)
def _single(p: int):
    w = np.exp(2j * np.pi / p)
    a = np.arange(p)
    boost = np.roll(np.eye(p, dtype=complex), 1, axis=0)       # |a> -> |a+1>
    shift = np.diag(w ** a)
    fourier = w ** np.outer(a, a) / np.sqrt(p)                 # sum w^{ab} |b><a|
    phase = np.diag(np.exp(1j * np.pi * a * (a + p) / p))
    return {"X": boost, "Z": shift, "F": fourier, "S": phase}


def _controlled(p: int) -> np.ndarray:
    """|a, b> -> |a, a + b>; the first qudit is the control."""
    out = np.zeros((p * p, p * p), dtype=complex)
    for a in range(p):
        for b in range(p):
            out[a * p + (a + b) % p, a * p + b] = 1
    return out


def clifford_matrix(g: str, p: int, n: int = 1, wires: Sequence[int] = (0,)) -> np.ndarray:
    """One of X, Z, F, S (one wire) or C (control, target) embedded in n qudits."""
    _check_p(p)
    if p ** n > MAX_DIM:
        raise CircuitTooLarge(f"{p}^{n} amplitudes")
    if g == "C":
        local = _controlled(p)
    elif g in ("X", "Z", "F", "S"):
        local = _single(p)[g]
    else:
        raise ValueError(f"unknown Clifford generator {g!r}")
    wires = list(wires)
    if len(wires) != (2 if g == "C" else 1) or len(set(wires)) != len(wires):
        raise ValueError("wrong number of wires")
    return _embed(local, p, n, wires)


def _embed(local: np.ndarray, p: int, n: int, wires: list[int]) -> np.ndarray:
    k = len(wires)
    rest = [i for i in range(n) if i not in wires]
    perm = wires + rest
    big = np.kron(local, np.eye(p ** (n - k)))
    t = big.reshape([p] * (2 * n))
    inv = np.argsort(perm)
    t = t.transpose(list(inv) + [n + i for i in inv])
    return t.reshape(p ** n, p ** n)


# ---------------------------------------------------------------------------
# states and Weyl operators


@dataclass(frozen=True)
class WeylOperator:
    """phase * X^a Z^b on n qudits."""

    a: tuple[int, ...]
    b: tuple[int, ...]
    phase: complex = 1

    def matrix(self, p: int) -> np.ndarray:
        return self.phase * weyl_matrix(p, self.a, self.b)


@dataclass
class DenseState:
    p: int
    n: int
    amplitudes: np.ndarray

    @property
    def is_zero(self) -> bool:
        return float(np.linalg.norm(self.amplitudes)) < EPS

    def normalized(self) -> "DenseState":
        nrm = np.linalg.norm(self.amplitudes)
        return DenseState(self.p, self.n, self.amplitudes / nrm if nrm >= EPS else self.amplitudes)

    def same_ray(self, other: "DenseState", eps: float = EPS) -> bool:
        """Equal up to a nonzero global scalar (both zero counts as equal)."""
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        u, v = self.normalized().amplitudes, other.normalized().amplitudes
        return abs(abs(np.vdot(u, v)) - 1) < eps


def weyl_matrix(p: int, a: Sequence[int], b: Sequence[int]) -> np.ndarray:
    one = _single(p)
    out = np.eye(1, dtype=complex)
    for ai, bi in zip(a, b):
        out = np.kron(out, np.linalg.matrix_power(one["X"], ai % p) @ np.linalg.matrix_power(one["Z"], bi % p))
    return out


def stabilizer_group(s: DenseState, eps: float = EPS) -> list[WeylOperator]:
    """All lambda X^a Z^b with lambda X^a Z^b |psi> = |psi>."""
    p, n = s.p, s.n
    if p ** (2 * n) > MAX_WEYL:
        raise CircuitTooLarge(f"{p}^{2 * n} Weyl candidates")
    psi = s.normalized().amplitudes.reshape([p] * n)
    if n == 0:  # a nonzero scalar is fixed by the identity alone
        return [WeylOperator((), (), 1.0)]
    out = []
    # <psi| X^a Z^b |psi> = sum_j conj(psi[j+a]) psi[j] w^{b.j}: one inverse DFT per a
    for a in itertools.product(range(p), repeat=n):
        g = np.conj(np.roll(psi, [-v for v in a], axis=tuple(range(n)))) * psi
        cs = np.fft.ifftn(g) * p ** n
        for b in zip(*np.nonzero(np.abs(np.abs(cs) - 1) < eps)):
            out.append(WeylOperator(tuple(a), tuple(int(v) for v in b), 1 / cs[b]))
    if len(out) != p ** n:
        raise StateNotStabilizer(f"stabilizer group has {len(out)} elements, expected {p ** n}")
    return out


# ---------------------------------------------------------------------------
# dense simulation


def _power(m: np.ndarray, k: int, p: int) -> np.ndarray:
    return np.linalg.matrix_power(m, k % p)


def gate_unitary(op: sp.Op, p: int) -> np.ndarray:
    """Dense image of a relation gate on its own wires (first wire first)."""
    one = _single(p)
    fd = one["F"].conj().T
    a = int(op.param) % p if op.param is not None else 0
    k = op.kind
    if k == "F":
        return fd
    if k == "Finv":
        return one["F"]
    if k == "S":
        return one["F"] @ _power(one["S"], -a, p) @ fd
    if k == "V":
        return _power(one["S"], -a, p)
    if k == "XSHIFT":
        return _power(one["Z"], a, p)
    if k == "ZSHIFT":
        return _power(one["X"], a, p)
    if k == "C":
        # relation C_a on (i, j): z_i += a z_j, x_j -= a x_i; control is wire j
        swap = np.eye(p * p).reshape(p, p, p, p).transpose(1, 0, 2, 3).reshape(p * p, p * p)
        return swap @ np.linalg.matrix_power(_controlled(p), a) @ swap
    raise NonStabilizerGate(f"{k} has no unitary stabilizer image")


def simulate_dense(c: sp.Circuit) -> DenseState:
    """Apply the circuit to |0> preparations; inputs are bent round with sum |j, j>.

    The output qudits are [one reference per input wire, surviving wires],
    both in increasing wire order, which is the layout of the curried relation.
    """
    p = c.field.p if c.field.is_prime else 0
    _check_p(p)
    inputs = c.inputs()
    live: list = [("w", w) for w in inputs]
    refs = [("r", w) for w in inputs]
    axes = refs + live
    if p ** len(axes) > MAX_DIM:
        raise CircuitTooLarge(f"{p}^{len(axes)} amplitudes")
    # one cup sum_j |j, j> per input, reordered to [refs..., wires...]
    t = np.ones((), dtype=complex)
    for _ in inputs:
        t = np.multiply.outer(t, np.eye(p, dtype=complex))
    k = len(inputs)
    t = t.transpose([2 * i for i in range(k)] + [2 * i + 1 for i in range(k)])
    axes = list(axes)
    peak = len(axes)
    for op in c.ops:
        if op.kind == "ZERO":
            ket = np.zeros(p, dtype=complex)
            ket[0] = 1
            t = np.multiply.outer(t, ket)
            axes.append(("w", op.wires[0]))
            peak = max(peak, len(axes))
            if p ** peak > MAX_DIM:
                raise CircuitTooLarge(f"{p}^{peak} amplitudes")
            continue
        pos = [axes.index(("w", w)) for w in op.wires]
        if op.kind == "POST":
            t = np.take(t, 0, axis=pos[0])
            axes.pop(pos[0])
            continue
        u = gate_unitary(op, p)
        q = len(pos)
        u = u.reshape([p] * (2 * q))
        t = np.tensordot(u, t, axes=(list(range(q, 2 * q)), pos))
        t = np.moveaxis(t, list(range(q)), pos)
    order = [axes.index(r) for r in refs] + sorted(
        (axes.index(a) for a in axes if a[0] == "w"), key=lambda i: axes[i][1])
    t = np.transpose(t, order) if order else t
    return DenseState(p, len(order), np.asarray(t, dtype=complex).reshape(-1))


# ---------------------------------------------------------------------------
# the correspondence


def relation_state(c: sp.Circuit) -> af.AffineGradedRelation:
    """Affine semantics of the circuit, curried to a state."""
    return af.affine_curry(af.evaluate(c))


def support_of(rel: af.AffineGradedRelation) -> set[tuple]:
    """Weyl vectors (a, b) = (z, x) of the linear part."""
    n = rel.cod
    out = set()
    for pt in af.AffineGradedRelation.lift(rel.linear).points():
        x, z = pt[:n], pt[n:]
        out.add(tuple(z) + tuple(x))
    return out


@dataclass
class Verdict:
    circuit_id: str
    dim: int
    support: int
    ok: bool
    detail: str = ""
    phase_sign: int | None = None

    def row(self) -> str:
        verdict = "ok" if self.ok else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"{self.circuit_id:<12} {self.dim:>4} {self.support:>8}  {verdict}{extra}"


def _fit_phase(p: int, rel: af.AffineGradedRelation, group: list[WeylOperator],
               eps: float = EPS) -> int | None:
    """Find s in {1, -1} with lambda(u) = w^{s * omega(c, u)} in symmetric Weyl normalisation.

    Returns None if neither sign fits.
    """
    n = rel.cod
    w = np.exp(2j * np.pi / p)
    half = pow(2, -1, p)
    c = [int(v) for v in rel.offset]
    cx, cz = c[:n], c[n:]
    for s in (1, -1):
        good = True
        for g in group:
            a, b = g.a, g.b  # a = z, b = x
            sym = sum(ai * bi for ai, bi in zip(a, b)) * half % p
            # eigenvalue of the symmetric operator w^{ab/2} X^a Z^b
            lam = w ** sym / g.phase
            form = (sum(x * zc for x, zc in zip(b, cz)) - sum(z * xc for z, xc in zip(a, cx))) % p
            if abs(lam - w ** (s * form)) > eps:
                good = False
                break
        if good:
            return s
    return None


def verify_h_functor(c: sp.Circuit, circuit_id: str = "c", eps: float = EPS) -> Verdict:
    """Compare the phase-space semantics of c with the dense simulation.

    Raises CorrespondenceViolation on the first disagreement.
    """
    rel = relation_state(c)
    dense = simulate_dense(c)
    if rel.is_empty or dense.is_zero:
        if rel.is_empty and dense.is_zero:
            return Verdict(circuit_id, -1, 0, True, "empty")
        raise CorrespondenceViolation(
            f"{circuit_id}: relation {'empty' if rel.is_empty else 'nonempty'}, "
            f"dense {'zero' if dense.is_zero else 'nonzero'}")
    group = stabilizer_group(dense, eps)
    dense_support = {tuple(g.a) + tuple(g.b) for g in group}
    rel_support = support_of(rel)
    if dense_support != rel_support:
        bad = sorted(dense_support ^ rel_support)[0]
        raise CorrespondenceViolation(f"{circuit_id}: supports differ at {bad}", weyl=bad)
    sign = _fit_phase(c.field.p, rel, group, eps)
    if sign is None:
        raise CorrespondenceViolation(f"{circuit_id}: no consistent offset-to-phase map")
    return Verdict(circuit_id, rel.linear.dim, len(group), True, phase_sign=sign)


def report(verdicts: Sequence[Verdict]) -> str:
    head = f"{'circuit':<12} {'dim':>4} {'support':>8}  verdict"
    return "\n".join([head] + [v.row() for v in verdicts])


def cap_commutation(p: int, a: int = 1, eps: float = EPS) -> dict[str, bool]:
    """Dense counterparts of the Weyl/cup identities on eta = sum |j, j>."""
    one = _single(p)
    eta = np.zeros(p * p, dtype=complex)
    for j in range(p):
        eta[j * p + j] = 1
    eye = np.eye(p)
    za = _power(one["Z"], a, p)
    xa = _power(one["X"], a, p)
    xma = _power(one["X"], -a, p)
    return {
        "Z_slides": bool(np.allclose(np.kron(za, eye) @ eta, np.kron(eye, za) @ eta, atol=eps)),
        "X_slides_inverted": bool(np.allclose(np.kron(xa, eye) @ eta, np.kron(eye, xma) @ eta, atol=eps)),
    }
