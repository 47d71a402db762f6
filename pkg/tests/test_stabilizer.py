import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artifact import stabilizer as stab
from artifact import symplectic as sp
from artifact.errors import CircuitTooLarge, EvenOrNonPrime, NonStabilizerGate, StateNotStabilizer
from artifact.field import prime_field

from conftest import random_circuit

seeds = st.integers(0, 2 ** 32 - 1)


def close(a, b):
    return np.allclose(a, b, atol=1e-9)


def proportional(a, b):
    i = np.unravel_index(np.argmax(abs(b)), b.shape)
    lam = a[i] / b[i]
    return abs(abs(lam) - 1) < 1e-9 and close(a, lam * b)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_weyl_commutation(p):
    one = stab._single(p)
    x, z = one["X"], one["Z"]
    w = np.exp(2j * np.pi / p)
    assert close(z @ x, w * x @ z)
    assert close(np.linalg.matrix_power(x, p), np.eye(p))
    assert close(np.linalg.matrix_power(z, p), np.eye(p))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_fourier_conjugations(p):
    one = stab._single(p)
    f, x, z = one["F"], one["X"], one["Z"]
    f3 = np.linalg.matrix_power(f, 3)
    assert close(f.conj().T @ f, np.eye(p))
    assert close(np.linalg.matrix_power(f, 4), np.eye(p))
    # Z is F X F^3 up to a scalar; F X F^2 is not proportional to Z
    assert proportional(f @ x @ f3, z)
    assert not proportional(f @ x @ np.linalg.matrix_power(f, 2), z)


def conjugation_matrix(u, p, n):
    """Symplectic matrix M with U W(e_k) U^dag ~ W(e_k M), found by search."""
    def weyl(v):  # v = (x..., z...) -> X^z Z^x
        return stab.weyl_matrix(p, v[n:], v[:n])

    rows = []
    for k in range(2 * n):
        e = [0] * (2 * n)
        e[k] = 1
        img = u @ weyl(e) @ u.conj().T
        hits = [v for v in itertools.product(range(p), repeat=2 * n) if proportional(img, weyl(v))]
        assert len(hits) == 1
        rows.append(list(hits[0]))
    return rows


@pytest.mark.parametrize("kind,a", [("F", None), ("Finv", None), ("S", 1), ("S", 2), ("V", 1), ("V", 2)])
def test_gate_unitaries_implement_right_action(kind, a):
    p = 3
    f = prime_field(p)
    u = stab.gate_unitary(sp.Op(kind, (0,), a), p)
    assert conjugation_matrix(u, p, 1) == sp.gate_matrix(f, kind, a).tolist()


@pytest.mark.parametrize("a", [1, 2])
def test_controlled_unitary_implements_right_action(a):
    p = 3
    f = prime_field(p)
    u = stab.gate_unitary(sp.Op("C", (0, 1), a), p)
    assert conjugation_matrix(u, p, 2) == sp.gate_matrix(f, "C", a).tolist()


def test_cap_commutation():
    for p in (3, 5):
        for a in range(1, p):
            assert all(stab.cap_commutation(p, a).values())


def test_stabilizer_group_of_zero_state():
    p = 3
    s = stab.DenseState(p, 1, np.array([1, 0, 0], dtype=complex))
    group = stab.stabilizer_group(s)
    assert {(g.a, g.b) for g in group} == {((0,), (b,)) for b in range(p)}
    for g in group:
        assert close(g.matrix(p) @ s.amplitudes, s.amplitudes)


def test_stabilizer_group_rejects_magic_state():
    p = 3
    psi = np.array([1, np.exp(0.3j), 0.5], dtype=complex)
    with pytest.raises(StateNotStabilizer):
        stab.stabilizer_group(stab.DenseState(p, 1, psi))


def test_dense_state_rays():
    p = 3
    a = stab.DenseState(p, 1, np.array([1, 1j, 0]))
    assert a.same_ray(stab.DenseState(p, 1, np.array([2j, -2, 0])))
    assert not a.same_ray(stab.DenseState(p, 1, np.array([1, 0, 0])))
    z = stab.DenseState(p, 1, np.zeros(3))
    assert z.is_zero and z.same_ray(z) and not z.same_ray(a)


def test_oracle_limits_and_errors():
    f3 = prime_field(3)
    with pytest.raises(EvenOrNonPrime):
        stab.simulate_dense(sp.Circuit(prime_field(2), 1, (sp.ZeroPrep(0),)))
    with pytest.raises(NonStabilizerGate):
        stab.simulate_dense(sp.Circuit(f3, 1, (sp.ZeroPrep(0), sp.Discard(1, 0))))
    with pytest.raises(CircuitTooLarge):
        stab.simulate_dense(sp.Circuit(f3, 6, tuple(sp.ZeroPrep(i) for i in range(6))))


def test_simple_correspondences():
    f = prime_field(3)
    zero = sp.Circuit(f, 1, (sp.ZeroPrep(0),))
    assert close(stab.simulate_dense(zero).amplitudes, [1, 0, 0])
    plus = sp.Circuit(f, 1, (sp.ZeroPrep(0), sp.Finv(0)))
    assert close(stab.simulate_dense(plus).amplitudes, np.ones(3) / np.sqrt(3))
    for c in (zero, plus):
        v = stab.verify_h_functor(c)
        assert v.ok and v.support == 3
    dead = sp.Circuit(f, 1, (sp.ZeroPrep(0), sp.ZShift(1, 0), sp.Post(0)))
    assert stab.simulate_dense(dead).is_zero
    assert stab.verify_h_functor(dead).detail == "empty"


@settings(max_examples=40)
@given(seeds)
def test_random_correspondence(seed):
    rng = np.random.default_rng(seed)
    f = prime_field(3)
    c = random_circuit(rng, f, int(rng.integers(1, 3)), 8, kinds="FSVCZPXY")
    v = stab.verify_h_functor(c)
    assert v.ok
    assert v.phase_sign in (1, None)


def test_inputs_bend_through_cups():
    # the identity circuit on one wire gives the maximally entangled pair
    f = prime_field(3)
    s = stab.simulate_dense(sp.Circuit(f, 1, ()))
    assert close(s.amplitudes, np.eye(3).reshape(-1))
    rel = stab.relation_state(sp.Circuit(f, 1, (sp.S(1, 0),)))
    assert rel.cod == 2
    assert stab.verify_h_functor(sp.Circuit(f, 2, (sp.C(1, 0, 1), sp.F(1)))).ok


def test_report_rows():
    rows = stab.report([stab.Verdict("a", 1, 3, True), stab.Verdict("b", -1, 0, True, "empty")])
    lines = rows.splitlines()
    assert lines[0].split() == ["circuit", "dim", "support", "verdict"]
    assert lines[1].split() == ["a", "1", "3", "ok"]
    assert lines[2].split()[-1] == "empty"
