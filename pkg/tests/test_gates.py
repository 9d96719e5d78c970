"""Gate-level behavior: success probabilities, truth tables, fidelities."""

import math

import pytest

from pbsgates import gates
from pbsgates.errors import NonNormalized
from pbsgates.fock import POL_H, BasisState
from pbsgates.gates import (
    QubitState,
    TwoQubitState,
    bell_phi_plus,
    chi_state,
    fidelity,
    ideal_cnot,
    qubit_state,
    two_qubit_input,
)

from conftest import random_qubit, random_two_qubit

SQRT_HALF = 1.0 / math.sqrt(2.0)

H = QubitState(1.0, 0.0)
V = QubitState(0.0, 1.0)

BASIS_2Q = {
    "HH": TwoQubitState(1.0, 0.0, 0.0, 0.0),
    "HV": TwoQubitState(0.0, 1.0, 0.0, 0.0),
    "VH": TwoQubitState(0.0, 0.0, 1.0, 0.0),
    "VV": TwoQubitState(0.0, 0.0, 0.0, 1.0),
}


def test_state_factories():
    q = qubit_state("m", 0.6, 0.8)
    assert abs(q.norm_sq() - 1.0) < 1e-12
    bell = bell_phi_plus("a", "b")
    assert bell.num_terms() == 2
    assert abs(bell.norm_sq() - 1.0) < 1e-12
    hh = BasisState.from_dict({("a", POL_H): 1, ("b", POL_H): 1})
    assert abs(bell.amplitude(hh) - SQRT_HALF) < 1e-12
    chi = chi_state("1", "2", "3", "4")
    assert chi.num_terms() == 4
    assert all(abs(a - 0.5) < 1e-12 for a in chi.terms.values())
    with pytest.raises(ValueError):
        bell_phi_plus("a", "a")
    with pytest.raises(ValueError):
        chi_state("1", "1", "3", "4")


def test_state_validation():
    with pytest.raises(NonNormalized):
        QubitState(1.0, 1.0)
    with pytest.raises(NonNormalized):
        TwoQubitState(1.0, 1.0, 0.0, 0.0)
    with pytest.raises(NonNormalized):
        fidelity(qubit_state("m", 0.6, 0.8).scaled(2.0), qubit_state("m", 1.0, 0.0))


def test_fidelity_basic_values():
    h = qubit_state("m", 1.0, 0.0)
    v = qubit_state("m", 0.0, 1.0)
    assert abs(fidelity(h, h) - 1.0) < 1e-12
    assert abs(fidelity(h, v)) < 1e-12
    assert abs(fidelity(h.scaled(1j), h) - 1.0) < 1e-12  # global phase invariant


def test_ideal_cnot_truth_table_and_involution():
    assert ideal_cnot(BASIS_2Q["HH"]) == BASIS_2Q["HH"]
    assert ideal_cnot(BASIS_2Q["VH"]) == BASIS_2Q["VV"]
    assert ideal_cnot(BASIS_2Q["VV"]) == BASIS_2Q["VH"]
    state = TwoQubitState(0.5, 0.5, 0.5, 0.5)
    assert ideal_cnot(ideal_cnot(state)) == state


def test_parity_check_success_and_fidelity(rng):
    for _ in range(100):
        q = random_qubit(rng)
        report = gates.parity_check(q)
        assert abs(report.success_probability - 0.5) < 1e-12
        assert all(abs(f - 1.0) < 1e-12 for f in report.fidelities.values())
        passive = gates.parity_check(q, passive=True)
        assert abs(passive.success_probability - 0.25) < 1e-12


def test_destructive_cnot_truth_table():
    for target_name, target in (("H", H), ("V", V)):
        for control_name, control in (("H", H), ("V", V)):
            report = gates.destructive_cnot(target, control)
            assert abs(report.success_probability - 0.5) < 1e-12
            assert all(abs(f - 1.0) < 1e-12 for f in report.fidelities.values()), (
                target_name,
                control_name,
            )


def test_destructive_cnot_flip_targets(rng):
    for _ in range(50):
        t = random_qubit(rng)
        flipped = gates.destructive_cnot(t, V)
        swap = qubit_state("3", t.beta, t.alpha)
        for _, out in flipped.result.outcomes.values():
            assert abs(fidelity(out, swap) - 1.0) < 1e-12
        kept = gates.destructive_cnot(t, H)
        same = qubit_state("3", t.alpha, t.beta)
        for _, out in kept.result.outcomes.values():
            assert abs(fidelity(out, same) - 1.0) < 1e-12
        assert abs(flipped.success_probability - 0.5) < 1e-12
        assert abs(
            gates.destructive_cnot(t, V, passive=True).success_probability - 0.25
        ) < 1e-12


def test_destructive_cnot_superposed_control_runs():
    control = QubitState(SQRT_HALF, SQRT_HALF)
    report = gates.destructive_cnot(H, control)
    assert report.target is None
    assert not report.fidelities
    total = report.success_probability + sum(report.result.rejected.values())
    assert abs(total - 1.0) < 1e-12


def test_encoder_output(rng):
    for _ in range(50):
        q = random_qubit(rng)
        report = gates.encoder(q)
        assert abs(report.success_probability - 0.5) < 1e-12
        assert all(abs(f - 1.0) < 1e-12 for f in report.fidelities.values())


def test_encoder_plus_input_gives_bell():
    report = gates.encoder(QubitState(SQRT_HALF, SQRT_HALF))
    _, state = next(iter(report.result.outcomes.values()))
    assert abs(fidelity(state, bell_phi_plus("2", "b")) - 1.0) < 1e-12


def test_cnot_basis_inputs():
    for name, state in BASIS_2Q.items():
        report = gates.cnot(state)
        assert abs(report.success_probability - 0.25) < 1e-12, name
        assert len(report.result.outcomes) == 4
        for probability, _ in report.result.outcomes.values():
            assert abs(probability - 1 / 16) < 1e-12
        assert all(abs(f - 1.0) < 1e-12 for f in report.fidelities.values()), name


def test_cnot_superpositions(rng):
    for _ in range(25):
        state = random_two_qubit(rng)
        report = gates.cnot(state)
        assert abs(report.success_probability - 0.25) < 1e-12
        target = two_qubit_input("2", "3", ideal_cnot(state))
        for pattern, (_, out) in report.result.outcomes.items():
            assert abs(fidelity(out, target) - 1.0) < 1e-12
        assert abs(
            gates.cnot(state, passive=True).success_probability - 1 / 16
        ) < 1e-12


def test_gc_cnot_sixteen_uniform_branches(rng):
    for _ in range(5):
        state = random_two_qubit(rng)
        report = gates.gc_cnot(state)
        assert abs(report.success_probability - 0.25) < 1e-12
        assert len(report.result.outcomes) == 16
        for probability, _ in report.result.outcomes.values():
            assert abs(probability - 1 / 64) < 1e-12
        assert all(abs(f - 1.0) < 1e-12 for f in report.fidelities.values())


def test_gc_cnot_passive():
    state = TwoQubitState(0.5, 0.5, 0.5, 0.5)
    report = gates.gc_cnot(state, passive=True)
    assert abs(report.success_probability - 1 / 64) < 1e-12
    assert len(report.result.outcomes) == 1


def test_chi_via_cnot_reproduces_chi():
    report = gates.chi_via_cnot()
    assert abs(report.success_probability - 0.25) < 1e-12
    target = chi_state("1", "2", "3", "4")
    for _, state in report.result.outcomes.values():
        assert abs(fidelity(state, target) - 1.0) < 1e-12


def test_cnot_equals_gc_cnot_branchwise(rng):
    # Two very different constructions of the same logical gate must agree
    # on every accepted branch's conditional output.
    for _ in range(5):
        state = random_two_qubit(rng)
        a = gates.cnot(state)
        b = gates.gc_cnot(state)
        outs_a = [st for _, st in a.result.outcomes.values()]
        outs_b = [st for _, st in b.result.outcomes.values()]
        for x in outs_a:
            for y in outs_b:
                assert abs(fidelity(x, y) - 1.0) < 1e-12
