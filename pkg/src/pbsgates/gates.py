"""Built-in gate constructions, ancilla factories, and fidelity metrics.

Each builder assembles a :class:`CircuitSpec` with the same topology as the
corresponding optical diagram, runs it, and scores every accepted outcome
against the ideal target state.  Catalog names (``parity_check``,
``destructive_cnot``, ``encoder``, ``cnot``, ``gc_cnot``, ``chi_via_cnot``)
are stable identifiers used by the CLI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import fock
from .circuit import (
    CircuitSpec,
    DetectorSpec,
    FeedForwardRule,
    GateResult,
    InputDecl,
    OutcomePattern,
    execute,
)
from .errors import NonNormalized
from .fock import POL_H, POL_S, POL_V, PhotonState
from .optics import BASIS_FS, BASIS_HV, PbsElement, PolPhaseElement, RotatorElement

_SQRT_HALF = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class QubitState:
    """Single polarization qubit: alpha·H + beta·V."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        n2 = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(n2 - 1.0) > 1e-9:
            raise NonNormalized(f"qubit squared norm is {n2!r}")


@dataclass(frozen=True)
class TwoQubitState:
    """Coefficients of HH, HV, VH, VV."""

    a1: complex
    a2: complex
    a3: complex
    a4: complex

    def __post_init__(self):
        n2 = sum(abs(a) ** 2 for a in (self.a1, self.a2, self.a3, self.a4))
        if abs(n2 - 1.0) > 1e-9:
            raise NonNormalized(f"two-qubit squared norm is {n2!r}")


@dataclass
class GateReport:
    name: str
    spec: CircuitSpec
    result: GateResult
    target: PhotonState | None
    fidelities: dict[OutcomePattern, float]
    success_probability: float


def qubit_state(
    mode: str,
    alpha: complex,
    beta: complex,
    tolerance: float | None = None,
) -> PhotonState:
    vac = fock.vacuum(tolerance)
    return fock.superpose(
        fock.create(vac, (mode, POL_H)), alpha, fock.create(vac, (mode, POL_V)), beta
    )


def bell_phi_plus(
    m1: str, m2: str, tolerance: float | None = None
) -> PhotonState:
    """(H_m1 H_m2 + V_m1 V_m2)/sqrt(2)."""
    if m1 == m2:
        raise ValueError("Bell pair needs two distinct modes")
    terms = {
        fock.BasisState.from_dict({(m1, POL_H): 1, (m2, POL_H): 1}): _SQRT_HALF,
        fock.BasisState.from_dict({(m1, POL_V): 1, (m2, POL_V): 1}): _SQRT_HALF,
    }
    return PhotonState(terms, tolerance)


def chi_state(
    m1: str, m2: str, m3: str, m4: str, tolerance: float | None = None
) -> PhotonState:
    """Four-photon resource: (H1H4H2H3 + H1V4H2V3 + V1H4V2V3 + V1V4V2H3)/2."""
    if len({m1, m2, m3, m4}) != 4:
        raise ValueError("chi needs four distinct modes")
    combos = [
        (POL_H, POL_H, POL_H, POL_H),
        (POL_H, POL_V, POL_H, POL_V),
        (POL_V, POL_H, POL_V, POL_V),
        (POL_V, POL_V, POL_V, POL_H),
    ]
    terms = {}
    for p1, p4, p2, p3 in combos:
        key = fock.BasisState.from_dict(
            {(m1, p1): 1, (m4, p4): 1, (m2, p2): 1, (m3, p3): 1}
        )
        terms[key] = 0.5
    return PhotonState(terms, tolerance)


def two_qubit_input(m1: str, m2: str, state: TwoQubitState) -> PhotonState:
    terms = {}
    for amp, p1, p2 in (
        (state.a1, POL_H, POL_H),
        (state.a2, POL_H, POL_V),
        (state.a3, POL_V, POL_H),
        (state.a4, POL_V, POL_V),
    ):
        key = fock.BasisState.from_dict({(m1, p1): 1, (m2, p2): 1})
        terms[key] = amp
    return PhotonState(terms)


def ideal_cnot(state: TwoQubitState) -> TwoQubitState:
    """Target truth table: swap the VH and VV coefficients."""
    return TwoQubitState(state.a1, state.a2, state.a4, state.a3)


def fidelity(a: PhotonState, b: PhotonState) -> float:
    for name, st in (("first", a), ("second", b)):
        n2 = st.norm_sq()
        if abs(n2 - 1.0) > 1e-9:
            raise NonNormalized(f"{name} state squared norm is {n2!r}")
    return abs(fock.inner_product(a, b)) ** 2


def _report(name: str, spec: CircuitSpec, target: PhotonState | None, passive: bool):
    result = execute(spec, passive=passive)
    fidelities = {}
    if target is not None:
        for pattern, (_, state) in result.outcomes.items():
            fidelities[pattern] = fidelity(state, target)
    return GateReport(
        name=name,
        spec=spec,
        result=result,
        target=target,
        fidelities=fidelities,
        success_probability=result.success_probability,
    )


_PARITY_RULES = (
    FeedForwardRule("c", POL_S, (PolPhaseElement("2", POL_H, 180.0),)),
)
_FLIP_RULES = (
    FeedForwardRule(
        "d", POL_V, (RotatorElement("3", 90.0), PolPhaseElement("3", POL_H, 180.0))
    ),
)
_GC_RULES = tuple(
    [
        FeedForwardRule(lbl, POL_S, (PolPhaseElement("2", POL_H, 180.0),))
        for lbl in ("p", "q")
    ]
    + [
        FeedForwardRule(
            lbl,
            POL_S,
            (PolPhaseElement("2", POL_H, 180.0), PolPhaseElement("3", POL_V, 180.0)),
        )
        for lbl in ("m", "n")
    ]
)


def parity_check(q: QubitState, passive: bool = False) -> GateReport:
    """Transfer the qubit from mode 2' to mode 2 when parities agree."""
    spec = CircuitSpec(
        modes=("2'", "a", "2", "c"),
        inputs=(
            InputDecl("qubit", ("2'",), (q.alpha, q.beta)),
            InputDecl("qubit", ("a",), (_SQRT_HALF, _SQRT_HALF)),
        ),
        elements=(PbsElement("2'", "a", "2", "c", BASIS_HV),),
        detectors=(DetectorSpec("c", BASIS_FS, "c"),),
        rules=_PARITY_RULES,
        outputs=("2",),
    )
    return _report("parity_check", spec, qubit_state("2", q.alpha, q.beta), passive)


def destructive_cnot(
    target: QubitState, control: QubitState, passive: bool = False
) -> GateReport:
    """Flip the target qubit when the control photon is V-polarized.

    The control photon is consumed by the detection.  A fidelity target is
    only defined for computational-basis controls; superposed controls still
    run, with fidelities omitted.
    """
    spec = CircuitSpec(
        modes=("3'", "b", "3", "d"),
        inputs=(
            InputDecl("qubit", ("3'",), (target.alpha, target.beta)),
            InputDecl("qubit", ("b",), (control.alpha, control.beta)),
        ),
        elements=(PbsElement("3'", "b", "3", "d", BASIS_FS),),
        detectors=(DetectorSpec("d", BASIS_HV, "d"),),
        rules=_FLIP_RULES,
        outputs=("3",),
    )
    ideal = None
    if abs(abs(control.alpha) - 1.0) <= 1e-12:
        ideal = qubit_state("3", target.alpha, target.beta)
    elif abs(abs(control.beta) - 1.0) <= 1e-12:
        ideal = qubit_state("3", target.beta, target.alpha)
    return _report("destructive_cnot", spec, ideal, passive)


def encoder(q: QubitState, passive: bool = False) -> GateReport:
    """Copy the qubit's basis value onto modes 2 and b: aH+bV -> aHH+bVV."""
    spec = CircuitSpec(
        modes=("2'", "a", "b", "2", "c"),
        inputs=(
            InputDecl("qubit", ("2'",), (q.alpha, q.beta)),
            InputDecl("bell", ("a", "b")),
        ),
        elements=(PbsElement("2'", "a", "2", "c", BASIS_HV),),
        detectors=(DetectorSpec("c", BASIS_FS, "c"),),
        rules=_PARITY_RULES,
        outputs=("2", "b"),
    )
    target = fock.superpose(
        fock.PhotonState(
            {fock.BasisState.from_dict({("2", POL_H): 1, ("b", POL_H): 1}): 1.0}
        ),
        q.alpha,
        fock.PhotonState(
            {fock.BasisState.from_dict({("2", POL_V): 1, ("b", POL_V): 1}): 1.0}
        ),
        q.beta,
    )
    return _report("encoder", spec, target, passive)


def _composed_cnot_parts():
    elements = (
        PbsElement("2'", "a", "2", "c", BASIS_HV),
        PbsElement("3'", "b", "3", "d", BASIS_FS),
    )
    detectors = (
        DetectorSpec("c", BASIS_FS, "c"),
        DetectorSpec("d", BASIS_HV, "d"),
    )
    rules = _PARITY_RULES + _FLIP_RULES
    return elements, detectors, rules


def cnot(state: TwoQubitState, passive: bool = False) -> GateReport:
    """Encoder + destructive-CNOT composition; control 2'->2, target 3'->3."""
    elements, detectors, rules = _composed_cnot_parts()
    spec = CircuitSpec(
        modes=("2'", "3'", "a", "b", "2", "3", "c", "d"),
        inputs=(InputDecl("bell", ("a", "b")),),
        elements=elements,
        detectors=detectors,
        rules=rules,
        outputs=("2", "3"),
        raw_input=two_qubit_input("2'", "3'", state),
    )
    return _report("cnot", spec, two_qubit_input("2", "3", ideal_cnot(state)), passive)


def gc_cnot(state: TwoQubitState, passive: bool = False) -> GateReport:
    """Teleportation-style gate consuming the four-photon chi resource."""
    spec = CircuitSpec(
        modes=("A", "B", "1", "2", "3", "4", "p", "q", "m", "n"),
        inputs=(InputDecl("chi", ("1", "2", "3", "4")),),
        elements=(
            PbsElement("A", "1", "p", "q", BASIS_HV),
            PbsElement("B", "4", "m", "n", BASIS_HV),
        ),
        detectors=(
            DetectorSpec("p", BASIS_FS, "p"),
            DetectorSpec("q", BASIS_FS, "q"),
            DetectorSpec("m", BASIS_FS, "m"),
            DetectorSpec("n", BASIS_FS, "n"),
        ),
        rules=_GC_RULES,
        outputs=("2", "3"),
        raw_input=two_qubit_input("A", "B", state),
    )
    return _report(
        "gc_cnot", spec, two_qubit_input("2", "3", ideal_cnot(state)), passive
    )


def chi_via_cnot(passive: bool = False) -> GateReport:
    """Produce chi constructively: composed CNOT across two Bell pairs."""
    elements, detectors, rules = _composed_cnot_parts()
    spec = CircuitSpec(
        modes=("1", "2'", "4", "3'", "a", "b", "2", "3", "c", "d"),
        inputs=(
            InputDecl("bell", ("1", "2'")),
            InputDecl("bell", ("4", "3'")),
            InputDecl("bell", ("a", "b")),
        ),
        elements=elements,
        detectors=detectors,
        rules=rules,
        outputs=("1", "2", "3", "4"),
    )
    return _report("chi_via_cnot", spec, chi_state("1", "2", "3", "4"), passive)


GATE_NAMES = (
    "parity_check",
    "destructive_cnot",
    "encoder",
    "cnot",
    "gc_cnot",
    "chi_via_cnot",
)
