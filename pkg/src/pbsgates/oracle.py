"""Independent dense brute-force simulator used to cross-check the engine.

Everything here is deliberately separate from the sparse engine: element
unitaries are derived from explicit single-particle matrices and expanded
into many-body operators by closed-form multinomial combinatorics, states
are dense vectors over an explicitly enumerated occupation basis, and
outcome probabilities come from 0/1 projectors.  Slow and simple on purpose.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .circuit import CircuitSpec, DetectorSpec, OutcomePattern, is_1ao1, is_passive
from .errors import TruncationTooSmall
from .fock import POL_H, POL_V, BasisState, PhotonState, Slot
from .optics import (
    BASIS_FS,
    BASIS_HV,
    PbsElement,
    PolPhaseElement,
    RotatorElement,
)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

# a†H -> (a†F - a†S)/sqrt(2), a†V -> (a†F + a†S)/sqrt(2); columns are (H, V),
# rows are (F, S).  After this rotation the numeric "H" slot holds the
# transmitted (F) component and the "V" slot the reflected (S) component.
_REBASE = np.array([[_INV_SQRT2, _INV_SQRT2], [-_INV_SQRT2, _INV_SQRT2]])


def compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative integers summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


class DenseBasis:
    """Enumerated occupation basis over a declared slot set.

    The default enumeration holds every configuration with total photon
    number up to ``n_max`` (dimension = number of multisets of size <= n_max
    over the slots), in a fixed deterministic order.
    """

    def __init__(self, slots: list[Slot], n_max: int = 4, states=None):
        self.slots = list(slots)
        self.n_max = n_max
        if states is None:
            states = []
            for total in range(n_max + 1):
                states.extend(compositions(total, len(self.slots)))
        self.states: list[tuple[int, ...]] = list(states)
        self.index = {state: i for i, state in enumerate(self.states)}
        self.dim = len(self.states)

    def slot_index(self, slot: Slot) -> int:
        return self.slots.index(slot)

    def basis_state(self, i: int) -> BasisState:
        return BasisState.from_dict(
            {slot: n for slot, n in zip(self.slots, self.states[i]) if n}
        )

    def vector_from_terms(self, terms: dict[BasisState, complex]) -> np.ndarray:
        vec = np.zeros(self.dim, dtype=complex)
        for basis, amp in terms.items():
            occ = basis.as_dict()
            state = tuple(occ.pop(slot, 0) for slot in self.slots)
            if occ:
                raise TruncationTooSmall(f"slots not in basis: {sorted(occ)}")
            idx = self.index.get(state)
            if idx is None:
                raise TruncationTooSmall(f"state {state} outside basis")
            vec[idx] = amp
        return vec


def _single_particle_matrix(el) -> tuple[list[Slot], list[Slot], np.ndarray]:
    """(input slots, output slots, u) with a†(in_j) -> sum_i u[i,j] a†(out_i)."""
    if isinstance(el, PbsElement):
        ins = [(el.in1, POL_H), (el.in1, POL_V), (el.in2, POL_H), (el.in2, POL_V)]
        outs = [(el.out1, POL_H), (el.out1, POL_V), (el.out2, POL_H), (el.out2, POL_V)]
        # Transmitted pol: in1->out1, in2->out2; reflected: in1->out2, in2->out1.
        route = np.zeros((4, 4))
        route[0, 0] = route[3, 1] = route[2, 2] = route[1, 3] = 1.0
        if el.basis == BASIS_HV:
            return ins, outs, route
        both = np.kron(np.eye(2), _REBASE)
        return ins, outs, np.linalg.inv(both) @ route @ both
    if isinstance(el, RotatorElement):
        theta = math.radians(el.angle_deg)
        u = np.array(
            [
                [math.cos(theta), -math.sin(theta)],
                [math.sin(theta), math.cos(theta)],
            ]
        )
        return [(el.mode, POL_H), (el.mode, POL_V)], [
            (el.mode, POL_H),
            (el.mode, POL_V),
        ], u
    if isinstance(el, PolPhaseElement):
        phase = np.exp(1j * math.radians(el.phase_deg))
        slot = (el.mode, el.pol)
        return [slot], [slot], np.array([[phase]])
    raise TypeError(f"not an optical element: {el!r}")


def _expand_operator(
    basis: DenseBasis, ins: list[Slot], outs: list[Slot], u: np.ndarray
) -> sp.csr_matrix:
    """Many-body operator for a single-particle map, by multinomial expansion.

    For an input configuration with n_j photons in slot j, the image is the
    sum over all ways of distributing each group of n_j photons among the
    output slots, with multinomial weights and bosonic sqrt(m!) factors.
    """
    in_idx = [basis.slot_index(s) for s in ins]
    out_idx = [basis.slot_index(s) for s in outs]
    n_out = len(outs)
    rows, cols, vals = [], [], []
    for col, state in enumerate(basis.states):
        counts = [state[i] for i in in_idx]
        if not any(counts):
            rows.append(col)
            cols.append(col)
            vals.append(1.0 + 0j)
            continue
        spect = list(state)
        for i in in_idx:
            spect[i] = 0
        in_norm = math.prod(math.factorial(n) for n in counts)
        per_slot = []
        for j, n_j in enumerate(counts):
            options = []
            if n_j == 0:
                options.append((tuple([0] * n_out), 1.0 + 0j))
            else:
                for dist in compositions(n_j, n_out):
                    weight = math.factorial(n_j)
                    amp = complex(1.0)
                    for i, k in enumerate(dist):
                        weight //= math.factorial(k)
                        amp *= u[i, j] ** k
                    options.append((dist, weight * amp))
            per_slot.append(options)
        accum: dict[tuple[int, ...], complex] = {}
        for combo in itertools.product(*per_slot):
            total_dist = [0] * n_out
            amp = complex(1.0)
            for dist, a in combo:
                amp *= a
                for i, k in enumerate(dist):
                    total_dist[i] += k
            if not amp:
                continue
            key = tuple(total_dist)
            accum[key] = accum.get(key, 0j) + amp
        for dist, amp in accum.items():
            target = list(spect)
            for i, k in zip(out_idx, dist):
                target[i] += k
            # sqrt factors for photons landing on already-occupied out slots
            out_norm = 1.0
            for i in out_idx:
                out_norm *= math.factorial(target[i]) / math.factorial(spect[i])
            row = basis.index.get(tuple(target))
            if row is None:
                raise TruncationTooSmall(
                    f"operator image {tuple(target)} outside basis"
                )
            rows.append(row)
            cols.append(col)
            vals.append(amp * math.sqrt(out_norm / in_norm))
    return sp.csr_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim))


def element_operator(el, basis: DenseBasis) -> sp.csr_matrix:
    ins, outs, u = _single_particle_matrix(el)
    return _expand_operator(basis, ins, outs, u)


def element_matrix(el, basis: DenseBasis) -> np.ndarray:
    """Dense unitary of one optical element on the truncated basis."""
    return element_operator(el, basis).toarray()


def rebase_operator(mode: str, basis: DenseBasis) -> sp.csr_matrix:
    slots = [(mode, POL_H), (mode, POL_V)]
    return _expand_operator(basis, slots, slots, _REBASE)


def detector_patterns(
    basis: DenseBasis, detectors: tuple[DetectorSpec, ...]
) -> list[OutcomePattern]:
    """Every joint count pattern that occurs in the basis, in index order."""
    seen = []
    found = set()
    for state in basis.states:
        pattern = _pattern_of(basis, state, detectors)
        if pattern not in found:
            found.add(pattern)
            seen.append(pattern)
    return seen


def _pattern_of(basis, state, detectors) -> OutcomePattern:
    return tuple(
        (
            state[basis.slot_index((det.mode, POL_H))],
            state[basis.slot_index((det.mode, POL_V))],
        )
        for det in detectors
    )


def outcome_projector(
    pattern: OutcomePattern,
    basis: DenseBasis,
    detectors: tuple[DetectorSpec, ...],
) -> np.ndarray:
    """Orthogonal 0/1 projector onto one joint detection outcome.

    The basis must already be expressed in each detector's splitting basis,
    so transmitted counts live on the numeric H slot and reflected counts on
    the numeric V slot.  Projectors over all patterns sum to the identity.
    """
    diag = np.array(
        [
            1.0 if _pattern_of(basis, state, detectors) == pattern else 0.0
            for state in basis.states
        ]
    )
    return np.diag(diag)


@dataclass
class DenseRunResult:
    outcomes: dict[OutcomePattern, tuple[float, dict[BasisState, complex]]]
    rejected: dict[OutcomePattern, float]
    success_probability: float
    failure_probability: float


class DenseCircuit:
    """Compiled dense pipeline for one circuit topology.

    Polarizing beam splitters are applied in place: the physical slots of
    the input modes are kept and relabeled, which keeps the basis small.
    The basis is restricted to the exact photon-number sector of each group
    of modes coupled by a beam splitter.
    """

    def __init__(self, spec: CircuitSpec):
        self.spec = spec
        per_mode = self._input_photon_counts(spec)
        group_of = {mode: mode for mode in per_mode}

        def find(m):
            while group_of[m] != m:
                group_of[m] = group_of[group_of[m]]
                m = group_of[m]
            return m

        alias = {mode: mode for mode in per_mode}
        physical_elements = []
        for el in spec.elements:
            if isinstance(el, PbsElement):
                p1, p2 = alias[el.in1], alias[el.in2]
                group_of[find(p1)] = find(p2)
                physical_elements.append(PbsElement(p1, p2, p1, p2, el.basis))
                alias.pop(el.in1, None)
                alias.pop(el.in2, None)
                alias[el.out1] = p1
                alias[el.out2] = p2
            elif isinstance(el, RotatorElement):
                physical_elements.append(RotatorElement(alias[el.mode], el.angle_deg))
            else:
                physical_elements.append(
                    PolPhaseElement(alias[el.mode], el.pol, el.phase_deg)
                )
        self.alias = alias

        groups: dict[str, list[str]] = {}
        for mode in per_mode:
            groups.setdefault(find(mode), []).append(mode)
        slot_list: list[Slot] = []
        group_states = []
        for root in sorted(groups):
            members = sorted(groups[root])
            gslots = [(m, pol) for m in members for pol in (POL_H, POL_V)]
            count = sum(per_mode[m] for m in members)
            slot_list.extend(gslots)
            group_states.append(list(compositions(count, len(gslots))))
        states = [
            tuple(itertools.chain.from_iterable(combo))
            for combo in itertools.product(*group_states)
        ]
        total = sum(per_mode.values())
        self.basis = DenseBasis(slot_list, n_max=total, states=states)

        operator = sp.identity(self.basis.dim, dtype=complex, format="csr")
        for el in physical_elements:
            operator = element_operator(el, self.basis) @ operator
        for det in spec.detectors:
            if det.basis == BASIS_FS:
                operator = rebase_operator(alias[det.mode], self.basis) @ operator
        self.operator = operator
        self.det_slots = [
            (
                self.basis.slot_index((alias[det.mode], POL_H)),
                self.basis.slot_index((alias[det.mode], POL_V)),
            )
            for det in spec.detectors
        ]
        consumed = {i for pair in self.det_slots for i in pair}
        self.kept = [i for i in range(len(slot_list)) if i not in consumed]
        # Reduced slots are reported under logical output mode names.
        back = {phys: logical for logical, phys in alias.items()}
        self.reduced_slots = [
            (back[slot_list[i][0]], slot_list[i][1]) for i in self.kept
        ]

    @staticmethod
    def _input_photon_counts(spec: CircuitSpec) -> dict[str, int]:
        counts: dict[str, int] = {}
        for decl in spec.inputs:
            for mode in decl.modes:
                counts[mode] = counts.get(mode, 0) + 1
        if spec.raw_input is not None:
            per_term = None
            for basis, _ in spec.raw_input.terms.items():
                occ: dict[str, int] = {}
                for (mode, _pol), n in basis.occ:
                    occ[mode] = occ.get(mode, 0) + n
                if per_term is None:
                    per_term = occ
                elif per_term != occ:
                    raise TruncationTooSmall(
                        "raw input without definite per-mode photon numbers"
                    )
            for mode, n in (per_term or {}).items():
                counts[mode] = counts.get(mode, 0) + n
        return counts

    def input_vector(self, spec: CircuitSpec) -> np.ndarray:
        """Dense input vector, built directly from the declarations."""
        terms: dict[tuple, complex] = {(): 1.0 + 0j}

        def product_with(options):
            nonlocal terms
            nxt: dict[tuple, complex] = {}
            for occ, amp in terms.items():
                for slots, a in options:
                    nxt[occ + slots] = nxt.get(occ + slots, 0j) + amp * a
            terms = nxt

        for decl in spec.inputs:
            if decl.kind == "qubit":
                (m,) = decl.modes
                a_h, a_v = decl.amplitudes
                product_with([(((m, POL_H),), a_h), (((m, POL_V),), a_v)])
            elif decl.kind == "bell":
                m1, m2 = decl.modes
                product_with(
                    [
                        (((m1, POL_H), (m2, POL_H)), _INV_SQRT2),
                        (((m1, POL_V), (m2, POL_V)), _INV_SQRT2),
                    ]
                )
            elif decl.kind == "chi":
                m1, m2, m3, m4 = decl.modes
                product_with(
                    [
                        (((m1, POL_H), (m4, POL_H), (m2, POL_H), (m3, POL_H)), 0.5),
                        (((m1, POL_H), (m4, POL_V), (m2, POL_H), (m3, POL_V)), 0.5),
                        (((m1, POL_V), (m4, POL_H), (m2, POL_V), (m3, POL_V)), 0.5),
                        (((m1, POL_V), (m4, POL_V), (m2, POL_V), (m3, POL_H)), 0.5),
                    ]
                )
            else:
                raise ValueError(f"unknown input kind: {decl.kind!r}")
        if spec.raw_input is not None:
            raw_options = [
                (tuple(slot for slot, n in basis.occ for _ in range(n)), amp)
                for basis, amp in spec.raw_input.terms.items()
            ]
            product_with(raw_options)

        vec = np.zeros(self.basis.dim, dtype=complex)
        for occ_slots, amp in terms.items():
            occ: dict[Slot, int] = {}
            for slot in occ_slots:
                occ[slot] = occ.get(slot, 0) + 1
            state = tuple(occ.get(slot, 0) for slot in self.basis.slots)
            norm = math.prod(math.sqrt(math.factorial(n)) for n in occ.values())
            vec[self.basis.index[state]] += amp * norm
        return vec

    def run(self, spec: CircuitSpec, passive: bool = False) -> DenseRunResult:
        vec = self.operator @ self.input_vector(spec)
        branches: dict[OutcomePattern, dict[tuple, complex]] = {}
        for i, amp in enumerate(vec):
            if not amp:
                continue
            state = self.basis.states[i]
            pattern = tuple(
                (state[ti], state[ri]) for ti, ri in self.det_slots
            )
            reduced = tuple(state[k] for k in self.kept)
            bucket = branches.setdefault(pattern, {})
            bucket[reduced] = bucket.get(reduced, 0j) + amp

        outcomes = {}
        rejected = {}
        success = 0.0
        for pattern in sorted(branches):
            bucket = branches[pattern]
            prob = sum(abs(a) ** 2 for a in bucket.values())
            accepted = is_passive(pattern) if passive else is_1ao1(pattern)
            if accepted and prob > 0.0:
                corrected = self._apply_corrections(bucket, pattern)
                scale = 1.0 / math.sqrt(prob)
                terms = {
                    BasisState.from_dict(
                        {s: n for s, n in zip(self.reduced_slots, red) if n}
                    ): amp * scale
                    for red, amp in corrected.items()
                    if amp
                }
                outcomes[pattern] = (prob, terms)
                success += prob
            else:
                rejected[pattern] = rejected.get(pattern, 0.0) + prob
        return DenseRunResult(
            outcomes=outcomes,
            rejected=rejected,
            success_probability=success,
            failure_probability=1.0 - success,
        )

    def _apply_corrections(self, bucket, pattern):
        spec = self.spec
        fired: dict[str, list[str]] = {}
        for (ct, cr), det in zip(pattern, spec.detectors):
            pols = fired.setdefault(det.label, [])
            pols.extend([det.transmitted_pol] * ct)
            pols.extend([det.reflected_pol] * cr)
        elements = []
        for rule in spec.rules:
            times = fired.get(rule.label, []).count(rule.pol)
            for _ in range(times):
                for corr in rule.corrections:
                    if isinstance(corr, RotatorElement):
                        elements.append(RotatorElement(corr.mode, corr.angle_deg))
                    else:
                        elements.append(
                            PolPhaseElement(corr.mode, corr.pol, corr.phase_deg)
                        )
        if not elements:
            return bucket
        reduced_basis = DenseBasis(
            list(self.reduced_slots), n_max=max(sum(red) for red in bucket)
        )
        vec = np.zeros(reduced_basis.dim, dtype=complex)
        for red, amp in bucket.items():
            vec[reduced_basis.index[red]] += amp
        for el in elements:
            vec = element_operator(el, reduced_basis) @ vec
        return {
            reduced_basis.states[i]: amp for i, amp in enumerate(vec) if amp
        }


def run_dense(spec: CircuitSpec, passive: bool = False) -> DenseRunResult:
    return DenseCircuit(spec).run(spec, passive=passive)
