"""Sparse bosonic states over polarization-resolved optical modes.

A slot is a ``(mode, pol)`` pair.  The canonical polarization labels are
``H`` and ``V``; the diagonal labels ``F`` and ``S`` appear only transiently,
inside basis changes and detector logic.  States are stored as a sparse
mapping from occupation assignments to complex amplitudes, with the bosonic
convention ``a†|n> = sqrt(n+1)|n+1>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import OverlappingModes

POL_H = "H"
POL_V = "V"
POL_F = "F"
POL_S = "S"

HV_TO_FS = "HVtoFS"
FS_TO_HV = "FStoHV"

#: Amplitudes with magnitude below this are pruned (cancellation noise from
#: repeated sqrt(2) arithmetic).  Override per state via the constructor, or
#: process-wide with :func:`set_default_tolerance` (the CLI wires this to the
#: PBSGATES_AMP_TOLERANCE environment variable).
DEFAULT_TOLERANCE = 1e-12

_default_tolerance = DEFAULT_TOLERANCE


def set_default_tolerance(value: float):
    global _default_tolerance
    if not (0.0 <= value < 1.0):
        raise ValueError(f"tolerance out of range: {value!r}")
    _default_tolerance = value


def get_default_tolerance() -> float:
    return _default_tolerance

_SQRT_HALF = 1.0 / math.sqrt(2.0)

Slot = tuple[str, str]


@dataclass(frozen=True, order=True)
class BasisState:
    """One classical photon configuration: sorted ((mode, pol), count) pairs.

    The empty tuple is the vacuum.  Zero counts are never stored, so equal
    configurations compare equal.
    """

    occ: tuple[tuple[Slot, int], ...] = ()

    @staticmethod
    def from_dict(occupations: dict[Slot, int]) -> "BasisState":
        items = tuple(sorted((slot, int(n)) for slot, n in occupations.items() if n))
        for _, n in items:
            if n < 0:
                raise ValueError("negative occupation")
        return BasisState(items)

    def as_dict(self) -> dict[Slot, int]:
        return dict(self.occ)

    def count(self, slot: Slot) -> int:
        for s, n in self.occ:
            if s == slot:
                return n
        return 0

    @property
    def total_photons(self) -> int:
        return sum(n for _, n in self.occ)

    def modes(self) -> set[str]:
        return {mode for (mode, _), _ in self.occ}

    def key_string(self) -> str:
        """Stable human-readable form, e.g. ``2:H:1,c:V:2``."""
        return ",".join(f"{mode}:{pol}:{n}" for (mode, pol), n in self.occ)


VACUUM = BasisState()


class PhotonState:
    """Sparse complex superposition of :class:`BasisState` terms.

    Instances are immutable after construction; every operation returns a new
    value, so states can be freely shared between threads.
    """

    __slots__ = ("_terms", "tolerance")

    def __init__(self, terms, tolerance: float | None = None):
        if tolerance is None:
            tolerance = _default_tolerance
        self.tolerance = tolerance
        self._terms = {
            basis: complex(amp)
            for basis, amp in terms.items()
            if abs(amp) >= tolerance
        }

    @property
    def terms(self) -> dict[BasisState, complex]:
        return dict(self._terms)

    def amplitude(self, basis: BasisState) -> complex:
        return self._terms.get(basis, 0j)

    def norm_sq(self) -> float:
        return sum(abs(a) ** 2 for a in self._terms.values())

    def num_terms(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def modes(self) -> set[str]:
        out: set[str] = set()
        for basis in self._terms:
            out |= basis.modes()
        return out

    def scaled(self, factor: complex) -> "PhotonState":
        return PhotonState(
            {b: a * factor for b, a in self._terms.items()}, self.tolerance
        )

    def normalized(self) -> "PhotonState":
        n2 = self.norm_sq()
        if n2 == 0.0:
            raise ValueError("cannot normalize the zero state")
        return self.scaled(1.0 / math.sqrt(n2))

    def sorted_terms(self) -> list[tuple[BasisState, complex]]:
        return sorted(self._terms.items(), key=lambda item: item[0])

    def __repr__(self):
        parts = [f"({a:.6g})|{b.key_string() or 'vac'}>" for b, a in self.sorted_terms()]
        return " + ".join(parts) if parts else "0"


def vacuum(tolerance: float | None = None) -> PhotonState:
    return PhotonState({VACUUM: 1.0 + 0j}, tolerance)


def create(state: PhotonState, slot: Slot) -> PhotonState:
    """Apply the creation operator on ``slot``: a†|n> = sqrt(n+1)|n+1>."""
    out: dict[BasisState, complex] = {}
    for basis, amp in state.terms.items():
        occ = basis.as_dict()
        n = occ.get(slot, 0)
        occ[slot] = n + 1
        key = BasisState.from_dict(occ)
        out[key] = out.get(key, 0j) + amp * math.sqrt(n + 1)
    return PhotonState(out, state.tolerance)


def superpose(a: PhotonState, ca: complex, b: PhotonState, cb: complex) -> PhotonState:
    out = {basis: amp * ca for basis, amp in a.terms.items()}
    for basis, amp in b.terms.items():
        out[basis] = out.get(basis, 0j) + amp * cb
    return PhotonState(out, min(a.tolerance, b.tolerance))


def tensor(a: PhotonState, b: PhotonState) -> PhotonState:
    """Product state of two states on disjoint spatial modes."""
    shared = a.modes() & b.modes()
    if shared:
        raise OverlappingModes(f"modes appear on both sides: {sorted(shared)}")
    out: dict[BasisState, complex] = {}
    for ba, aa in a.terms.items():
        for bb, ab in b.terms.items():
            occ = ba.as_dict()
            occ.update(bb.as_dict())
            key = BasisState.from_dict(occ)
            out[key] = out.get(key, 0j) + aa * ab
    return PhotonState(out, min(a.tolerance, b.tolerance))


def inner_product(a: PhotonState, b: PhotonState) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    small, large = (a, b) if a.num_terms() <= b.num_terms() else (b, a)
    total = 0j
    large_terms = large._terms
    for basis, amp in small._terms.items():
        other = large_terms.get(basis)
        if other is not None:
            if small is a:
                total += amp.conjugate() * other
            else:
                total += other.conjugate() * amp
    return total


SlotMap = dict[Slot, tuple[tuple[Slot, complex], ...]]


def transform_slots(state: PhotonState, mapping: SlotMap) -> PhotonState:
    """Rewrite each mapped creation operator as a linear combination.

    ``mapping[s]`` lists ``(target_slot, coefficient)`` pairs, meaning
    a†(s) -> sum coeff * a†(target).  Unmapped slots are untouched.  The
    result is exact for arbitrary occupations: each term is expanded as a
    product of creation operators acting on the unmapped remainder.
    """
    out: dict[BasisState, complex] = {}
    for basis, amp in state.terms.items():
        fixed: dict[Slot, int] = {}
        moving: list[tuple[Slot, int]] = []
        for slot, n in basis.occ:
            if slot in mapping:
                moving.append((slot, n))
            else:
                fixed[slot] = n
        if not moving:
            key = BasisState.from_dict(fixed)
            out[key] = out.get(key, 0j) + amp
            continue
        # |..n..> carries 1/sqrt(n!) relative to the bare operator product;
        # the engine below restores sqrt-factors one creation at a time.
        prefactor = amp
        for _, n in moving:
            prefactor /= math.sqrt(math.factorial(n))
        partial: dict[BasisState, complex] = {BasisState.from_dict(fixed): prefactor}
        for slot, n in moving:
            targets = mapping[slot]
            for _ in range(n):
                nxt: dict[BasisState, complex] = {}
                for pbasis, pamp in partial.items():
                    occ = pbasis.as_dict()
                    for target, coeff in targets:
                        if not coeff:
                            continue
                        k = occ.get(target, 0)
                        occ2 = dict(occ)
                        occ2[target] = k + 1
                        key = BasisState.from_dict(occ2)
                        nxt[key] = nxt.get(key, 0j) + pamp * coeff * math.sqrt(k + 1)
                partial = nxt
        for key, value in partial.items():
            out[key] = out.get(key, 0j) + value
    return PhotonState(out, state.tolerance)


def compose_slot_maps(first: SlotMap, second: SlotMap) -> SlotMap:
    """Slot map equivalent to applying ``first`` then ``second``."""
    out: SlotMap = {}
    for slot, targets in first.items():
        acc: dict[Slot, complex] = {}
        for mid, c1 in targets:
            for target, c2 in second.get(mid, ((mid, 1.0 + 0j),)):
                acc[target] = acc.get(target, 0j) + c1 * c2
        out[slot] = tuple(acc.items())
    for slot, targets in second.items():
        if slot not in out:
            out[slot] = targets
    return out


def rebase_map(mode: str, direction: str) -> SlotMap:
    """Slot map for the HV <-> FS change of basis on one spatial mode.

    Conventions: F = (H+V)/sqrt(2), S = (V-H)/sqrt(2), hence
    a†H = (a†F - a†S)/sqrt(2) and a†V = (a†F + a†S)/sqrt(2).
    """
    if direction == HV_TO_FS:
        return {
            (mode, POL_H): (((mode, POL_F), _SQRT_HALF), ((mode, POL_S), -_SQRT_HALF)),
            (mode, POL_V): (((mode, POL_F), _SQRT_HALF), ((mode, POL_S), _SQRT_HALF)),
        }
    if direction == FS_TO_HV:
        return {
            (mode, POL_F): (((mode, POL_H), _SQRT_HALF), ((mode, POL_V), _SQRT_HALF)),
            (mode, POL_S): (((mode, POL_H), -_SQRT_HALF), ((mode, POL_V), _SQRT_HALF)),
        }
    raise ValueError(f"unknown rebase direction: {direction!r}")


def rebase_polarization(state: PhotonState, mode: str, direction: str) -> PhotonState:
    """Rewrite the amplitudes of one spatial mode in the other polarization basis.

    A mode absent from the state is a no-op.  Round-tripping is the identity
    and the norm is preserved (the change of basis is unitary).
    """
    return transform_slots(state, rebase_map(mode, direction))


def states_close(a: PhotonState, b: PhotonState, tol: float = 1e-10) -> bool:
    keys = set(a.terms) | set(b.terms)
    return all(abs(a.amplitude(k) - b.amplitude(k)) <= tol for k in keys)
