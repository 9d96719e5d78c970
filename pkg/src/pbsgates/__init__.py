"""Probabilistic photonic logic gates from polarizing beam splitters."""

from . import circuit, dsl, errors, fock, gates, optics
from .circuit import CircuitSpec, DetectorSpec, FeedForwardRule, GateResult, execute
from .dsl import format_circuit, parse_circuit
from .fock import BasisState, PhotonState
from .gates import GateReport, QubitState, TwoQubitState

__version__ = "0.1.0"

__all__ = [
    "BasisState",
    "CircuitSpec",
    "DetectorSpec",
    "FeedForwardRule",
    "GateReport",
    "GateResult",
    "PhotonState",
    "QubitState",
    "TwoQubitState",
    "__version__",
    "circuit",
    "dsl",
    "errors",
    "execute",
    "fock",
    "format_circuit",
    "gates",
    "optics",
    "parse_circuit",
]
