"""Command-line front end: run built-in gates or circuit files, emit JSON.

Exit codes: 0 success, 2 validation/config error, 3 circuit parse error.
Reports are deterministic: outcomes and state terms are emitted in a fixed
canonical order, so identical invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import __version__, dsl, fock, gates
from .circuit import CircuitSpec, execute, pattern_name
from .errors import CircuitError, PbsGatesError
from .gates import QubitState, TwoQubitState

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARSE = 3

TOLERANCE_ENV = "PBSGATES_AMP_TOLERANCE"


def _tolerance() -> float:
    raw = os.environ.get(TOLERANCE_ENV)
    if raw is None:
        return fock.DEFAULT_TOLERANCE
    try:
        return float(raw)
    except ValueError:
        raise _config_error(
            f"{TOLERANCE_ENV} must be a float, got {raw!r}"
        ) from None


def _normalize(values: list[float], what: str) -> list[complex]:
    amps = [complex(values[i], values[i + 1]) for i in range(0, len(values), 2)]
    norm2 = sum(abs(a) ** 2 for a in amps)
    dev = abs(norm2 - 1.0)
    if dev > 1e-6:
        print(f"error: {what} amplitudes are not normalized "
              f"(squared norm {norm2!r})", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)
    if dev > 1e-9:
        print(f"warning: renormalizing {what} amplitudes "
              f"(squared norm {norm2!r})", file=sys.stderr)
        scale = 1.0 / math.sqrt(norm2)
        amps = [a * scale for a in amps]
    return amps


def _state_terms(state: fock.PhotonState) -> list[dict]:
    return [
        {
            "occupations": basis.key_string(),
            "re": amp.real,
            "im": amp.imag,
        }
        for basis, amp in state.sorted_terms()
    ]


def _report_document(name, result, detectors, fidelities, input_doc) -> dict:
    outcomes = []
    for pattern in sorted(result.outcomes):
        probability, state = result.outcomes[pattern]
        entry = {
            "pattern": pattern_name(pattern, detectors),
            "probability": probability,
            "output_state": _state_terms(state),
        }
        if fidelities is not None:
            entry["fidelity_to_target"] = fidelities.get(pattern)
        outcomes.append(entry)
    return {
        "schema": 1,
        "gate": name,
        "input": input_doc,
        "outcomes": outcomes,
        "success_probability": result.success_probability,
        "failure_probability": result.failure_probability,
        "engine_version": __version__,
    }


def _run_gate(args) -> dict:
    name = args.gate
    passive = args.passive
    if name in ("parity_check", "encoder"):
        if args.qubit is None:
            raise _config_error(f"{name} needs --qubit")
        a_h, a_v = _normalize(args.qubit, "qubit")
        report = getattr(gates, name)(QubitState(a_h, a_v), passive=passive)
        input_doc = {"qubit": [a_h.real, a_h.imag, a_v.real, a_v.imag]}
    elif name == "destructive_cnot":
        if args.qubit is None:
            raise _config_error("destructive_cnot needs --qubit (the target)")
        a_h, a_v = _normalize(args.qubit, "qubit")
        control = (
            QubitState(0.0, 1.0) if args.control_pol == "V" else QubitState(1.0, 0.0)
        )
        report = gates.destructive_cnot(QubitState(a_h, a_v), control, passive=passive)
        input_doc = {
            "qubit": [a_h.real, a_h.imag, a_v.real, a_v.imag],
            "control_pol": args.control_pol,
        }
    elif name in ("cnot", "gc_cnot"):
        if args.two_qubit is None:
            raise _config_error(f"{name} needs --two-qubit")
        amps = _normalize(args.two_qubit, "two-qubit")
        report = getattr(gates, name)(TwoQubitState(*amps), passive=passive)
        input_doc = {
            "two_qubit": [x for a in amps for x in (a.real, a.imag)]
        }
    elif name == "chi_via_cnot":
        report = gates.chi_via_cnot(passive=passive)
        input_doc = {}
    else:
        raise _config_error(f"unknown gate {name!r}; choose from {gates.GATE_NAMES}")
    return _report_document(
        name, report.result, report.spec.detectors, report.fidelities, input_doc
    )


def _config_error(message: str) -> SystemExit:
    print(f"error: {message}", file=sys.stderr)
    return SystemExit(EXIT_CONFIG)


def _load_circuit(path: str) -> CircuitSpec:
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG) from None
    try:
        return dsl.parse_circuit(text)
    except CircuitError as exc:
        print(f"{path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE) from None


def cmd_run(args) -> int:
    if (args.gate is None) == (args.circuit is None):
        raise _config_error("provide exactly one of --gate or --circuit")
    fock.set_default_tolerance(_tolerance())
    if args.gate is not None:
        document = _run_gate(args)
    else:
        spec = _load_circuit(args.circuit)
        try:
            result = execute(spec, passive=args.passive, tolerance=_tolerance())
        except PbsGatesError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        document = _report_document(
            args.circuit, result, spec.detectors, None, {"circuit": args.circuit}
        )
    text = json.dumps(document, indent=2, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check(args) -> int:
    spec = _load_circuit(args.circuit_file)
    print(
        f"{args.circuit_file}: ok "
        f"({len(spec.modes)} modes, {len(spec.elements)} elements, "
        f"{len(spec.detectors)} detectors)"
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pbsgates",
        description="Simulate probabilistic photonic logic gates built from "
        "polarizing beam splitters, post-selection, and feed-forward.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a built-in gate or a circuit file")
    run.add_argument("--gate", help=f"built-in gate name: {', '.join(gates.GATE_NAMES)}")
    run.add_argument("--circuit", help="path to a circuit description file")
    run.add_argument(
        "--qubit",
        nargs=4,
        type=float,
        metavar=("RE_AH", "IM_AH", "RE_AV", "IM_AV"),
        help="single-qubit input amplitudes",
    )
    run.add_argument(
        "--two-qubit",
        nargs=8,
        type=float,
        metavar=tuple(f"{p}_{c}" for c in ("A1", "A2", "A3", "A4") for p in ("RE", "IM")),
        help="two-qubit input amplitudes (HH, HV, VH, VV)",
    )
    run.add_argument(
        "--control-pol",
        choices=("H", "V"),
        default="H",
        help="control photon polarization for destructive_cnot",
    )
    run.add_argument(
        "--passive",
        action="store_true",
        help="accept only the outcome needing no feed-forward correction",
    )
    run.add_argument("--output", help="write the JSON report here instead of stdout")
    run.set_defaults(func=cmd_run)

    check = sub.add_parser("check", help="parse and validate a circuit file")
    check.add_argument("circuit_file")
    check.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
