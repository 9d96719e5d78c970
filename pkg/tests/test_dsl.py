"""Parser tests: shipped circuits, diagnostics, round-trip, mutation fuzz."""

import pytest

from pbsgates import dsl
from pbsgates.errors import (
    CircuitError,
    CircuitSyntaxError,
    DetectedModeReuse,
    MissingOutput,
    UndeclaredMode,
)
from pbsgates.gates import GATE_NAMES
from pbsgates.optics import PbsElement

from conftest import circuit_path

VALID = """\
# minimal two-detector circuit
mode 2'
mode a
mode 2
mode c
input qubit 2' 0.6 0 0.8 0
input qubit a 0.7071067811865476 0 0.7071067811865476 0
pbs hv 2' a 2 c
detect fs c as c
on c S do polphase 2 H 180
output 2
"""


def parse(text):
    return dsl.parse_circuit(text)


def test_parse_valid_document():
    spec = parse(VALID)
    assert spec.modes == ("2'", "a", "2", "c")
    assert len(spec.inputs) == 2
    assert isinstance(spec.elements[0], PbsElement)
    assert spec.detectors[0].label == "c"
    assert spec.rules[0].pol == "S"
    assert spec.outputs == ("2",)


def test_shipped_circuits_parse():
    for name in GATE_NAMES:
        with open(circuit_path(name), encoding="utf-8") as handle:
            spec = parse(handle.read())
        assert spec.outputs
        assert spec.detectors


def test_round_trip_shipped_circuits():
    for name in GATE_NAMES:
        with open(circuit_path(name), encoding="utf-8") as handle:
            spec = parse(handle.read())
        assert parse(dsl.format_circuit(spec)) == spec


def test_comments_and_blank_lines_ignored():
    spec = parse("# leading comment\n\n" + VALID + "\n   # trailing\n")
    assert spec == parse(VALID)


def test_crlf_accepted():
    assert parse(VALID.replace("\n", "\r\n")) == parse(VALID)


def diag(text):
    with pytest.raises(CircuitError) as info:
        parse(text)
    return info.value


def test_unknown_statement_position():
    err = diag("mode m\nsplit m\noutput m\n")
    assert isinstance(err, CircuitSyntaxError)
    assert (err.line, err.column) == (2, 1)


def test_undeclared_mode_position():
    err = diag("mode m\npbs hv m z m z\noutput m\n")
    assert isinstance(err, UndeclaredMode)
    assert (err.line, err.column) == (2, 10)


def test_duplicate_mode_declaration():
    err = diag("mode m\nmode m\noutput m\n")
    assert isinstance(err, CircuitSyntaxError)
    assert err.line == 2


def test_detected_mode_reuse():
    err = diag(
        "mode m\nmode n\ninput qubit m 1 0 0 0\n"
        "detect hv n as n\noutput n\n"
    )
    assert isinstance(err, DetectedModeReuse)
    assert err.line == 5


def test_bad_float_diagnostic():
    err = diag("mode m\ninput qubit m one 0 0 0\noutput m\n")
    assert isinstance(err, CircuitSyntaxError)
    assert (err.line, err.column) == (2, 15)


def test_missing_token_reports_after_last():
    err = diag("mode m\ninput qubit m 1 0 0\noutput m\n")
    assert isinstance(err, CircuitSyntaxError)
    assert err.line == 2


def test_trailing_token_rejected():
    err = diag("mode m\nmode n extra\noutput m\n")
    assert isinstance(err, CircuitSyntaxError)
    assert (err.line, err.column) == (2, 8)


def test_duplicate_detector_label():
    err = diag(
        "mode m\nmode n\ndetect hv m as z\ndetect hv n as z\noutput m\n"
    )
    assert isinstance(err, CircuitSyntaxError)
    assert err.line == 4


def test_rule_label_must_exist():
    err = diag("mode m\non z S do polphase m H 180\noutput m\n")
    assert isinstance(err, UndeclaredMode)


def test_rule_polarization_follows_detector_basis():
    err = diag(
        "mode m\nmode n\ndetect hv m as m\n"
        "on m S do polphase n H 180\noutput n\n"
    )
    assert isinstance(err, CircuitSyntaxError)


def test_missing_output():
    with pytest.raises(MissingOutput):
        parse("mode m\ninput qubit m 1 0 0 0\n")


def test_input_mode_used_twice():
    err = diag(
        "mode m\ninput qubit m 1 0 0 0\ninput qubit m 1 0 0 0\noutput m\n"
    )
    assert isinstance(err, CircuitSyntaxError)
    assert err.line == 3


def test_format_rejects_raw_input_specs():
    from pbsgates.gates import TwoQubitState, cnot

    spec = cnot(TwoQubitState(1.0, 0.0, 0.0, 0.0)).spec
    with pytest.raises(ValueError):
        dsl.format_circuit(spec)


def test_mutation_fuzz_never_crashes(rng):
    lines = VALID.splitlines()
    alphabet = list("abcxyz12'#; .-")
    for _ in range(1000):
        mutated = list(lines)
        op = rng.integers(4)
        idx = int(rng.integers(len(mutated)))
        if op == 0:
            del mutated[idx]
        elif op == 1:
            mutated.insert(idx, mutated[int(rng.integers(len(lines)))])
        elif op == 2:
            line = mutated[idx]
            if line:
                pos = int(rng.integers(len(line)))
                line = line[:pos] + alphabet[int(rng.integers(len(alphabet)))] + line[pos + 1:]
            mutated[idx] = line
        else:
            words = mutated[idx].split()
            if words:
                del words[int(rng.integers(len(words)))]
            mutated[idx] = " ".join(words)
        text = "\n".join(mutated)
        try:
            parse(text)
        except CircuitError as exc:
            assert exc.line is None or exc.line >= 1
            assert exc.column is None or exc.column >= 1
