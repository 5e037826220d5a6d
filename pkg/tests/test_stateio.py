import io
import warnings

import numpy as np
import pytest

from qptrace import (
    DensityMatrix,
    FormatError,
    InvalidValue,
    QubitLayout,
    StateVector,
    TruncatedFile,
    ValidationFailed,
    parse_state_file,
    write_state_file,
)
from qptrace.states import random_mixed, random_pure, singlet_product
from qptrace.stateio import NormalizationWarning, write_state_binary, write_state_text


def write_lines(path, lines):
    path.write_text("\n".join(lines) + "\n")


SINGLET_LINES = [
    "QSTATE 1 PURE 2",
    "0 0",
    "0.70710678118 0",
    "-0.70710678118 0",
    "0 0",
]


class TestTextFormat:
    def test_singlet_file(self, tmp_path):
        f = tmp_path / "singlet.qst"
        write_lines(f, SINGLET_LINES)
        state = parse_state_file(f)
        assert isinstance(state, StateVector)
        assert state.layout.n_qubits == 2
        np.testing.assert_allclose(
            state.amplitudes,
            [0, 0.70710678118, -0.70710678118, 0],
        )

    def test_pair_product_file(self, tmp_path):
        # +-1/2 amplitudes at basis indices 5, 6, 9, 10
        amps = {5: "0.5", 6: "-0.5", 9: "-0.5", 10: "0.5"}
        lines = ["QSTATE 1 PURE 4", "# two singlet pairs"]
        lines += [f"{amps.get(k, '0')} 0" for k in range(16)]
        f = tmp_path / "pairs.qst"
        write_lines(f, lines)
        state = parse_state_file(f)
        assert state.norm_defect() < 1e-11
        np.testing.assert_allclose(
            state.amplitudes, singlet_product().amplitudes, atol=1e-15
        )

    def test_comments_and_blank_lines_skipped(self, tmp_path):
        f = tmp_path / "c.qst"
        write_lines(
            f,
            ["# leading comment", "", "QSTATE 1 PURE 1", "# half", "1 0", "", "0 0"],
        )
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            state = parse_state_file(f)
        assert state.amplitudes[0] == 1.0

    def test_scientific_notation(self, tmp_path):
        f = tmp_path / "s.qst"
        write_lines(f, ["QSTATE 1 PURE 1", "1.0e0 0e0", "0E0 -0.0e+1"])
        assert parse_state_file(f).amplitudes[0] == 1.0

    def test_empty_file(self, tmp_path):
        f = tmp_path / "empty.qst"
        f.write_text("")
        with pytest.raises(FormatError):
            parse_state_file(f)

    def test_bad_header(self, tmp_path):
        for header in ["QSTATE 2 PURE 1", "QSTATE 1 SPAM 1", "QSTATE 1 PURE", "NOPE"]:
            f = tmp_path / "bad.qst"
            write_lines(f, [header, "1 0", "0 0"])
            with pytest.raises(FormatError):
                parse_state_file(f)

    def test_truncated_payload(self, tmp_path):
        f = tmp_path / "t.qst"
        write_lines(f, ["QSTATE 1 PURE 2", "1 0"])
        with pytest.raises(TruncatedFile):
            parse_state_file(f)

    def test_excess_payload(self, tmp_path):
        f = tmp_path / "x.qst"
        write_lines(f, ["QSTATE 1 PURE 1", "1 0", "0 0", "0 0"])
        with pytest.raises(FormatError):
            parse_state_file(f)

    def test_malformed_value_line(self, tmp_path):
        f = tmp_path / "m.qst"
        write_lines(f, ["QSTATE 1 PURE 1", "1 0 0", "0 0"])
        with pytest.raises(FormatError):
            parse_state_file(f)

    def test_nan_rejected(self, tmp_path):
        f = tmp_path / "n.qst"
        write_lines(f, ["QSTATE 1 PURE 1", "nan 0", "0 0"])
        with pytest.raises(InvalidValue):
            parse_state_file(f)


class TestNormalization:
    def test_warns_by_default(self, tmp_path):
        f = tmp_path / "u.qst"
        write_lines(f, ["QSTATE 1 PURE 1", "1 0", "1 0"])
        with pytest.warns(NormalizationWarning):
            parse_state_file(f)

    def test_strict_raises(self, tmp_path):
        f = tmp_path / "u.qst"
        write_lines(f, ["QSTATE 1 PURE 1", "1 0", "1 0"])
        with pytest.raises(ValidationFailed):
            parse_state_file(f, strict=True)


class TestRoundTrips:
    def test_text_round_trip_is_lossless(self, tmp_path):
        psi = random_pure(5, 1)
        f = tmp_path / "r.qst"
        write_state_file(f, psi, "text")
        back = parse_state_file(f)
        # 17 significant digits reproduce every double exactly
        np.testing.assert_array_equal(back.amplitudes, psi.amplitudes)

    def test_binary_round_trip_bit_exact(self, tmp_path):
        for state in (random_pure(6, 2), random_mixed(3, 3)):
            f = tmp_path / "r.qsb"
            write_state_file(f, state, "binary")
            back = parse_state_file(f)
            if isinstance(state, StateVector):
                assert back.amplitudes.tobytes() == state.amplitudes.tobytes()
            else:
                assert back.entries.tobytes() == state.entries.tobytes()

    def test_mixed_text_round_trip(self, tmp_path):
        rho = random_mixed(2, 4)
        f = tmp_path / "m.qst"
        write_state_file(f, rho, "text")
        back = parse_state_file(f)
        assert isinstance(back, DensityMatrix)
        np.testing.assert_array_equal(back.entries, rho.entries)

    def test_stream_writers(self):
        psi = random_pure(2, 5)
        text = io.StringIO()
        write_state_text(text, psi)
        assert text.getvalue().startswith("QSTATE 1 PURE 2\n")
        blob = io.BytesIO()
        write_state_binary(blob, psi)
        assert blob.getvalue()[:4] == b"QST1"


class TestBinaryFormat:
    def header(self, kind=0, n=1, r0=0, r1=0):
        return b"QST1" + bytes([kind, n, r0, r1])

    def payload(self, values):
        return np.asarray(values, dtype="<c16").tobytes()

    def test_reserved_bytes_must_be_zero(self, tmp_path):
        f = tmp_path / "b.qsb"
        f.write_bytes(self.header(r0=1) + self.payload([1, 0]))
        with pytest.raises(FormatError):
            parse_state_file(f)

    def test_bad_magic_falls_back_to_text_parse(self, tmp_path):
        f = tmp_path / "b.qsb"
        f.write_bytes(b"QSTX" + bytes(4))
        with pytest.raises(FormatError):
            parse_state_file(f)

    def test_short_payload(self, tmp_path):
        f = tmp_path / "b.qsb"
        f.write_bytes(self.header(n=2) + self.payload([1, 0]))
        with pytest.raises(TruncatedFile):
            parse_state_file(f)

    def test_trailing_bytes(self, tmp_path):
        f = tmp_path / "b.qsb"
        f.write_bytes(self.header() + self.payload([1, 0]) + b"x")
        with pytest.raises(FormatError):
            parse_state_file(f)

    def test_unknown_kind(self, tmp_path):
        f = tmp_path / "b.qsb"
        f.write_bytes(self.header(kind=7) + self.payload([1, 0]))
        with pytest.raises(FormatError):
            parse_state_file(f)

    def test_infinite_value(self, tmp_path):
        f = tmp_path / "b.qsb"
        f.write_bytes(self.header() + self.payload([np.inf, 0]))
        with pytest.raises(InvalidValue):
            parse_state_file(f)


def test_write_rejects_non_power_of_two_matrix(tmp_path):
    rho = DensityMatrix(np.eye(3) / 3)
    with pytest.raises(FormatError):
        write_state_file(tmp_path / "bad.qst", rho, "text")
