"""Command-line contract: exit codes, formats, round-trips, determinism."""

import io
import json
from contextlib import redirect_stdout
from pathlib import Path

import pytest

from effalg.algfile import AlgebraFileError, dump_algebra, load_algebra, loads_algebra
from effalg.cli import main
from effalg.construct import boolean_algebra, chain, horizontal_sum, product
from effalg.enumeration import canonical_key

FIXTURES = Path(__file__).parent / "fixtures"

E5_TEXT = """\
version 1
elements 0 a a' b 1
zero 0
one 1
sum a a' = 1
sum b b = 1
"""


def run_cli(*argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(list(argv))
    return code, buf.getvalue()


@pytest.fixture
def e5_file(tmp_path):
    path = tmp_path / "e5.alg"
    path.write_text(E5_TEXT)
    return str(path)


class TestAlgebraFile:
    def test_load_explicit_table(self):
        E = loads_algebra(E5_TEXT)
        assert E.size == 5 and E.labels == ("0", "a", "a'", "b", "1")
        assert E.sum[1][2] == 4 and E.sum[3][3] == 4

    def test_one_sided_entry_completed(self):
        E = loads_algebra(E5_TEXT)
        assert E.sum[2][1] == 4  # only "sum a a' = 1" was written

    def test_construct_line(self):
        E = loads_algebra("version 1\nconstruct chain(3)\n")
        assert E.size == 4

    def test_parse_errors(self):
        bad = [
            "",  # no version
            "version 2\nelements 0 1\nzero 0\none 1\n",
            "version 1\nelements 0 0\nzero 0\none 0\n",
            "version 1\nelements 0 1\nzero 0\n",  # one missing
            "version 1\nelements 0 1\nzero 0\none 1\nsum 0 1 2\n",
            "version 1\nconstruct chain(3)\nelements 0 1\nzero 0\none 1\n",
            "version 1\nelements 0 a 1\nzero 0\none 1\nsum a a = 1\nsum a a = 0\n",
        ]
        for text in bad:
            with pytest.raises(AlgebraFileError):
                loads_algebra(text)

    def test_roundtrip_constructions(self):
        cases = [
            boolean_algebra(3),
            chain(4),
            horizontal_sum([boolean_algebra(2), chain(2)]),
            product([chain(2), boolean_algebra(1)]),
        ]
        for E in cases:
            back = loads_algebra(dump_algebra(E))
            assert canonical_key(back) == canonical_key(E)

    def test_comments_and_blank_lines(self):
        E = loads_algebra("# header\n\nversion 1  # trailing\nconstruct chain(2)\n")
        assert E.size == 3


class TestCheckCommand:
    def test_valid(self, e5_file):
        code, out = run_cli("check", e5_file)
        assert code == 0 and "valid" in out

    def test_axiom_violation_exits_2(self, tmp_path):
        path = tmp_path / "bad.alg"
        path.write_text("version 1\nelements 0 b 1\nzero 0\none 1\n"
                        "sum b b = 1\nsum 1 b = b\n")
        code, out = run_cli("check", str(path))
        assert code == 2 and "Eiv" in out

    def test_parse_error_exits_3(self, tmp_path):
        path = tmp_path / "junk.alg"
        path.write_text("widgets everywhere\n")
        code, out = run_cli("check", str(path))
        assert code == 3

    def test_json_mode(self, e5_file):
        code, out = run_cli("check", e5_file, "--json")
        data = json.loads(out)
        assert data["valid"] is True and data["violations"] == []


class TestAnalyzeCommand:
    def test_e5_report(self, e5_file):
        code, out = run_cli("analyze", e5_file, "--json")
        data = json.loads(out)
        assert code == 0
        assert data["flags"]["modular"] is True
        assert data["flags"]["orthomodular"] is False
        assert len(data["blocks"]) == 2
        assert data["sharp"] == ["0", "a", "a'", "1"]

    def test_dot_output(self, tmp_path):
        path = tmp_path / "c4.alg"
        path.write_text("version 1\nconstruct chain(3)\n")
        code, out = run_cli("analyze", str(path), "--dot", "-")
        assert code == 0
        dot = out[out.index("digraph"):]
        assert dot.count("->") == 3  # the 4-chain cover graph is a path
        assert "peripheries=2" in dot  # sharp endpoints marked

    def test_invalid_algebra_exits_2(self, tmp_path):
        path = tmp_path / "bad.alg"
        path.write_text("version 1\nelements 0 x 1\nzero 0\none 1\n")
        code, _ = run_cli("analyze", str(path))
        assert code == 2  # x has no orthosupplement


class TestStatesCommand:
    def test_subadditive_halves(self, e5_file):
        code, out = run_cli("states", e5_file, "--subadditive", "--json")
        data = json.loads(out)
        assert code == 0
        assert data["state"] == {"0": "0/1", "a": "1/2", "a'": "1/2",
                                 "b": "1/2", "1": "1/1"}

    def test_stateless_fixture_exits_4_with_certificate(self):
        code, out = run_cli("states", str(FIXTURES / "stateless9.alg"), "--json")
        data = json.loads(out)
        assert code == 4
        assert data["feasible"] is False
        assert data["certificate"]  # nonempty multiplier list

    def test_exstate_on_boolean_exits_5(self, tmp_path):
        path = tmp_path / "b2.alg"
        path.write_text("version 1\nconstruct boolean(2)\n")
        code, out = run_cli("states", str(path), "--via-exstate")
        assert code == 5 and "S(E)" in out

    def test_subadditive_on_non_lattice_exits_5(self, tmp_path):
        path = tmp_path / "hex.alg"
        path.write_text(
            "version 1\nelements 0 a b c d 1\nzero 0\none 1\n"
            "sum a a = d\nsum a b = c\nsum a d = 1\n"
            "sum b b = d\nsum b c = 1\n")
        code, out = run_cli("states", str(path), "--subadditive")
        assert code == 5
        code, out = run_cli("states", str(path), "--json")
        assert code == 0 and json.loads(out)["feasible"] is True

    def test_exstate_trace_json(self, e5_file):
        code, out = run_cli("states", e5_file, "--via-exstate", "--json")
        data = json.loads(out)
        assert code == 0
        assert data["trace"]["branch"] == "dichotomy"
        assert data["trace"]["atom"] == "b"
        assert data["trace"]["central"] == "1"


class TestEnumerateCommand:
    def test_count_three_at_four(self):
        code, out = run_cli("enumerate", "4", "--json")
        assert code == 0 and json.loads(out)["count"] == 3

    def test_count_one_at_three(self):
        code, out = run_cli("enumerate", "3", "--json")
        assert json.loads(out)["count"] == 1

    def test_find_stateless_none_at_eight(self):
        code, out = run_cli("enumerate", "8", "--find-stateless")
        assert code == 0 and "NoneFound" in out

    def test_budget_exhaustion_exits_6_and_resumes(self, tmp_path):
        cp = tmp_path / "cp.json"
        code, out = run_cli("enumerate", "7", "--budget-nodes", "40",
                            "--checkpoint", str(cp))
        assert code == 6 and cp.exists()
        code, out = run_cli("enumerate", "7", "--checkpoint", str(cp), "--json")
        assert code == 0
        # resumed run only counts the classes not already covered before the
        # cut, so the total must not exceed the full count
        assert 0 < json.loads(out)["count"] <= 14

    def test_show_prints_files(self):
        code, out = run_cli("enumerate", "3", "--show")
        assert "elements" in out and "sum" in out

    def test_filters(self):
        code, out = run_cli("enumerate", "6", "--lattice-only", "--json")
        assert json.loads(out)["count"] == 9  # the hexagon family drops out
        code, out = run_cli("enumerate", "6", "--modular-only", "--json")
        assert json.loads(out)["count"] == 5


class TestTheoremsCommand:
    def test_e5_all_rows_pass(self, e5_file):
        code, out = run_cli("theorems", e5_file, "--json")
        data = json.loads(out)
        assert code == 0
        assert len(data["claims"]) == 20
        assert all(c["verdict"] in ("holds", "hypotheses unmet")
                   for c in data["claims"])
        assert len(data["scale_limited"]) == 3

    def test_sweep_five_passes(self):
        code, out = run_cli("theorems", "--sweep", "5", "--json")
        data = json.loads(out)
        assert code == 0
        assert all(row["passed"] for row in data["claims"])

    def test_corrupted_file_exits_2(self, tmp_path):
        path = tmp_path / "bad.alg"
        path.write_text("version 1\nelements 0 x 1\nzero 0\none 1\n")
        code, _ = run_cli("theorems", str(path))
        assert code == 2

    def test_claim_failure_exits_7(self, e5_file, monkeypatch):
        import effalg.theorems as th

        fake = th._Claim("always fails", (), lambda E: (False, ("boom",)))
        monkeypatch.setitem(th._REGISTRY, "test.fake", fake)
        monkeypatch.setattr(th, "CLAIM_IDS", tuple(th._REGISTRY))
        import effalg.cli as cli
        monkeypatch.setattr(cli, "CLAIM_IDS", tuple(th._REGISTRY))
        code, out = run_cli("theorems", e5_file)
        assert code == 7 and "FAILS" in out


class TestDeterminism:
    def test_json_outputs_are_byte_identical(self, e5_file):
        for argv in (
            ("analyze", e5_file, "--json"),
            ("states", e5_file, "--subadditive", "--json"),
            ("theorems", e5_file, "--json"),
            ("enumerate", "5", "--json"),
        ):
            first = run_cli(*argv)
            second = run_cli(*argv)
            assert first == second
