"""
Command-line tests: subcommands, output formats, exit codes and error documents.
"""
import json
from math import log

import pytest
from loguru import logger

from symcomplex.main import main
from symcomplex.schemas.reports import IntricacyResult
from symcomplex.services import report_writer


@pytest.fixture(autouse=True)
def reset_logging():
    """Drop sinks bound to the captured streams."""
    yield
    logger.remove()


def run(capsys, *argv):
    """Run the CLI and return (exit code, stdout, stderr)."""
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def error_of(err: str) -> dict:
    line = next(line for line in err.splitlines() if line.startswith('{"error"'))
    return json.loads(line)["error"]


class TestGenCommand:
    """symcomplex gen"""

    def test_named_sequence(self, capsys):
        """Fibonacci prefix on stdout."""
        code, out, _ = run(capsys, "gen", "--name", "fibonacci", "--length", "13")
        assert code == 0
        assert out == "0100101001001\n"

    def test_header(self, capsys):
        """--header adds the alphabet line."""
        _, out, _ = run(capsys, "gen", "--name", "morse", "--length", "8", "--header")
        assert out == "#alphabet:01\n01101001\n"

    def test_upper_mechanical(self, capsys):
        """Continued-fraction slope, upper variant."""
        _, out, _ = run(capsys, "gen", "--mechanical", "--cf", "0,2,1,1,1,1,1", "--length", "10", "--upper")
        assert out == "1010010100\n"

    def test_substitution(self, capsys):
        """Images given inline."""
        _, out, _ = run(capsys, "gen", "--substitution", "0=0010,1=1", "--start", "0", "--length", "13")
        assert out == "0010001010010\n"

    def test_json_spec(self, capsys):
        """Generator spec as JSON, JSON output."""
        spec = '{"kind": "named", "name": "periodic", "block": "01", "length": 4}'
        _, out, _ = run(capsys, "gen", "--spec", spec, "--format", "json")
        assert json.loads(out) == {"sequence": "0101", "length": 4, "alphabet": ["0", "1"]}

    def test_non_prolongable_exit_code(self, capsys):
        """Domain errors exit 2 with a JSON document on stderr."""
        code, out, err = run(capsys, "gen", "--substitution", "0=10,1=0", "--start", "0", "--length", "5")
        assert code == 2
        assert out == ""
        error = error_of(err)
        assert error["type"] == "NonProlongableError"
        assert error["status"] == 2

    def test_missing_length(self, capsys):
        """--length is required outside --spec."""
        code, _, err = run(capsys, "gen", "--name", "fibonacci")
        assert code == 2
        assert error_of(err)["type"] == "InvalidInputError"

    def test_invalid_spec(self, capsys):
        """Schema violations exit 2 as validation errors."""
        code, _, err = run(capsys, "gen", "--spec", '{"kind": "named", "name": "morse"}')
        assert code == 2
        assert error_of(err)["type"] == "ValidationError"

    def test_out_file(self, capsys, tmp_path):
        """--out writes the file and leaves stdout empty."""
        path = tmp_path / "nested" / "fib.txt"
        code, out, _ = run(capsys, "gen", "--name", "fibonacci", "--length", "5", "--out", str(path))
        assert code == 0
        assert out == ""
        assert path.read_text() == "01001\n"


class TestComplexityCommand:
    """symcomplex complexity"""

    def test_inline_word_json(self, capsys):
        """p(1..4) of the Morse prefix of length 16."""
        code, out, _ = run(
            capsys, "complexity", "--word", "0110100110010110", "--nmax", "4", "--measures", "p", "--format", "json"
        )
        assert code == 0
        reports = json.loads(out)
        assert reports[0]["measure"] == "p"
        assert reports[0]["values"] == [2, 4, 6, 10]

    def test_named_csv(self, capsys):
        """Wide CSV with one column per measure."""
        _, out, _ = run(capsys, "complexity", "--name", "fibonacci", "--length", "300", "--nmax", "3", "--measures", "p,pal")
        lines = [line for line in out.splitlines() if not line.startswith("#")]
        assert lines == ["n,p,pal", "1,2,2", "2,3,1", "3,4,2"]

    def test_sequence_file(self, capsys, tmp_path):
        """The first sequence of a file is measured."""
        path = tmp_path / "seq.txt"
        path.write_text("#alphabet:01\n0101010101\n0000\n")
        _, out, _ = run(capsys, "complexity", "--file", str(path), "--nmax", "2", "--measures", "p", "--format", "json")
        assert json.loads(out)[0]["values"] == [2, 2]

    def test_two_sources_rejected(self, capsys):
        """A word and a name together are invalid."""
        code, _, _ = run(capsys, "complexity", "--word", "0101", "--name", "morse", "--length", "8")
        assert code == 2


class TestSftCommand:
    """symcomplex sft"""

    def test_info(self, capsys):
        """Block counts, entropy and mixing of the golden mean shift."""
        code, out, _ = run(capsys, "sft", "info", "--sft", "golden", "--nmax", "5")
        assert code == 0
        info = json.loads(out)
        assert info["de_bruijn_irreducible"] == {"2": True, "3": True, "4": True, "5": True}
        assert info["block_counts"] == [2, 3, 5, 8, 13]
        assert info["primitive_exponent"] == 2
        assert info["power_positive"] is True
        assert abs(info["entropy"] - 0.481211825) < 1e-8

    def test_pattern(self, capsys):
        """N({0, 2}) = 4."""
        _, out, _ = run(capsys, "sft", "pattern", "--sft", "golden", "--set", "0,2")
        assert json.loads(out)["count"] == 4

    def test_parry(self, capsys):
        """The Parry measure reaches the topological entropy."""
        _, out, _ = run(capsys, "sft", "parry", "--sft", "golden", "--format", "json")
        evaluation = json.loads(out)
        assert abs(evaluation["h"] - evaluation["metadata"]["entropy_top"]) < 1e-9

    def test_unknown_sft(self, capsys):
        """Unknown names exit 2."""
        code, _, err = run(capsys, "sft", "info", "--sft", "carpet")
        assert code == 2
        assert "carpet" in error_of(err)["message"]


class TestIntricacyCommand:
    """symcomplex intricacy"""

    def test_series(self, capsys):
        """Full 2-shift: Asc = log 2 / 2."""
        _, out, _ = run(capsys, "intricacy", "--sft", "full2", "--mode", "series")
        payload = json.loads(out)
        assert abs(payload["asc"] - log(2) / 2) < 1e-9
        assert payload["method"] == "series"

    def test_series_precondition_exit_code(self, capsys):
        """period2 has no positive power: exit 4."""
        code, _, err = run(capsys, "intricacy", "--sft", "period2", "--mode", "series")
        assert code == 4
        assert error_of(err)["type"] == "PreconditionError"

    def test_profile_csv(self, capsys):
        """One row per n."""
        _, out, _ = run(capsys, "intricacy", "--sft", "golden", "--mode", "profile", "--nmax", "4", "--format", "csv")
        rows = [line for line in out.splitlines() if not line.startswith("#")]
        assert rows[0] == "n,asc,int,int_identity"
        assert len(rows) == 5

    def test_finite_weights(self, capsys):
        """Neural weights at n = 6."""
        _, out, _ = run(capsys, "intricacy", "--sft", "golden", "--mode", "finite", "--n", "6", "--weights", "neural")
        result = json.loads(out)
        assert result["weights"] == "neural"
        assert result["n"] == 6

    def test_budget_exit_code(self, capsys):
        """A profile past the brute-force limit exits 3."""
        code, _, _ = run(capsys, "intricacy", "--sft", "period2", "--mode", "profile", "--nmax", "60")
        assert code == 3


class TestMarkovCommand:
    """symcomplex markov"""

    def test_eval(self, capsys):
        """Lower-case parameter names are accepted."""
        _, out, _ = run(capsys, "markov", "eval", "--sft", "golden", "--params", "p00=0.618", "--format", "json")
        evaluation = json.loads(out)
        assert abs(evaluation["h"] - 0.481) < 2e-3
        assert evaluation["parameters"] == {"P00": 0.618}

    def test_eval_with_brute_force(self, capsys):
        """Finite-n values are added to the metadata."""
        _, out, _ = run(
            capsys, "markov", "eval", "--sft", "golden", "--order", "2",
            "--params", "P000=0.483,P100=0.569", "--brute", "8", "--format", "json",
        )
        metadata = json.loads(out)["metadata"]
        assert metadata["brute_n"] == 8
        assert metadata["brute_asc"] > 0

    def test_forbidden_parameter(self, capsys):
        """Mass on 11 exits 2."""
        code, _, _ = run(capsys, "markov", "eval", "--sft", "golden", "--params", "P00=0.5,P11=0.2")
        assert code == 2

    def test_table(self, capsys):
        """Computed values next to the reference values."""
        _, out, _ = run(capsys, "markov", "table", "--which", "golden1", "--format", "json")
        table = json.loads(out)
        assert table["table"] == "golden1"
        assert len(table["rows"]) == 3
        for row in table["rows"]:
            assert abs(row["h"] - row["h_reference"]) < 2e-3

    def test_optimize(self, capsys):
        """Entropy maximum of the golden 1-step family."""
        _, out, _ = run(
            capsys, "markov", "optimize", "--sft", "golden", "--target", "entropy", "--grid", "0.1", "--format", "json"
        )
        report = json.loads(out)
        assert abs(report["maxima"][0]["parameters"]["P00"] - 0.618034) < 1e-4

    def test_optimize_budget(self, capsys):
        """Too many grid probes exit 3 with the budget in the details."""
        code, _, err = run(capsys, "markov", "optimize", "--sft", "full2", "--target", "int", "--budget", "10")
        assert code == 3
        assert error_of(err)["details"]["budget"] == 10


class TestParser:
    """argparse behavior."""

    def test_unknown_command(self):
        """argparse exits 2 on unknown subcommands."""
        with pytest.raises(SystemExit) as info:
            main(["compress"])
        assert info.value.code == 2

    def test_version(self, capsys):
        """--version prints and exits 0."""
        with pytest.raises(SystemExit) as info:
            main(["--version"])
        assert info.value.code == 0
        assert "symcomplex" in capsys.readouterr().out


class TestReportWriter:
    """Number formatting of CSV and JSON output."""

    def test_significant_digits(self):
        """Rounding keeps the requested significant digits."""
        assert report_writer.round_significant(0.123456789, 3) == 0.123
        assert report_writer.round_significant(0.0, 3) == 0.0

    def test_non_finite_becomes_null(self):
        """JSON has no infinities."""
        assert report_writer.to_jsonable({"a": float("-inf")}) == {"a": None}

    def test_models_use_aliases(self):
        """int_ is written as int."""
        result = IntricacyResult(asc=0.25, int=0.125, n=3, method="brute")
        assert report_writer.to_jsonable(result)["int"] == 0.125

    def test_csv_comments_and_cells(self):
        """Comment lines, six significant digits, lower-case booleans, empty None."""
        text = report_writer.render_csv(
            [{"n": 1, "x": 1 / 3, "ok": True, "gap": None}], comments=["sft=golden"]
        )
        assert text == "# sft=golden\nn,x,ok,gap\n1,0.333333,true,\n"
