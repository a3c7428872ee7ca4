from pathlib import Path

from click.testing import CliRunner

from main import cli

DATA = Path(__file__).resolve().parent.parent / "data"


def run(*args):
    return CliRunner().invoke(cli, [str(a) for a in args])


def test_check_passes_on_chain():
    result = run("check", DATA / "chain3.json", "--suite", "theorems")
    assert result.exit_code == 0
    assert '"suite": "strict_multi_utility"' in result.output


def test_check_writes_report_file(tmp_path):
    out = tmp_path / "report.json"
    result = run("check", DATA / "figure1.json", "--out", out)
    assert result.exit_code == 0
    assert '"debreu_dense"' in out.read_text(encoding="utf-8")


def test_check_is_deterministic_for_a_seed():
    first = run("check", DATA / "diamond.json", "--seed", 3)
    second = run("check", DATA / "diamond.json", "--seed", 3)
    assert first.output == second.output


def test_cycle_exits_with_input_error():
    result = run("check", DATA / "cycle.json")
    assert result.exit_code == 2
    assert "AntisymmetryViolation" in result.output


def test_enumerate_unit_rationals():
    result = run("enumerate", "rationals01", "--count", 5)
    assert result.output.splitlines() == ["0", "1", "1/2", "1/3", "2/3"]


def test_enumerate_strings():
    result = run("enumerate", "cantor-strings", "--count", 4)
    assert result.output.splitlines() == ["ε", "0", "1", "00"]


def test_emit_majorization():
    result = run("emit", "majorization", "--steps", 3)
    assert result.output.splitlines() == ["0", "1", "0"]


def test_emit_decodes_pairs():
    result = run("emit", "rationals01", "--steps", 2, "--decode")
    assert result.output.splitlines()[1] == "1\t0 <= 1"


def test_approx_majorization():
    result = run("approx", "majorization", "(1/2,1/2,0)")
    assert result.output.strip() == "(19/42,19/42,2/21)"


def test_approx_rejects_bottom():
    result = run("approx", "majorization", "(1/3,1/3,1/3)")
    assert result.exit_code == 2
    assert "BottomInput" in result.output


def test_approx_real():
    result = run("approx", "real", "sqrt2", "--width", "1/1024")
    assert result.exit_code == 0
    assert result.output.strip() == "[181/128,1449/1024]"


def test_approx_unknown_real():
    result = run("approx", "real", "pi")
    assert result.exit_code == 2


def test_demo_real():
    result = run("demo", "real", "--steps", 3, "--emissions", 50)
    assert result.exit_code == 0
    assert result.output.splitlines()[0] == "0\t[1,2]\twidth 1"


def test_demo_majorization():
    result = run("demo", "majorization", "(1/2,1/2,0)", "--steps", 2, "--emissions", 50)
    assert result.exit_code == 0
    assert result.output.splitlines()[0].startswith("0\t(")


def test_gallery():
    result = run("gallery")
    assert result.exit_code == 0
    assert "two_interval_grid" in result.output
    assert "[FAILED]" not in result.output
