"""Tests for the command-line front end."""

import importlib.resources

import pytest

from tmprover import cli

FIXTURES = importlib.resources.files("tmprover") / "fixtures"


def run_cli(*argv):
    return cli.main([str(a) for a in argv])


def machine_section(captured: str) -> dict[str, str]:
    pairs = {}
    for line in captured.splitlines():
        if "=" in line and " " not in line.split("=", 1)[0]:
            key, _, value = line.partition("=")
            pairs[key] = value
    return pairs


@pytest.fixture(scope="module")
def thm1_script():
    return str(FIXTURES / "paper_thm1.wal")


def test_prove_thm1_fixture(capsys, thm1_script):
    code = run_cli("prove", thm1_script,
                   "--expected", str(FIXTURES / "paper_thm1.expected"))
    out = capsys.readouterr().out
    assert code == 0
    pairs = machine_section(out)
    assert pairs["cmd.alloccur.verdict"] == "TRUE"
    assert pairs["cmd.checkeach.verdict"] == "TRUE"
    assert pairs["overall"] == "pass"


def test_prove_thm2_fixture(capsys):
    code = run_cli("prove", str(FIXTURES / "paper_thm2.wal"),
                   "--expected", str(FIXTURES / "paper_thm2.expected"))
    assert code == 0
    assert machine_section(capsys.readouterr().out)["cmd.checklen.verdict"] \
        == "TRUE"


def test_prove_counting_script(capsys):
    code = run_cli("prove", str(FIXTURES / "paper_count.wal"),
                   "--expected", str(FIXTURES / "paper_count.expected"))
    assert code == 0
    pairs = machine_section(capsys.readouterr().out)
    assert pairs["cmd.mab.verdict"] == "n/a"
    assert pairs["cmd.mab.kind"] == "eval_count"


def test_prove_mismatch_exit_code(tmp_path, capsys, thm1_script):
    expected = tmp_path / "wrong.expected"
    expected.write_text("alloccur=FALSE\n")
    code = run_cli("prove", thm1_script, "--expected", str(expected))
    out = capsys.readouterr().out
    assert code == 1
    assert "MISMATCH" in out
    assert machine_section(out)["overall"] == "fail"


def test_prove_script_error_exit_code(tmp_path, capsys):
    script = tmp_path / "broken.wal"
    script.write_text('eval q "$missing(x)":\n')
    expected = tmp_path / "broken.expected"
    expected.write_text("q=TRUE\n")
    assert run_cli("prove", str(script), "--expected", str(expected)) == 2
    capsys.readouterr()


def test_prove_machine_output_deterministic(tmp_path, thm1_script, capsys):
    out1, out2 = tmp_path / "a.txt", tmp_path / "b.txt"
    run_cli("--out", out1, "prove", thm1_script,
            "--expected", str(FIXTURES / "paper_thm1.expected"))
    run_cli("--out", out2, "prove", thm1_script,
            "--expected", str(FIXTURES / "paper_thm1.expected"))
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()


@pytest.mark.parametrize("start,length,expect", [
    (2, 3, "ABBA"), (5, 2, "BA"), (1, 2, "AB"), (3, 3, "BAAB")])
def test_classify_known_factors(capsys, start, length, expect):
    code = run_cli("classify", start, length)
    out = capsys.readouterr().out
    assert code == 0
    pairs = machine_section(out)
    assert pairs["oracle.class"] == expect
    assert pairs["automaton.class"] == expect
    assert pairs["overall"] == "pass"


def test_classify_single_symbol(capsys):
    code = run_cli("classify", 0, 1)
    out = capsys.readouterr().out
    assert code == 0
    pairs = machine_section(out)
    assert pairs["oracle.class"] == "TM_AS_A"
    assert pairs["automaton.class"] == "unsupported"


def test_classify_insufficient_window(capsys):
    code = run_cli("--window", 64, "--min-occ", 8, "classify", 0, 20)
    captured = capsys.readouterr()
    assert code == 1
    assert machine_section(captured.out)["oracle.class"] == "INSUFFICIENT"


def test_classify_bad_range(capsys):
    assert run_cli("--window", 16, "classify", 15, 4) == 2
    capsys.readouterr()


def test_count_reproduces_table(capsys):
    code = run_cli("--window", 1 << 15, "count", 15)
    out = capsys.readouterr().out
    assert code == 0
    pairs = machine_section(out)
    f_table = [0, 2, 2, 4, 4, 6, 8, 8, 8, 10, 12, 14, 16, 16, 16]
    g_table = [0, 0, 1, 1, 2, 2, 2, 3, 4, 4, 4, 4, 4, 5, 6]
    for n in range(1, 16):
        assert pairs[f"row.{n}.f.brute"] == str(f_table[n - 1])
        assert pairs[f"row.{n}.g.brute"] == str(g_table[n - 1])
        assert pairs[f"row.{n}.agree"] == "yes"
    assert pairs["overall"] == "pass"
    assert pairs["row.10.f.closed"] == "10"
    assert pairs["row.2.f.closed"] == "2"


def test_count_rejects_bad_bounds(capsys):
    assert run_cli("count", 1) == 2
    assert run_cli("count", 99999) == 2
    capsys.readouterr()


def test_count_deterministic(tmp_path, capsys):
    out1, out2 = tmp_path / "a.txt", tmp_path / "b.txt"
    run_cli("--window", 1 << 14, "--out", out1, "count", 10)
    run_cli("--window", 1 << 14, "--out", out2, "count", 10)
    capsys.readouterr()
    assert out1.read_bytes() == out2.read_bytes()


@pytest.mark.parametrize("pattern", cli.PATTERN_NAMES)
def test_export_wellformed(capsys, pattern):
    code = run_cli("export", pattern, "--digit-order", "msd")
    out = capsys.readouterr().out
    assert code == 0
    assert out.startswith("digraph {")
    assert out.rstrip().endswith("}")
    assert "doublecircle" in out


def test_export_lsd_and_msd_to_files(tmp_path, capsys):
    lsd, msd = tmp_path / "a.dot", tmp_path / "b.dot"
    assert run_cli("--out", lsd, "export", "abpat", "--digit-order", "lsd") \
        == 0
    assert run_cli("--out", msd, "export", "abpat", "--digit-order", "msd") \
        == 0
    capsys.readouterr()
    assert lsd.read_text().startswith("digraph {")
    assert lsd.read_text() != msd.read_text()


def test_selftest_passes(capsys):
    code = run_cli("selftest")
    out = capsys.readouterr().out
    assert code == 0
    assert "overall: pass" in out


def test_selftest_catches_corrupted_dfao(capsys):
    code = run_cli("selftest", "--corrupt-dfao")
    out = capsys.readouterr().out
    assert code != 0
    assert "FAIL" in out


def test_selftest_small_window_fails(capsys):
    code = run_cli("--window", 64, "selftest")
    out = capsys.readouterr().out
    assert code != 0
    assert "INSUFFICIENT" in out
