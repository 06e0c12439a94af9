import pytest

from vlloop.cli import main
from vlloop.fnspace import FunctionTable, f_rbar


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("term, point, want", [("(f x1 x2)", "1,0", "4"), ("(ldot x1 x2)", "1,3", "8"),
                                               ("(+ x1 x2)", "7,8", "3")])
def test_eval(capsys, term, point, want):
    code, out, _ = run(capsys, "eval", term, point)
    assert code == 0 and out.strip() == want


@pytest.mark.parametrize("argv", [("eval", "(f x1", "1,0"), ("eval", "x3", "1,2"), ("eval", "x1", "a")])
def test_eval_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_table(capsys):
    code, out, _ = run(capsys, "table", "(f x1 x2)")
    assert code == 0
    assert FunctionTable.from_text(out) == f_rbar(2, (1, 0))


@pytest.mark.parametrize("term, k", [("(f x1 x1)", "1"), ("(f (+ x1 x1) x2)", "2")])
def test_normalize_zero(capsys, term, k):
    code, out, _ = run(capsys, "normalize", term, k)
    assert code == 0
    assert out.splitlines()[0].startswith("u:") and len(out.splitlines()) == 1


def test_normalize_single_monomial(capsys):
    code, out, _ = run(capsys, "normalize", "(f x1 x2)", "2", "--reconstruct")
    lines = out.splitlines()
    assert code == 0
    assert lines[1].startswith("s ") and lines[1].endswith(" 1")
    assert lines[-1] == "(f x1 x2)"


def test_eq(capsys):
    assert run(capsys, "eq", "(f x1 x2)", "(f x1 (+ x2 x2 x2))")[0] == 0
    assert run(capsys, "eq", "(f x1 x2)", "(f x2 x1)")[0] == 1


def test_clone_member(capsys, tmp_path):
    good = tmp_path / "good.txt"
    good.write_text(f_rbar(2, (1, 1)).to_text())
    code, out, _ = run(capsys, "clone-member", str(good))
    assert code == 0 and "f 11 1" in out
    bad = tmp_path / "bad.txt"
    bad.write_text(FunctionTable.from_function(1, lambda x: x + 4).to_text())
    code, out, _ = run(capsys, "clone-member", str(bad))
    assert code == 1 and out.strip() == "not a member"
    assert run(capsys, "clone-member", str(tmp_path / "missing"))[0] == 2


def test_smp(capsys, tmp_path):
    yes = tmp_path / "yes.txt"
    yes.write_text("1 1\n2\n4\n")
    code, out, _ = run(capsys, "smp", str(yes), "--witness")
    assert code == 0 and out.splitlines()[0] == "member"
    assert run(capsys, "eval", out.splitlines()[1], "2")[1].strip() == "4"
    no = tmp_path / "no.txt"
    no.write_text("1 1\n4\n2\n")
    code, out, _ = run(capsys, "smp", str(no))
    assert code == 1 and out.strip() == "non-member"
    bad = tmp_path / "bad.txt"
    bad.write_text("1 1\n4\n")
    assert run(capsys, "smp", str(bad))[0] == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "identities")
    assert code == 0 and "9/9" in out
    code, out, _ = run(capsys, "verify", "congruences", "--format", "lines")
    assert code == 0 and all(line.startswith("check=") for line in out.splitlines())
    assert run(capsys, "verify", "nope")[0] == 2


def test_verify_theorem1_k2(capsys):
    code, out, _ = run(capsys, "verify", "theorem1", "--k", "2")
    assert code == 0 and "104976" in out


def test_verify_deterministic(capsys):
    first = run(capsys, "verify", "rewriter", "--k", "1", "--seed", "3", "--samples", "50", "--format", "lines")
    second = run(capsys, "verify", "rewriter", "--k", "1", "--seed", "3", "--samples", "50", "--format", "lines")
    assert first[0] == 0
    strip = lambda s: [ln for ln in s.splitlines() if "seconds" not in ln and "time" not in ln]
    assert strip(first[1]) == strip(second[1])
