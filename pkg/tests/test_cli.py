from pathlib import Path

import pytest
from click.testing import CliRunner

from wfokit.cli import main, parse_word
from wfokit.nwa import is_sweeping, parse_nwa

DATA = Path(__file__).resolve().parents[1] / "src" / "wfokit" / "data"


def data(name: str) -> str:
    return str(DATA / name)


def run(*args):
    return CliRunner().invoke(main, [str(a) for a in args])


def test_eval_language():
    res = run("eval", data("fig1.nwa"), "--word", "abb", "--agg", "lang")
    assert res.exit_code == 0
    assert res.stdout.splitlines()[-1] == "{aa, bb, baba, bbbb, bbabba}"


def test_eval_natural():
    res = run("eval", data("ex2.wfo"), "--word", "abbaa", "--agg", "nat")
    assert res.stdout == "9\t1 1\n9\n"
    res = run("eval", data("ex2.wfo"), "--word", "", "--agg", "nat")
    assert res.stdout == "1\t<eps>\n1\n"


def test_eval_multiset_matches_golden():
    res = run("eval", data("ex1.wfo"), "--word", "aa")
    golden = (Path(__file__).parent / "golden" / "ex1_aa.txt").read_text(encoding="utf-8")
    assert res.stdout == golden


def test_check_aperiodic():
    res = run("check", data("aex.nwa"), "aperiodic")
    assert res.exit_code == 0
    assert res.stdout.startswith("aperiodic: true, index: ")


def test_check_ambiguity():
    res = run("check", data("aex.nwa"), "ambiguity", "--max-len", "6")
    assert res.exit_code == 0
    assert res.stdout.splitlines()[0] == "unambiguous"


def test_check_sweeping():
    res = run("check", data("fig5.nwa"), "sweeping")
    assert res.exit_code == 0
    lines = res.stdout.splitlines()
    assert lines[0] == "sweeping: true"
    assert lines[1].startswith("root: ")
    res = run("check", data("aex.nwa"), "sweeping")
    assert res.exit_code == 1
    assert res.stdout.startswith("sweeping: false")


def test_check_validate_and_oneway():
    assert run("check", data("fig1.nwa"), "validate").stdout == "valid\n"
    res = run("check", data("ex2.wfo"), "oneway", "--one-way")
    assert res.exit_code == 0
    assert "left-to-right until exit" in res.stdout
    assert run("check", data("aex.nwa"), "oneway").exit_code == 1


def test_translate_formula_is_sweeping(tmp_path):
    out = tmp_path / "out.nwa"
    res = run("translate", data("ex1.wfo"), "wfo2nwa", "-o", out)
    assert res.exit_code == 0
    assert is_sweeping(parse_nwa(out.read_text(encoding="utf-8"))) is not None
    assert run("check", out, "sweeping").exit_code == 0


def test_translate_two_way_annotated(tmp_path):
    out = tmp_path / "swept.nwa"
    steps = tmp_path / "steps"
    res = run("translate", data("aex.nwa"), "two2sweep", "--annotated", "-o", out, "--dump-iterations", steps)
    assert res.exit_code == 0
    assert run("check", out, "aperiodic").exit_code == 0
    assert sorted(p.name for p in steps.iterdir()) == [f"iteration_{i}.nwa" for i in range(6)]
    res = run("equiv", data("aex.nwa"), out, "--max-len", "7")
    assert res.exit_code == 0
    assert res.stdout == "equal on 255 words\n"


def test_translate_top_formula():
    res = run("translate", data("top.fo"), "fo2dfa")
    assert res.exit_code == 0
    a = parse_nwa(res.stdout)
    # one scanning state between the marker wrappers
    assert len({t.src for t in a.transitions if t.letter in ("a", "b")}) == 1


def test_equiv():
    res = run("equiv", data("ex1.wfo"), data("fig1.nwa"), "--max-len", "5")
    assert res.exit_code == 0
    assert res.stdout == "equal on 63 words\n"
    res = run("equiv", data("ex2.wfo"), data("ex1.wfo"), "--max-len", "3")
    assert res.exit_code == 1
    assert res.stdout.splitlines()[:2] == ["different", "word: <eps>"]


def test_equiv_explicit_words():
    res = run("equiv", data("ex1.wfo"), data("fig1.nwa"), "--words", "ab;ba;a b b")
    assert res.stdout == "equal on 3 words\n"


def test_monoid_dump():
    res = run("monoid-dump", data("aex.nwa"))
    assert res.exit_code == 0
    assert res.stdout.startswith("elements ")


def test_input_errors_exit_two(tmp_path):
    assert run("eval", tmp_path / "missing.nwa", "--word", "a").exit_code == 2
    bad = tmp_path / "bad.wfo"
    bad.write_text("alphabet: a\nsum x . (", encoding="utf-8")
    assert run("eval", bad, "--word", "a").exit_code == 2


def test_length_cap():
    res = run("equiv", data("ex1.wfo"), data("fig1.nwa"), "--max-len", "40")
    assert res.exit_code == 2


@pytest.mark.parametrize(
    "text, expected",
    [("abb", ("a", "b", "b")), ("a b b", ("a", "b", "b")), ("a,b", ("a", "b")), ("", ())],
)
def test_parse_word(text, expected):
    assert parse_word(text, ("a", "b")) == expected
