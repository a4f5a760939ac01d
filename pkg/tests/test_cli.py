import pytest

from ribbonpile.cli import main
from ribbonpile.formats import fixture_text


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv, want", [
    (["genus", "torus.ribbon"], "genus 1\n"),
    (["jacobian", "torus.ribbon"], "invariants 4\n"),
    (["act", "--chips", "e1=-1,e3=1", "--quasitree", "e1,e2,e3", "torus.ribbon"], "quasitree e1\n"),
    (["group", "c3"], "invariants 1\n"),
    (["group", "torus"], "invariants 4\n"),
    (["arbcount", "--root", "1", "fig1"], "arborescences 7\n"),
    (["bernardi", "--quasitree", "e1,e2,e3", "--edge", "e1", "torus"], "orientation -e1 +e2 +e3 +e4\n"),
    (["bernardi", "--quasitree", "e1", "--edge", "e1", "torus"], "orientation -e1 +e2 -e3 +e4\n"),
    (["bernardi", "--quasitree", "e1,e2,e3", "--chips", "e3=-1", "torus"], "quasitree e1\n"),
    (["root-independent", "k4p"], "root-independent true\n"),
    (["validate", "fig1"], "valid true\n"),
    (["tours", "c3"], "count 1\ntour a1 a2 a3\n"),
    (["act", "--chips", "1=-1,3=-1,4=2", "--tour", "e1 e4 e3 e2 e8 e9 e5 e6 e7", "--check", "fig1"],
     "tour e1 e6 e5 e4 e3 e2 e8 e9 e7\n"),
])
def test_examples(capsys, argv, want):
    code, out, _ = run(capsys, *argv)
    assert (code, out) == (0, want)


def test_quasitrees_listing(capsys):
    code, out, _ = run(capsys, "quasitrees", "torus")
    assert out.splitlines() == ["count 4", "quasitree e1", "quasitree e2", "quasitree e1 e2 e3", "quasitree e1 e2 e4"]


def test_dual_and_medial_parse_back(capsys):
    from ribbonpile.formats import parse
    for verb in ("dual", "medial"):
        code, out, _ = run(capsys, verb, "torus")
        assert code == 0
        parse(out)


def test_rotor_act_tree(capsys):
    code, out, _ = run(capsys, "rotor-act", "--root", "a", "--chips", "", "--tree", "ab,ac,ad", "k4p")
    assert code == 0 and out.split()[0] == "tree" and sorted(out.split()[1:]) == ["ab", "ac", "ad"]


def test_phi(capsys):
    code, out, _ = run(capsys, "phi", "--chips", "e3=-1", "torus")
    assert code == 0 and out.startswith("chips ")


def test_file_input(capsys, tmp_path):
    p = tmp_path / "g.ribbon"
    p.write_text(fixture_text("k4p"))
    assert run(capsys, "genus", str(p))[:2] == (0, "genus 0\n")


@pytest.mark.parametrize("argv", [
    ["genus", "missing.ribbon"],
    ["jacobian", "c3"],
    ["act", "--chips", "e1=1", "--quasitree", "e1", "torus"],        # chips do not sum to 0
    ["act", "--chips", "e1=0", "--quasitree", "e3", "torus"],        # not a quasi-tree
    ["bernardi", "--quasitree", "e9", "torus"],
    ["act", "--chips", "x", "--quasitree", "e1", "torus"],
    ["rotor-act", "--root", "1", "--chips", "", "fig1"],
])
def test_domain_errors_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err.startswith("error: ")


def test_parse_error_names_line(capsys, tmp_path):
    p = tmp_path / "bad.ribbon"
    p.write_text("ribbon_digraph\nvertex 0 rotation a:tail a:head\narc a 0\n")
    code, _, err = run(capsys, "validate", str(p))
    assert code == 1 and "line 3" in err


def test_invalid_structure_reported(capsys, tmp_path):
    p = tmp_path / "bad.ribbon"
    text = fixture_text("fig1").replace("vertex 1 rotation e1:tail ", "vertex 1 rotation ")
    p.write_text(text)
    code, out, _ = run(capsys, "validate", str(p))
    assert code == 1 and "invalid arc-end missing: e1:tail at 1" in out


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["genus", "--nope", "torus"])
    assert exc.value.code == 1


def test_verify_pass_and_fail(capsys):
    code, out, _ = run(capsys, "verify", "phi-isomorphism", "--seed", "3")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "seed 3" and lines[-1] == "result pass"
    code, out, _ = run(capsys, "verify", "root-independence-planarity", "torus")
    assert code == 2 and out.splitlines()[-1] == "result fail"


def test_output_is_deterministic(capsys):
    a = run(capsys, "verify", "lemma-first-edge", "--seed", "5")
    b = run(capsys, "verify", "lemma-first-edge", "--seed", "5")
    assert a == b
