import json

from ortho_invar.cli import main


def test_verify_pass_and_json(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "u2_identity,xi_invariance", "--q", "3", "--m", "2", "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert [r["name"] for r in data] == ["u2_identity", "xi_invariance"]


def test_exit_codes(tmp_path, capsys):
    assert main(["verify", "--suite", "u2_identity", "--q", "2"]) == 2
    assert main(["verify", "--suite", "nothing_matches_this"]) == 2
    assert main(["bogus"]) == 2
    assert main(["verify", "--list"]) == 0


def test_construct(capsys):
    assert main(["construct", "c22", "--q", "3", "--m", "2", "--abstract"]) == 0
    assert capsys.readouterr().out.strip() == "T1^2*T0 + T0^5"
    assert main(["construct", "xi", "--q", "3", "--m", "2", "--i", "0"]) == 0
    assert capsys.readouterr().out.strip() == "y1*x1 + y2*x2"
    assert main(["construct", "catalog", "--q", "3", "--m", "2"]) == 0
    cat = json.loads(capsys.readouterr().out)
    assert cat["degrees"]["u"] == 16
    assert main(["construct", "d", "--q", "3", "--m", "2", "--i", "1", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["q"] == 3


def test_hilbert(capsys):
    assert main(["hilbert", "--group", "oplus", "--q", "3", "--m", "2", "--max-degree", "8", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["dims"] == [1, 0, 1, 0, 2, 0, 2, 0, 3]


def test_express(tmp_path, capsys):
    f = tmp_path / "f.txt"
    f.write_text("y1^2*x1^2 + 2*y1*x1*y2*x2 + y2^2*x2^2")
    assert main(["express", "--target", str(f), "--gens", "xi0,x1", "--q", "3", "--m", "2"]) == 0
    assert capsys.readouterr().out.strip() == "xi0^2"
    f.write_text("y1^2")
    assert main(["express", "--target", str(f), "--gens", "xi0", "--q", "3", "--m", "2"]) == 1
