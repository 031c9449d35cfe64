import json

from yangkit.cli import main


def test_roots_json_has_delta(capsys):
    assert main(["roots", "--algebra", "A2affine", "--height", "3", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    delta = [r for r in out["roots"] if r["coords"] == [1, 1, 1]]
    assert delta and delta[0]["multiplicity"] == 2


def test_unknown_algebra_exit_2(capsys):
    assert main(["roots", "--algebra", "E8"]) == 2
    assert "supported" in capsys.readouterr().err


def test_bad_flags_exit_2(capsys):
    assert main(["verify", "--suite", "nope"]) == 2
    assert main(["verify", "--suite", "defining", "--a", "0.5"]) == 2


def test_verify_master_run(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["verify", "--algebra", "A3", "--suite", "defining", "--rmax", "4", "--a", "1/2",
                 "--out", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["summary"]["fail"] == 0 and rep["config"]["a"] == "1/2"
    assert "defining" in capsys.readouterr().out


def test_failure_exit_1_prints_witness(tmp_path, capsys):
    code = main(["verify", "--suite", "coproduct", "--rmax", "1", "--mutation", "drop_hh"])
    assert code == 1
    assert "witness" in capsys.readouterr().out


def test_byte_identical_and_round_trip(tmp_path):
    p1, p2, p3 = (tmp_path / f"{k}.json" for k in "abc")
    args = ["verify", "--suite", "minimal", "--algebra", "A2", "--seed", "3"]
    assert main(args + ["--out", str(p1)]) == 0
    assert main(args + ["--out", str(p2)]) == 0
    assert p1.read_bytes() == p2.read_bytes()
    assert main(["verify", "--config", str(p1), "--out", str(p3)]) == 0
    assert p1.read_bytes() == p3.read_bytes()


def test_verma_and_eval_module(capsys):
    assert main(["verma", "--algebra", "A2", "--hw", "1,1", "--depth", "3", "--json"]) == 0
    assert json.loads(capsys.readouterr().out)["depth_dims"] == [1, 2, 4, 6]
    assert main(["eval-module", "--algebra", "A2", "--a", "1/3", "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["node_shifts"] == {"1": "0", "2": "1/2"}
    assert main(["eval-module", "--algebra", "A2affine"]) == 2
