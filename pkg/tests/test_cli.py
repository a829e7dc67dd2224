import json

import pytest

from grassmann_zh.cli import main


def run(capsys, *argv, env=None):
    code = main(list(argv), env=env or {})
    return code, capsys.readouterr().out


def test_count(capsys):
    code, out = run(capsys, "count", "--h", "6", "--n", "4", "--k", "2")
    assert code == 0 and json.loads(out)["subspaces"] == 4550
    _, out = run(capsys, "count", "--h", "2", "--n", "4", "--k", "0")
    assert json.loads(out)["subspaces"] == 1


def test_env_precedence(capsys):
    env = {"GRZH_H": "2", "GRZH_N": "4", "GRZH_K": "2"}
    _, out = run(capsys, "count", env=env)
    assert json.loads(out)["subspaces"] == 35
    _, out = run(capsys, "count", "--h", "3", env=env)
    assert json.loads(out)["subspaces"] == 130


def test_enumerate(capsys, tmp_path):
    code, out = run(capsys, "enumerate", "--h", "4", "--n", "2", "--m", "1")
    assert code == 0 and len(out.splitlines()) == 1 + 6
    _, out = run(capsys, "enumerate", "--h", "4", "--n", "2", "--m", "0")
    assert len(out.splitlines()) == 2
    code, _ = run(capsys, "enumerate", "--h", "6", "--n", "4", "--m", "2", "--enum-cap", "10")
    assert code == 3


def test_invalid_parameters(capsys):
    assert run(capsys, "count", "--h", "1", "--n", "2", "--k", "1")[0] == 2
    assert run(capsys, "graph-stats", "--h", "2", "--n", "4", "--m", "2", "--r", "1")[0] == 2
    assert run(capsys, "count", "--h", "2")[0] == 2


def test_graph_stats(capsys):
    code, out = run(capsys, "graph-stats", "--h", "2", "--n", "4", "--m", "2", "--r", "2", "--exact")
    rec = json.loads(out)
    assert code == 0 and rec["omega"] == 7 and rec["alpha"] == 5 and rec["edges"] == 315
    _, out = run(capsys, "graph-stats", "--h", "6", "--n", "4", "--m", "2", "--r", "2")
    rec = json.loads(out)
    assert rec["omega"] == 91 and rec["bounds"]["alpha_exact"] == 50
    _, out = run(capsys, "graph-stats", "--h", "6", "--n", "4", "--m", "2", "--r", "3")
    assert json.loads(out)["alpha"] == 1
    code, _ = run(capsys, "graph-stats", "--h", "6", "--n", "4", "--m", "2", "--r", "2", "--exact")
    assert code == 3


def test_graph_stats_csv(capsys):
    _, out = run(capsys, "graph-stats", "--h", "2", "--n", "4", "--m", "2", "--r", "2", "--format", "csv")
    header, row = out.splitlines()[:2]
    assert "omega" in header.split(",")


def test_ekr(capsys, tmp_path):
    from grassmann_zh import extremal as E, graph as G, subspace as S
    from grassmann_zh.ring import factorize
    _, out = run(capsys, "ekr", "--h", "6", "--n", "4", "--m", "2", "--r", "1")
    assert json.loads(out)["bound"] == 91
    ctx = factorize(2)
    fam = E.build_family(G.GraphSpec(ctx, 4, 2, 2), E.Star(S.subspace(ctx, [[0, 1, 0, 0]], 4)))
    path = tmp_path / "star.fam"
    path.write_text(S.format_family(ctx, 4, 2, fam))
    code, out = run(capsys, "ekr", "--h", "2", "--n", "4", "--m", "2", "--r", "1", "--family", str(path))
    rep = json.loads(out)
    assert code == 0 and rep["status"] == "meets bound" and rep["classification"]["type"] == "a"
    path.write_text(S.format_family(ctx, 4, 2, fam[:2]))
    _, out = run(capsys, "ekr", "--h", "2", "--n", "4", "--m", "2", "--r", "1", "--family", str(path))
    assert json.loads(out)["status"] == "below bound"


def test_code(capsys, tmp_path):
    out_file = tmp_path / "code.fam"
    code, out = run(capsys, "code", "--h", "6", "--n", "4", "--m", "2", "--d", "4",
                    "--code-out", str(out_file))
    cert = json.loads(out)
    assert code == 0 and cert["size"] == 50 and cert["optimal"] and cert["verified_distance"]
    assert len(out_file.read_text().splitlines()) == 51


def test_verify_fault_detected(capsys):
    code, out = run(capsys, "verify", "--h", "6", "--suite", "ranks", "--samples", "20",
                    "--inject-fault", "ranks")
    assert code == 4 and json.loads(out)["all_passed"] is False


def test_verify_deterministic(capsys):
    args = ["verify", "--h", "4", "--h", "6", "--suite", "ranks", "--suite", "duality",
            "--samples", "20", "--seed", "42"]
    a = run(capsys, *args, "--threads", "1")
    b = run(capsys, *args, "--threads", "3")
    assert a == b and a[0] == 0


def test_output_file(capsys, tmp_path):
    path = tmp_path / "out.json"
    run(capsys, "count", "--h", "2", "--n", "3", "--k", "1", "--out", str(path))
    assert json.loads(path.read_text())["subspaces"] == 7
