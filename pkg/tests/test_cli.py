from __future__ import annotations

import json

import pytest

from qsteiner.cli import BUDGET, OK, REJECT, USAGE, RunManifest, main


def test_field_check(capsys):
    assert main(["field", "check", "--q", "2", "--n", "13", "--poly", "13,12,10,9,0"]) == OK
    out = capsys.readouterr().out
    assert "M: 8191" in out and "primitive: yes" in out
    assert main(["field", "check", "--q", "2", "--n", "4", "--poly", "4,3,2,1,0"]) == REJECT


def test_bad_input_exit_code(capsys):
    assert main(["field", "check", "--q", "4", "--n", "2"]) == USAGE


def test_orbits_km_solve(tmp_path, capsys):
    d = tmp_path
    assert main(["orbits", "--q", "2", "--n", "7", "--k", "2", "--group", "singer", "--out", str(d / "o.txt")]) == OK
    assert "21 orbits" in capsys.readouterr().out
    args = ["km", "build", "--q", "2", "--n", "7", "--t", "2", "--k", "3", "--group", "singer",
            "--out", str(d / "km.txt"), "--instance", str(d / "inst.txt"), "--orbits-out", str(d / "k.txt")]
    assert main(args) == OK
    assert (d / "km.txt").read_text().startswith("2 3 21 93\n")
    assert main(["solve", "--instance", str(d / "inst.txt"), "--seed", "1", "--out", str(d / "s.txt"),
                 "--orbits", str(d / "k.txt")]) == OK
    assert (d / "s.txt").read_text() == ""
    assert "exhaustive: True" in capsys.readouterr().out


def test_solve_budget_and_resume(tmp_path, capsys):
    inst = tmp_path / "grid.txt"
    lines = ["items=12"]
    k = 0
    for r in range(2):
        for c in range(6):
            if c < 5:
                lines.append(f"{k}: {2 * c + r},{2 * (c + 1) + r}")
                k += 1
            if r == 0:
                lines.append(f"{k}: {2 * c},{2 * c + 1}")
                k += 1
    inst.write_text("\n".join(lines) + "\n")
    token = tmp_path / "tok.json"
    code = main(["solve", "--instance", str(inst), "--max-nodes", "5", "--out", str(tmp_path / "a.txt"),
                 "--resume-out", str(token)])
    assert code == BUDGET and "path" in json.loads(token.read_text())
    assert main(["solve", "--instance", str(inst), "--resume", str(token), "--out", str(tmp_path / "b.txt"),
                 "--resume-out", str(tmp_path / "tok2.json")]) == OK
    found = (tmp_path / "a.txt").read_text().split() + (tmp_path / "b.txt").read_text().split()
    assert len(set(found)) == 13


def test_pipeline_nonexist_presets(tmp_path, capsys):
    for preset in ("s2-2-3-7-singer", "s2-2-3-7-galois"):
        out = tmp_path / preset
        assert main(["pipeline", "--preset", preset, "--out-dir", str(out)]) == OK
        m = RunManifest.read(out / "manifest.json")
        assert m.status == "no solutions (exhaustive)"
        assert m.parameters["q"] == 2 and m.parameters["n"] == 7
        assert set(m.artifacts) >= {"km.txt", "instance.txt", "orbits_t2.txt", "orbits_k3.txt", "solutions.txt"}


def test_manifest_replay_is_bit_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["pipeline", "--q", "2", "--t", "2", "--k", "3", "--n", "7", "--group", "singer",
                 "--mode", "nonexist", "--seed", "9", "--out-dir", str(a)]) == OK
    assert main(["pipeline", "--manifest", str(a / "manifest.json"), "--out-dir", str(b)]) == OK
    ma, mb = RunManifest.read(a / "manifest.json"), RunManifest.read(b / "manifest.json")
    assert ma.artifacts == mb.artifacts
    assert ma.parameters == mb.parameters and ma.seeds == mb.seeds


def test_pipeline_budget_exit(tmp_path, capsys):
    code = main(["pipeline", "--q", "2", "--t", "2", "--k", "3", "--n", "7", "--group", "singer",
                 "--mode", "nonexist", "--max-nodes", "3", "--out-dir", str(tmp_path)])
    m = RunManifest.read(tmp_path / "manifest.json")
    assert code == BUDGET and m.status == "budget exceeded"
    token = json.loads((tmp_path / "resume.json").read_text())
    assert "resume.json" in m.artifacts
    assert token["path"]
    # finishing from the token with a larger budget settles the case
    more = tmp_path / "more"
    code = main(["pipeline", "--manifest", str(tmp_path / "manifest.json"), "--resume",
                 str(tmp_path / "resume.json"), "--max-nodes", "1e6", "--out-dir", str(more)])
    m2 = RunManifest.read(more / "manifest.json")
    assert code == OK and m2.status == "no solutions (exhaustive)"
    assert m2.parameters["resume"] == token


def test_pruned_search_mode(tmp_path, capsys):
    code = main(["pipeline", "--q", "2", "--t", "2", "--k", "3", "--n", "7", "--group", "normalizer",
                 "--mode", "search", "--out-dir", str(tmp_path)])
    m = RunManifest.read(tmp_path / "manifest.json")
    # two usable options cannot cover three items
    assert code == OK and m.status == "no solutions (exhaustive)"
    assert m.results["search"]["pruned"]


@pytest.mark.slow
def test_pipeline_verify_flagship(tmp_path, capsys):
    assert main(["pipeline", "--preset", "s2-2-3-13-norm", "--write-design", "--out-dir", str(tmp_path)]) == OK
    m = RunManifest.read(tmp_path / "manifest.json")
    assert m.status == "accept"
    assert m.results["blocks"] == 1_597_245
    assert m.results["histogram"] == {"0": 0, "1": 11_180_715, ">=2": 0}
    assert m.results["difference_family"]["blocks"] == 195
    assert {"df.txt", "design.txt"} <= set(m.artifacts)
    capsys.readouterr()
    design = str(tmp_path / "design.txt")
    assert main(["verify", "--design", design]) == OK
    assert "A_2(13,4,3) >= 1597245" in capsys.readouterr().out
    assert main(["dfamily", "--design", design, "--out", str(tmp_path / "df2.txt")]) == OK
    assert "(8191,7,1) family, 195 blocks, 8190 differences" in capsys.readouterr().out


@pytest.mark.slow
def test_pipeline_trivial_design(tmp_path, capsys):
    code = main(["pipeline", "--q", "2", "--t", "3", "--k", "3", "--n", "13", "--group", "normalizer",
                 "--mode", "verify", "--out-dir", str(tmp_path)])
    assert code == OK
    assert RunManifest.read(tmp_path / "manifest.json").results["blocks"] == 3_269_560_515


def test_verify_and_dfamily_commands(tmp_path, capsys):
    # the trivial design S_2[3,3,7]: every 3-subspace of GF(2^7)
    from qsteiner.designkit import expand
    from qsteiner.ffield import build_field
    from qsteiner.orbits import GroupSpec, build_orbit_table

    group = GroupSpec("normalizer", build_field(2, 7))
    design = expand(build_orbit_table(3, group).reps, group, 3, 3)
    design.write(tmp_path / "d.txt")
    assert main(["verify", "--design", str(tmp_path / "d.txt")]) == OK
    assert "verdict: accept" in capsys.readouterr().out
    # drop a block
    lines = (tmp_path / "d.txt").read_text().splitlines()
    head = lines[0].split()
    head[-1] = str(int(head[-1]) - 1)
    (tmp_path / "e.txt").write_text(" ".join(head) + "\n" + "\n".join(lines[2:]) + "\n")
    assert main(["verify", "--design", str(tmp_path / "e.txt")]) == REJECT


def test_presets_listing(capsys):
    assert main(["presets"]) == OK
    out = capsys.readouterr().out
    for name in ("s2-2-3-7-galois", "s2-3-4-8-singer", "s2-2-4-10-norm", "s2-2-4-13-norm",
                 "s2-3-4-10-norm", "s3-2-3-7-singer", "s5-2-3-7-norm"):
        assert name in out
