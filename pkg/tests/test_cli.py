import json
import shutil
from pathlib import Path

import pytest

from mcgcert.catalog import data_dir
from mcgcert.cli import main

CERTS = Path(data_dir()) / "certificates"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_abelianize(capsys):
    code, out, _ = run(capsys, "abelianize", "--pres", "y2.pres")
    assert code == 0 and out.strip() == "Z/2"


def test_abelianize_json(capsys):
    code, out, _ = run(capsys, "abelianize", "--pres", "y2", "--json", "--matrix")
    data = json.loads(out)
    assert data["torsion"] == [2] and data["matrix"] == [[2]]


def test_check_pass_and_corrupted(capsys, tmp_path):
    code, out, _ = run(capsys, "check", "--cert", "nu_slide_square")
    assert code == 0 and "PASS" in out
    text = (CERTS / "nu_slide_square.deriv").read_text()
    bad = tmp_path / "corrupted.deriv"
    lines = text.splitlines()
    i = next(k for k, l in enumerate(lines) if l.startswith("apply"))
    lines[i] = lines[i].replace("dir=fwd", "dir=rev") if "dir=fwd" in lines[i] else lines[i].replace("dir=rev", "dir=fwd")
    bad.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "check", "--cert", str(bad))
    assert code == 1
    assert "FAIL at step 0" in out


def test_check_json_reports_step(capsys, tmp_path):
    text = (CERTS / "nu_slide_inverse.deriv").read_text().replace("at=1", "at=2", 1)
    bad = tmp_path / "bad.deriv"
    bad.write_text(text)
    code, out, _ = run(capsys, "--json", "check", str(bad))
    data = json.loads(out)
    assert code == 1 and data["reports"][0]["failed_step"] is not None


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "check", "--cert", "missing-file")[0] == 2
    broken = tmp_path / "broken.deriv"
    broken.write_text("derive x : 1 => 1 in Thm2@figure4\napply rel=x dir=fwd at=\n")
    code, _, err = run(capsys, "check", str(broken))
    assert code == 2 and ":2:" in err
    assert run(capsys, "catalog", "nothing-here")[0] == 2
    assert run(capsys, "search", "--from", "T(a", "--to", "1")[0] == 2
    with pytest.raises(SystemExit):
        main(["no-such-command"])


def test_catalog_and_instantiate(capsys):
    code, out, _ = run(capsys, "catalog", "figure4")
    assert code == 0 and "N(4,1)" in out
    code, out, _ = run(capsys, "catalog", "figure4", "--render")
    assert out == (Path(data_dir()) / "catalogs" / "figure4.cat").read_text() + "\n"
    code, out, _ = run(capsys, "--catalog", "section2", "instantiate", "--theorem", "Cor")
    assert code == 0 and "Y(mu0,alpha0)" in out


def test_search(capsys):
    code, out, _ = run(capsys, "search", "--from", "T(beta,-) T(beta,+)", "--to", "1")
    assert code == 0 and out.startswith("derive found")
    code, out, _ = run(capsys, "search", "--from", "T(beta,+)", "--to", "T(gamma,+)",
                       "--max-steps", "1", "--max-len", "3")
    assert code == 1 and "bounds exceeded" in out


def test_check_morphism(capsys):
    code, out, _ = run(capsys, "check-morphism", "psi")
    assert code == 0 and "FAIL" not in out


def test_replay_deterministic(capsys):
    code, first, _ = run(capsys, "replay-paper")
    assert code == 0 and first.rstrip().endswith("replay: PASS")
    _, second, _ = run(capsys, "replay-paper")
    strip = lambda s: [l for l in s.splitlines()]  # noqa: E731
    assert strip(first) == strip(second)


def test_data_dir_env(capsys, tmp_path, monkeypatch):
    shutil.copytree(data_dir(), tmp_path / "data")
    monkeypatch.setenv("MCG_DATA_DIR", str(tmp_path / "data"))
    (tmp_path / "data" / "presentations" / "y2.pres").write_text(
        "presentation y2\ngen Y(mu0,alpha0)\nrel c : Y(mu0,alpha0) Y(mu0,alpha0) Y(mu0,alpha0) = 1\n")
    code, out, _ = run(capsys, "abelianize", "--pres", "y2")
    assert out.strip() == "Z/3"
    assert run(capsys, "replay-paper")[0] == 1
