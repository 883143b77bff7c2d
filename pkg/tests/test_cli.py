import csv
import json
import math
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from lambdamem import cli
from lambdamem.maxwell_bloch import SolverError
from lambdamem.spectroscopy import Spectrum, at_doublet, cpt_resonance

ATS_SMALL = ["simulate", "ats", "--d", "5", "--f-values", "2,4", "--direction", "both", "--jobs", "1"]


def run(argv, tmp_path, name="out"):
    out = tmp_path / name
    code = cli.main([*argv, "--output", str(out)])
    return code, out


def read_results(path: Path):
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("# config: ")
    return json.loads(lines[0][len("# config: "):]), list(csv.DictReader(lines[1:]))


@pytest.mark.parametrize("command", sorted(cli.COMMANDS))
def test_help_lists_every_option_with_units(command, capsys):
    with pytest.raises(SystemExit) as info:
        cli.main([*command.split(), "--help"])
    assert info.value.code == 0
    text = " ".join(capsys.readouterr().out.split())
    for opt in cli.COMMANDS[command]:
        assert "--" + opt.name.replace("_", "-") in text
        assert "(" in opt.help and ")" in opt.help


def test_small_ats_sweep(tmp_path):
    code, out = run(ATS_SMALL, tmp_path)
    assert code == 0
    cfg, rows = read_results(out / "results.csv")
    assert cfg["d"] == 5.0 and "output" not in cfg and "jobs" not in cfg
    assert [(r["direction"], float(r["f"])) for r in rows] == [
        ("forward", 2.0), ("forward", 4.0), ("backward", 2.0), ("backward", 4.0)]
    for r in rows:
        assert 0 <= float(r["eta_total"]) <= float(r["eta_storage"]) <= 1
    ET.parse(out / "efficiency.svg")


def test_outputs_are_byte_identical_across_runs(tmp_path):
    _, a = run(ATS_SMALL, tmp_path, "a")
    _, b = run([*ATS_SMALL[:-1], "2"], tmp_path, "b")
    assert (a / "results.csv").read_bytes() == (b / "results.csv").read_bytes()
    assert (a / "efficiency.svg").read_bytes() == (b / "efficiency.svg").read_bytes()


def test_config_file_and_flag_precedence(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"c": 5.0, "t_s": 0.4, "asymptotic": True}))
    code, out = run(["simulate", "cavity", "--config", str(conf), "--c", "10"], tmp_path)
    assert code == 0
    cfg, rows = read_results(out / "results.csv")
    assert cfg["c"] == 10.0 and cfg["t_s"] == 0.4
    assert float(rows[0]["eta_total"]) == pytest.approx(100 / 121, abs=1e-6)


def test_config_sweep(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"asymptotic": True, "sweep": {"param": "c", "values": [1, 10]}}))
    code, out = run(["simulate", "cavity", "--config", str(conf)], tmp_path)
    assert code == 0
    _, rows = read_results(out / "results.csv")
    assert [float(r["eta_total"]) for r in rows] == pytest.approx([0.25, 100 / 121])


def test_cavity_simulation_matches_closed_form(tmp_path):
    code, out = run(["simulate", "cavity", "--samples", "2001"], tmp_path)
    assert code == 0
    _, rows = read_results(out / "results.csv")
    assert abs(float(rows[0]["eta_total"]) - float(rows[0]["eta_closed_form"])) < 0.02


@pytest.mark.parametrize("argv", [
    ["transduce", "--eta-m", "1.5"],
    ["simulate", "cavity", "--sweep-param", "c", "--sweep-values", ""],
    ["simulate", "ats", "--f-values", "0,1", "--jobs", "1"],
    ["simulate", "cavity", "--sweep-param", "bogus", "--sweep-values", "1"],
    ["fit", "line", "/nonexistent/file.csv"],
])
def test_invalid_input_exits_2(argv, tmp_path, capsys):
    code, _ = run(argv, tmp_path)
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_unknown_config_key_exits_2(tmp_path, capsys):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"cooperativity": 3}))
    code, _ = run(["simulate", "cavity", "--config", str(conf)], tmp_path)
    assert code == 2
    assert "cooperativity" in capsys.readouterr().err


def test_malformed_spectrum_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("freq,counts\n1,2\n")
    code, _ = run(["fit", "line", str(bad)], tmp_path)
    assert code == 2
    assert "header" in capsys.readouterr().err


def test_solver_failure_exits_3(tmp_path, monkeypatch, capsys):
    def explode(*args, **kwargs):
        raise SolverError("non-finite field")

    monkeypatch.setattr(cli, "run_ats_memory", explode)
    code, _ = run(["simulate", "ats", "--f-values", "2", "--jobs", "1"], tmp_path)
    assert code == 3
    assert "non-finite" in capsys.readouterr().err


def test_fit_failure_exits_4(tmp_path):
    flat = tmp_path / "flat.csv"
    rng = np.random.default_rng(0)
    Spectrum(np.arange(200.0), 1 + rng.normal(0, 0.01, 200), "khz", "counts").to_csv(flat)
    code, _ = run(["fit", "line", str(flat)], tmp_path)
    assert code == 4


def test_transduce_report(tmp_path):
    # R·T_tr equals n_th when κ_s/2π·(t_s + t_r) = 1
    code, out = run(["transduce", "--t-s", "0.5e-6", "--t-r", "0.5e-6"], tmp_path)
    assert code == 0
    report = json.loads((out / "report.json").read_text())["report"]
    assert report["efficiency"] == pytest.approx(100 / 121, abs=1e-6)
    assert report["n_th"] == pytest.approx(0.0045, abs=2e-4)
    assert report["snr_after_transduction"] == pytest.approx(report["snr"], rel=1e-12)
    _, rows = read_results(out / "report.csv")
    assert {r["quantity"] for r in rows} >= {"efficiency", "n_th", "fidelity"}


def test_fit_split_on_bundled_corpus(tmp_path):
    code, out = run(["fit", "split"], tmp_path)
    assert code == 0
    fit = json.loads((out / "fit.json").read_text())
    assert fit["derived"]["slope"] == pytest.approx(1.0, abs=0.02)
    assert fit["derived"]["monotone"]
    _, rows = read_results(out / "splittings.csv")
    assert len(rows) == 8


def test_fit_split_single_file(tmp_path):
    path = tmp_path / "ad.csv"
    at_doublet(np.arange(-150.0, 150.25, 0.5), 40.0, noise=0.03, seed=3).to_csv(path)
    code, out = run(["fit", "split", str(path)], tmp_path)
    assert code == 0
    fit = json.loads((out / "fit.json").read_text())
    assert fit["derived"]["splitting"] == pytest.approx(40.0, abs=1.0)
    assert len(fit["provenance"]["sha256"]) == 64


def test_fit_cpt(tmp_path):
    path = tmp_path / "cpt.csv"
    cpt_resonance(np.arange(-500.0, 500.25, 0.5), noise=0.03, seed=1).to_csv(path)
    code, out = run(["fit", "cpt", str(path)], tmp_path)
    assert code == 0
    derived = json.loads((out / "fit.json").read_text())["derived"]
    assert derived["dip_separation"] == pytest.approx(242.0, abs=5.0)
    assert all(abs(w - 16.0) < 2.0 for w in derived["dip_fwhms"])


def test_fit_concentration_on_bundled_data(tmp_path):
    path = cli.DATA_DIR / "measured_absorption.csv"
    code, out = run(["fit", "concentration", str(path)], tmp_path)
    assert code == 0
    derived = json.loads((out / "fit.json").read_text())["derived"]
    assert derived["corrected_peak"] == pytest.approx(0.0093, abs=5e-4)
    assert 8.2e10 / 3 < derived["concentration_cm3"] < 3 * 8.2e10


def test_fit_od_with_cavity(tmp_path):
    path = cli.DATA_DIR / "corrected_absorption.csv"
    code, out = run(["fit", "od", str(path), "--finesse", "1000"], tmp_path)
    assert code == 0
    derived = json.loads((out / "fit.json").read_text())["derived"]
    assert derived["od"] == pytest.approx(0.0094, abs=3e-4)
    assert derived["cavity_enhanced_od"] == pytest.approx(2000 / math.pi * derived["od"])


def test_data_path(capsys):
    assert cli.main(["data-path"]) == 0
    path = Path(capsys.readouterr().out.strip())
    assert (path / "at_doublets" / "manifest.csv").exists()
