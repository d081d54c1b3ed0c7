import json

import pytest

from commlearn.cli import CSV_HEADER, main


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def test_gen_imr_and_run_csd(workdir, capsys):
    assert main(["gen", "imr", "m=3", "r=2", "--seed", "5", "--out", "i.json"]) == 0
    obj = json.loads((workdir / "i.json").read_text())
    assert len(obj["alice"]) <= 3
    assert main(["run", "i.json", "--protocol", "csd", "--out", "t.json"]) == 0
    line = capsys.readouterr().out.strip()
    decision = line.split()[0]
    assert decision == obj["truth"]
    assert json.loads((workdir / "t.json").read_text())["protocol"] == "csd"


def test_gen_halfplane_is_realizable(workdir):
    assert main(["gen", "halfplane", "n=100", "noisy=false", "--out", "h.json"]) == 0
    assert json.loads((workdir / "h.json").read_text())["truth"] == "REALIZABLE"


def test_invalid_kind(workdir, capsys):
    assert main(["gen", "nonsense"]) == 2
    assert "unknown instance kind" in capsys.readouterr().err


def test_thresholds_run_and_refusal(workdir, capsys):
    main(["gen", "thresholds", "n=40", "--out", "t.json"])
    assert main(["run", "t.json", "--protocol", "thresholds"]) == 0
    out = capsys.readouterr().out
    assert int(out.split("examples_sent=")[1].split()[0]) <= 4
    assert main(["run", "t.json", "--protocol", "realizability", "--class", "singletons"]) == 2


def test_abort_exit_code(workdir):
    main(["gen", "halfplane", "n=40", "--out", "h.json"])
    assert main(["run", "h.json", "--protocol", "realizability", "--max-messages", "3"]) == 3


def test_experiment_csv_is_byte_stable(workdir, monkeypatch):
    monkeypatch.setenv("COMMLEARN_SEED", "7")
    args = ["experiment", "--protocol", "csd", "--sizes", "32,64", "--trials", "3"]
    assert main(args + ["--out", "a.csv"]) == 0
    assert main(args + ["--out", "b.csv"]) == 0
    a = (workdir / "a.csv").read_text()
    assert a == (workdir / "b.csv").read_text()
    lines = a.splitlines()
    assert lines[0] == CSV_HEADER
    rows = [l.split(",") for l in lines[1:] if not l.startswith("#")]
    assert len(rows) == 6 and all(r[2] == "1" for r in rows)
    assert sum(l.startswith("# n=") for l in lines) == 2


def test_experiment_eps_flag_accepts_fraction(workdir):
    assert main(["experiment", "--protocol", "improper", "--sizes", "50", "--trials", "1", "--eps", "1/8", "--out", "x.csv"]) == 0
    assert main(["experiment", "--protocol", "improper", "--eps", "one-eighth"]) == 2


def test_verify_suites(capsys):
    assert main(["verify", "imr", "m=3", "r=3"]) == 0
    assert main(["verify", "covc-witness", "k=10"]) == 0
    assert main(["verify", "supermajority", "trials=20"]) == 0
    assert main(["verify", "small-universe"]) == 0
    assert main(["verify", "unknown-suite"]) == 2
    assert "PASS" in capsys.readouterr().out
