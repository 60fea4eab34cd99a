import csv
import io
import json
import subprocess
import sys

import pytest

from rfgrowth.cli import ConfigError, RunConfig, main, parse_radii
from rfgrowth.rf_growth import z_growth_oracle
from rfgrowth.sequences import GrowthFunction, build


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


@pytest.fixture
def pres(tmp_path):
    def write(text, name="p.txt"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return write


def test_sequences_identity(capsys):
    code, out = run(capsys, "sequences", "--f", "identity", "--K", "3")
    assert code == 0
    data = json.loads(out)
    assert data["table"]["d"] == ["33", "8021", "1461144071"]
    assert data["clauses"]["passed"]


def test_sequences_errors(capsys, tmp_path):
    assert run(capsys, "sequences", "--f", "identity", "--K", "0")[0] == 2
    assert run(capsys, "sequences", "--f", str("table:" + str(tmp_path / "missing.txt")))[0] == 2
    assert run(capsys, "sequences", "--f", "bogus")[0] == 2
    assert run(capsys, "sequences", "--f", "exp2", "--K", "3")[0] == 1


def test_sequences_csv(capsys):
    code, out = run(capsys, "sequences", "--K", "2", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and rows[0] == ["k", "p", "q", "d"] and rows[2] == ["2", "3", "2673", "8021"]


def test_verify(capsys):
    code, out = run(capsys, "verify", "--f", "identity", "--K", "3")
    assert code == 0
    assert json.loads(out)["detection_matrix"] == [[True, False, False], [False, True, False], [False, False, True]]
    assert run(capsys, "verify", "--f", "exp2", "--K", "2")[0] == 0


def test_verify_tampered_table(capsys, tmp_path):
    t = build(GrowthFunction("identity"), 3)
    data = t.to_dict()
    data["p"][2] = "3"  # 3 * 2673 = -2 mod 8021 breaks clause (v)
    path = tmp_path / "t.json"
    path.write_text(json.dumps(data))
    code, out = run(capsys, "verify", "--f", "identity", "--table", str(path))
    assert code == 1
    report = json.loads(out)["clauses"]
    assert any(c["clause"] == "v" and not c["passed"] for c in report["checks"])


def test_certificate(capsys):
    code, out = run(capsys, "certificate", "--f", "identity", "--K", "3", "--n", "8")
    assert code == 0 and json.loads(out)["k"] == 1
    assert run(capsys, "certificate", "--n", "7")[0] == 2
    assert run(capsys, "certificate", "--f", "identity", "--K", "1", "--n", "300")[0] == 3


def test_rfgrowth_z(capsys, pres):
    code, out = run(capsys, "rfgrowth", pres("gens: a\n"), "--radius", "1..12", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert [int(r["D"]) for r in rows] == [z_growth_oracle(n) for n in range(1, 13)]
    assert list(rows[0]) == ["n", "D", "elapsed_ms", "witness_element", "witness_min_order"]


def test_rfgrowth_f2(capsys, pres):
    code, out = run(capsys, "rfgrowth", pres("gens: a b\n"), "--radius", "2")
    assert code == 0 and json.loads(out)["rows"][0]["D"] == 3


def test_rfgrowth_oracle_errors(capsys, pres):
    odd = pres("gens: a b\nrel: a^2 b^3\n")
    assert run(capsys, "rfgrowth", odd, "--radius", "2")[0] == 4
    assert run(capsys, "rfgrowth", odd, "--radius", "2", "--oracle", "free")[0] == 4
    assert run(capsys, "rfgrowth", pres("gens: a\nrel: a^4\n"), "--radius", "2", "--oracle", "cyclic:4")[0] == 0
    assert run(capsys, "rfgrowth", pres("gens: a\nrel: a^4\n"), "--radius", "2", "--oracle", "cyclic:3")[0] == 4
    assert run(capsys, "rfgrowth", pres("gens: a\nrel: aA\n"), "--radius", "2")[0] == 2
    assert run(capsys, "rfgrowth", "/nonexistent/p.txt", "--radius", "2")[0] == 2


def test_rfgrowth_not_found_flagged(capsys, pres):
    code, out = run(capsys, "rfgrowth", pres("gens: a\n"), "--radius", "12", "--max-degree", "4", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["D"] == "not-found"


def strip_timing(text):
    data = json.loads(text)
    data.pop("timing")
    return data


def test_deterministic_across_workers(capsys, pres, tmp_path):
    p = pres("gens: a b\n")
    outs = []
    for workers in ("1", "2"):
        out = tmp_path / f"o{workers}.json"
        assert main(["rfgrowth", p, "--radius", "1..2", "--workers", workers, "--out", str(out)]) == 0
        outs.append(strip_timing(out.read_text()))
    assert outs[0] == outs[1]


def test_quotients(capsys, pres):
    code, out = run(capsys, "quotients", pres("gens: a b\n"), "--element", "abAB")
    data = json.loads(out)
    assert code == 0 and data["min_order"] == 6 and data["degree"] == 3
    assert set(data) >= {"element", "min_order", "degree", "images"}


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"K": 2}))
    code, out = run(capsys, "sequences", "--config", str(cfg))
    assert code == 0 and json.loads(out)["table"]["K"] == 2
    cfg.write_text(json.dumps({"K": 2, "colour": "red"}))
    assert run(capsys, "sequences", "--config", str(cfg))[0] == 2


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig.from_mapping({"command": "sequences", "bogus": 1})
    with pytest.raises(ConfigError):
        RunConfig(command="rfgrowth", workers=0)
    assert parse_radii("1..3,7") == [1, 2, 3, 7]
    with pytest.raises(ConfigError):
        parse_radii("0..2")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "rfgrowth", "sequences", "--K", "1"], capture_output=True, text=True
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["table"]["d"] == ["33"]
