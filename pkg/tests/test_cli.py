import json
import math

import pytest

from rovib.cli import main
from rovib.config import parse_config, parse_lines
from rovib.errors import ConfigError, ParseError, UnitSanity, UnknownKey
from rovib.output import data_section, format_value, render_csv
from rovib.params import PhysicalParams


def _run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_empty_config_gives_defaults(tmp_path):
    cfg = tmp_path / "empty.cfg"
    cfg.write_text("# nothing here\n\n")
    assert parse_config(cfg).params == PhysicalParams()


def test_override_precedence(tmp_path):
    cfg = tmp_path / "a.cfg"
    cfg.write_text("input_power = 2e-3\ntemperature=0.5  # cold\n")
    rc = parse_config(cfg, ["temperature=0.25"])
    assert rc.params.input_power == 2e-3
    assert rc.params.temperature == 0.25


def test_detuning_follows_omega_phi():
    assert parse_config(None, ["omega_phi=7e6"]).params.detuning_value == 7e6
    assert parse_config(None, ["omega_phi=7e6", "detuning_value=1e6"]).params.detuning_value == 1e6


def test_duplicate_key_warns_last_wins():
    with pytest.warns(UserWarning, match="duplicate"):
        values = parse_lines(["finesse=1e4", "finesse=2e4"])
    assert values["finesse"] == 2e4


def test_unknown_key_and_parse_error():
    with pytest.raises(UnknownKey):
        parse_lines(["finess=1e4"])
    with pytest.raises(ParseError) as exc:
        parse_lines(["# ok", "mass=1e-9", "radius 3"])
    assert exc.value.lineno == 3
    with pytest.raises(ParseError):
        parse_lines(["oam_charge=2.5"])


def test_unit_sanity_warning():
    with pytest.warns(UnitSanity):
        parse_config(None, ["wavelength=812.7"])


def test_invalid_value_is_config_error():
    with pytest.raises(ConfigError):
        parse_config(None, ["mass=-1"])


def test_format_round_trip():
    for v in (math.pi, 1e-300, 6.2497e8, -0.1):
        assert float(format_value(v)) == v
    assert format_value(None) == "" and format_value(float("nan")) == ""
    assert format_value(True) == "true"


def test_header_only_for_empty_rows():
    text = render_csv(("a", "b"), [], PhysicalParams(), timestamp=False)
    assert data_section(text) == "a,b\n"
    assert text.startswith("# rovib ")


def test_derive_json(capsys):
    code, out, _ = _run(["derive"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["derived"]["g_z"] == pytest.approx(75.0686, rel=1e-5)
    assert doc["photon_number"] == pytest.approx(6.2497e8, rel=1e-4)
    assert len(doc["config_sha256"]) == 64


def test_json_only_commands_reject_csv(capsys):
    for cmd in ("derive", "stability", "tune"):
        code, _, err = _run([cmd, "--format", "csv"], capsys)
        assert code == 2 and "JSON" in err


def test_config_errors_exit_2(tmp_path, capsys):
    assert _run(["derive", "-s", "bogus=1"], capsys)[0] == 2
    assert _run(["derive", "--config", str(tmp_path / "missing.cfg")], capsys)[0] == 2
    assert _run(["sweep", "--axis", "power:1"], capsys)[0] == 2


def test_io_error_exit_4(tmp_path, capsys):
    code, _, err = _run(["steady", "-o", str(tmp_path / "no" / "such" / "dir.csv")], capsys)
    assert code == 4 and "I/O" in err


def test_steady_csv(capsys):
    code, out, _ = _run(["steady", "--no-timestamp", "--delta-range", "0", "9.4e7", "5",
                         "-s", "input_power=0.05"], capsys)
    assert code == 0
    lines = data_section(out).splitlines()
    assert lines[0] == "delta_rad_s,P_in_W,photon_number,z_s,phi_s,stable"
    assert len(lines) - 1 >= 5


def test_stability_json(capsys):
    code, out, _ = _run(["stability"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["stable"] and doc["routh_hurwitz_stable"]
    assert len(doc["eigenvalues"]) == 6


def test_spectrum_and_summary(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, _, _ = _run(["spectrum", "--points", "50", "--no-dense", "-o", str(out)], capsys)
    assert code == 0
    data = data_section(out.read_text()).splitlines()
    assert data[0] == "omega_rad_s,E,V_Ru,V_Rv,D" and len(data) == 51
    summary = json.loads((tmp_path / "s.csv.summary.json").read_text())
    assert summary["E_min"] > 0 and summary["temperature"] == 1.0


def test_unstable_spectrum_writes_nothing(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, stdout, err = _run(["spectrum", "-s", "detuning_value=-6283185.307179586", "-o", str(out)], capsys)
    assert code == 3 and "unstable" in err
    assert not out.exists() and stdout == ""


def test_sweep_deterministic(capsys):
    argv = ["sweep", "--no-timestamp", "--axis", "temperature:0.5:1.5:3", "--axis", "power:1e-3:2e-3:2"]
    _, a, _ = _run(argv, capsys)
    _, b, _ = _run(argv + ["--threads", "3"], capsys)
    assert a == b
    header = data_section(a).splitlines()[0]
    assert header == "temperature,power,E_extremum,omega_peak_rad_s,stable_flag"


def test_tune_json(capsys):
    code, out, _ = _run(["tune", "-s", "omega_phi=6283248.1"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["reached"]
    assert abs(doc["delta_lambda_m"]) <= 5e-9
    code, out, _ = _run(["tune", "-s", "omega_phi=2e7"], capsys)
    assert code == 3 and json.loads(out)["reached"] is False
