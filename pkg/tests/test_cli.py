import json

import numpy as np
import pytest

from specmimo.channel import ChannelMatrix
from specmimo.cli import main, oracle_check
from specmimo.config import parse_config
from specmimo.exceptions import ConfigError
from specmimo.presets import run_preset


def write(tmp_path, text, name="cfg.toml"):
    p = tmp_path / name
    p.write_text(text)
    return p


def run(tmp_path, text, *extra, out="out"):
    cfg = write(tmp_path, text)
    return main(["run", str(cfg), "--out", str(tmp_path / out), *extra])


def test_materials_list(capsys):
    assert main(["materials", "list"]) == 0
    out = capsys.readouterr().out
    for name in ("conductor", "concrete", "floorboard", "plasterboard"):
        assert name in out
    assert "7.19" in out and "13.98" in out


def test_validate(tmp_path, capsys):
    assert main(["validate", str(write(tmp_path, 'preset = "fig4"\n'))]) == 0
    assert "ok" in capsys.readouterr().out


@pytest.mark.parametrize("text", [
    'preset = "fig4"\nbogus = 1\n',
    'preset = "fig99"\n',
    'preset = "fig4"\n[scenario]\nfrequency_hz = 1e9\n',
    'preset = "fig4"\n[scenario]\nmaterial = "unobtainium"\n',
    'preset = "fig4"\n[scenario]\nn_tx = 0\n',
    'preset = "fig4"\n[contour]\nn_nodes = 2\n',
    'preset = "fig5"\n[sweep]\nvariable = "snr_db"\n',
    'preset = "custom"\n[[materials]]\nname = "x"\nn2_real = 0.5\n',
    'preset = = "fig4"',
])
def test_validate_rejects(tmp_path, text, capsys):
    assert main(["validate", str(write(tmp_path, text))]) == 2
    assert "error" in capsys.readouterr().err


def test_missing_file(tmp_path):
    assert main(["validate", str(tmp_path / "none.toml")]) == 2


def test_fig8_table_and_manifest(tmp_path):
    assert run(tmp_path, 'preset = "fig8"\n') == 0
    out = tmp_path / "out"
    lines = (out / "fig8_pathloss.csv").read_text().splitlines()
    assert lines[0] == ("d0_minus_d_m,los_db,conductor_db,concrete_db,"
                        "floorboard_db,plasterboard_db")
    assert len(lines) == 31
    row = [float(v) for v in lines[11].split(",")]
    # D0 - D = 5: conductor is 20 log10(20/10) below LOS
    assert row[0] == 5.0
    assert row[2] - row[1] == pytest.approx(6.0206, abs=1e-4)
    manifest = json.loads((out / "manifest.json").read_text())
    for key in ("engine_version", "contour", "materials", "wall_clock_s",
                "files", "started_utc"):
        assert key in manifest
    assert manifest["contour"]["n_nodes"] == 2048


def test_single_point_sweep_gives_one_row(tmp_path):
    text = ('preset = "fig8"\n[sweep]\nvariable = "d0_minus_d_m"\n'
            'start = 5.0\n')
    assert run(tmp_path, text) == 0
    lines = (tmp_path / "out" / "fig8_pathloss.csv").read_text().splitlines()
    assert len(lines) == 2


def test_rerun_is_byte_identical(tmp_path):
    text = ('preset = "fig5"\n[scenario]\nn_tx = 4\nn_rx = 4\n'
            '[sweep]\nvariable = "snr_db"\nvalues = [0.0, 20.0]\n')
    assert run(tmp_path, text, out="a") == 0
    assert run(tmp_path, text, out="b") == 0
    a = (tmp_path / "a" / "fig5_spectral_efficiency.csv").read_bytes()
    b = (tmp_path / "b" / "fig5_spectral_efficiency.csv").read_bytes()
    assert a == b and len(a.splitlines()) == 3


def test_wrong_sweep_variable(tmp_path):
    text = 'preset = "fig5"\n[sweep]\nvariable = "r0x_m"\nstart = 1.0\n'
    assert run(tmp_path, text) == 2
    text = 'preset = "fig4"\n[sweep]\nvariable = "snr_db"\nstart = 1.0\n'
    assert run(tmp_path, text) == 2


def test_custom_preset_with_user_material(tmp_path):
    text = ('preset = "custom"\n[scenario]\nmode = "total"\n'
            'material = "drywall"\nn_tx = 3\nn_rx = 2\n'
            '[[materials]]\nname = "drywall"\nn2_real = 1.6\nn2_imag = 0.02\n')
    assert run(tmp_path, text, "--threads", "2", "--indicator", "hard") == 0
    out = tmp_path / "out"
    H = ChannelMatrix.from_csv(out / "custom_channel.csv")
    assert H.shape == (2, 3)
    report = (out / "custom_report.csv").read_text().splitlines()
    assert report[0].startswith("scenario_id,snr_db,eigenvalues")
    assert len(report) == 2
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["contour"]["tail"] is False
    assert manifest["threads"] == 2
    assert "drywall" in [m["name"] for m in manifest["materials"]]


def test_guard_exit_code(tmp_path, capsys):
    text = ('preset = "custom"\n[scenario]\nmode = "los"\nn_tx = 2\n'
            'n_rx = 2\nfrequency_ghz = 1.0\nspacing_m = 2200.0\n')
    assert run(tmp_path, text) == 3
    assert "3600" in capsys.readouterr().err


def test_geometry_error_exit_code(tmp_path):
    text = 'preset = "fig4"\n[scenario]\nrange_m = 15.0\n'
    assert run(tmp_path, text) == 2


def test_thread_env(tmp_path, monkeypatch):
    monkeypatch.setenv("SPECMIMO_THREADS", "many")
    assert run(tmp_path, 'preset = "fig8"\n') == 2
    monkeypatch.setenv("SPECMIMO_THREADS", "2")
    assert run(tmp_path, 'preset = "fig8"\n') == 0
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["threads"] == 2
    assert run(tmp_path, 'preset = "fig8"\n', "--threads", "0") == 2


def test_oracle_check(capsys):
    assert main(["oracle-check"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3 and all(l.startswith("PASS") for l in lines)
    assert max(oracle_check().values()) < 1e-6


def test_fig4_preset_structure():
    cfg = parse_config('preset = "fig4"\n[scenario]\nn_tx = 4\nn_rx = 4\n')
    (table,), channel = run_preset(cfg)
    assert channel is None
    assert table.header == ["index", "los_db", "conductor_db", "concrete_db",
                            "floorboard_db", "plasterboard_db"]
    rows = np.array(table.rows, dtype=float)
    assert rows.shape == (4, 6)
    # LOS at the Rayleigh spacing: all eigenvalues at 10 log10(4)
    np.testing.assert_allclose(rows[:, 1], 10 * np.log10(4), atol=0.05)


def test_fig14_defaults_and_overrides():
    cfg = parse_config('preset = "fig14"\n[sweep]\nvariable = "ratio"\n'
                       'values = [0.02]\n')
    (table,), _ = run_preset(cfg)
    assert table.header[0] == "ratio" and len(table.rows) == 1
    with pytest.raises(ConfigError):
        run_preset(parse_config('preset = "fig14"\n[scenario]\nn_tx = 3\n'))


def test_fig9_clips_endpoints():
    cfg = parse_config('preset = "fig9"\n[scenario]\nn_tx = 4\nn_rx = 4\n'
                       '[sweep]\nvariable = "d0_minus_d_m"\n'
                       'values = [0.0, 15.0]\n')
    (table,), _ = run_preset(cfg)
    z = [r[1] for r in table.rows]
    assert 0 < z[1] < z[0] < 15.0
