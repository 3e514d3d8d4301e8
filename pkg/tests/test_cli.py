import json
import logging

import pytest
from click.testing import CliRunner
from pydantic import ValidationError

from src.cli import PRESETS, build_run_configs, cli, commands, get_preset, load_config
from src.config.run_config import Domain, Formulation, SolverKind


@pytest.fixture
def runner():
    return CliRunner()


def _write_config(path, **fields):
    path.write_text(json.dumps(fields), encoding="utf-8")
    return path


def test_presets_are_listed(runner):
    result = runner.invoke(cli, ["presets"])
    assert result.exit_code == 0
    for name in PRESETS:
        assert name in result.output
    assert sorted(PRESETS) == [f"table{i}" for i in range(1, 8)]


def test_get_preset_returns_copies():
    runs = get_preset("table7")
    runs[0]["levels"].append(99)
    assert 99 not in PRESETS["table7"][0]["levels"]
    with pytest.raises(ValueError):
        get_preset("table8")


def test_load_config_defaults(tmp_path):
    config = load_config(_write_config(tmp_path / "c.json", domain="lshape", family="bdm", k=0, levels=[9, 15]))
    assert config.domain is Domain.LSHAPE
    assert config.formulation is Formulation.FULL
    assert config.solver is SolverKind.AUTO
    assert (config.nev, config.mu) == (5, 0.5)
    assert config.descriptor == "lshape_bdm_k0_full"


def test_load_config_reports_all_errors(tmp_path):
    path = _write_config(tmp_path / "c.json", domain="square", family="rt", k=7, mu=-1.0, levels=[10])
    with pytest.raises(ValidationError) as info:
        load_config(path)
    assert info.value.error_count() == 2
    assert "mu must be positive" in str(info.value)


def test_load_config_rejects_unknown_keys(tmp_path):
    with pytest.raises(ValidationError):
        load_config(_write_config(tmp_path / "c.json", domain="square", family="rt", k=0, levels=[10], colour="red"))


def test_load_config_bad_json(tmp_path):
    path = tmp_path / "c.json"
    path.write_text('{"domain": "square",\n "k": }', encoding="utf-8")
    with pytest.raises(ValueError, match="línea 2"):
        load_config(path)
    with pytest.raises(FileNotFoundError):
        load_config(tmp_path / "missing.json")
    (tmp_path / "list.json").write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ValueError):
        load_config(tmp_path / "list.json")


def test_flags_override_preset_with_warning(caplog):
    with caplog.at_level(logging.WARNING):
        configs = build_run_configs("table1", None, {"nev": 3})
    assert [c.k for c in configs] == [0, 1]
    assert all(c.nev == 3 for c in configs)
    assert "--nev" not in caplog.text


def test_fixed_k_on_preset_runs_once(caplog):
    with caplog.at_level(logging.WARNING):
        configs = build_run_configs("table1", None, {"k": 2})
    assert [c.descriptor for c in configs] == ["square_rt_k2_full"]
    assert "--k" in caplog.text
    assert "duplicada" in caplog.text
    assert len(build_run_configs("table7", None, {"k": 0})) == 2


def test_preset_and_config_are_exclusive(tmp_path):
    path = _write_config(tmp_path / "c.json", domain="square", family="rt", k=0, levels=[10])
    with pytest.raises(ValueError):
        build_run_configs("table1", str(path), {})


def test_invalid_config_exits_without_files(runner, tmp_path):
    out = tmp_path / "out"
    path = _write_config(tmp_path / "c.json", domain="square", family="rt", k=7, levels=[2, 3], output_dir=str(out))
    result = runner.invoke(cli, ["run", "--config", str(path)])
    assert result.exit_code == 1
    assert not out.exists()


def test_missing_flags_exit_with_error(runner, tmp_path):
    result = runner.invoke(cli, ["run", "--domain", "square", "--output", str(tmp_path)])
    assert result.exit_code == 1
    assert list(tmp_path.iterdir()) == []


def test_small_run_passes_and_is_reproducible(runner, tmp_path):
    args = ["run", "--domain", "square", "--family", "rt", "--k", "0", "--levels", "2,3", "--nev", "2"]
    first = runner.invoke(cli, args + ["--output", str(tmp_path / "a")])
    second = runner.invoke(cli, args + ["--output", str(tmp_path / "b")])
    assert first.exit_code == 0, first.output
    assert second.exit_code == 0
    csv_a = (tmp_path / "a" / "square_rt_k0_full.csv").read_bytes()
    assert csv_a == (tmp_path / "b" / "square_rt_k0_full.csv").read_bytes()
    assert csv_a.decode().count("\n") == 1 + 2 * 2
    summary = json.loads((tmp_path / "a" / "square_rt_k0_full.json").read_text(encoding="utf-8"))
    assert summary["fits"] == []


def test_comparison_mismatch_exit_code(runner, tmp_path):
    out = tmp_path / "out"
    path = _write_config(
        tmp_path / "c.json",
        domain="square", family="rt", k=0, formulation="reduced", levels=[2, 3, 4], nev=2,
        output_dir=str(out), tolerances={"tol_extr": 1e-12},
    )
    result = runner.invoke(cli, ["run", "--config", str(path)])
    assert result.exit_code == 2
    summary = json.loads((out / "square_rt_k0_reduced.json").read_text(encoding="utf-8"))
    assert summary["comparison"]["verdict"] == "fail"
    assert "extrapolated[1]" in summary["comparison"]["offenders"]


def test_failed_export_leaves_no_files(runner, tmp_path, monkeypatch):
    out = tmp_path / "out"
    real_export = commands.export_report
    calls = []

    def export_then_fail(report, comparison):
        calls.append(report.config.descriptor)
        if len(calls) == 2:
            raise OSError("disco lleno")
        return real_export(report, comparison)

    monkeypatch.setattr(commands, "export_report", export_then_fail)
    args = ["run", "--preset", "table7", "--levels", "2,3", "--nev", "2", "--output", str(out)]
    result = runner.invoke(cli, args)
    assert result.exit_code == 1
    assert calls == ["lshape_rt_k0_full", "lshape_bdm_k0_full"]
    assert list(out.iterdir()) == []
