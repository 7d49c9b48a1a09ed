import csv
import json
import time

import pytest

from adiabatic_fock.cli import main
from adiabatic_fock.config import SCENARIOS, load_config, preset
from adiabatic_fock.errors import ConfigError
from adiabatic_fock.runner import parse_values

FAST = ["--grid-points", "201", "--no-figures"]


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_list_scenarios(capsys):
    assert main(["list-scenarios"]) == 0
    out = capsys.readouterr().out
    for name in ("smith-counterexample", "alpha3", "periodic", "antiperiodic"):
        assert name in out


def test_presets_fully_specified():
    for name in SCENARIOS:
        cfg = preset(name)
        assert cfg.scenario == name
        assert (cfg.hp_diag is None) != (cfg.hp_polynomial is None)


def test_run_writes_outputs(tmp_path, capsys):
    assert main(["run", "smith-counterexample", "-o", str(tmp_path), "--grid-points", "401"]) == 0
    stem = tmp_path / "smith-counterexample"
    for suffix in ("_trajectory.csv", "_flow.csv", "_crossing.json", "_verdict.json",
                   "_occupations.png", "_spectral_flow.png", "_matrix_elements.png"):
        assert (stem.parent / (stem.name + suffix)).is_file(), suffix
    verdict = json.loads((tmp_path / "smith-counterexample_verdict.json").read_text())
    assert verdict["candidate"] == 0 and verdict["true_ground"] == 4
    assert verdict["is_ground_claim"] and not verdict["claim_correct"]
    rows = read_csv(tmp_path / "smith-counterexample_trajectory.csv")
    assert len(rows) == 401
    assert float(rows[-1]["p_fock_0"]) == pytest.approx(0.999323, abs=2e-3)
    crossing = json.loads((tmp_path / "smith-counterexample_crossing.json").read_text())
    assert crossing["zeros_before_transfer"]
    assert "claim=yes" in capsys.readouterr().out


def test_run_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["run", "alpha3", "-o", str(out), *FAST]) == 0
    for name in ("alpha3_trajectory.csv", "alpha3_flow.csv", "alpha3_crossing.json", "alpha3_verdict.json"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_flag_overrides_preset(tmp_path):
    assert main(["run", "smith-counterexample", "--alpha", "3", "-o", str(tmp_path), *FAST]) == 0
    verdict = json.loads((tmp_path / "smith-counterexample_verdict.json").read_text())
    assert verdict["candidate"] == 4 and verdict["claim_correct"]


def test_alpha_search_json(tmp_path):
    assert main(["run", "alpha3", "--alpha-search", "-o", str(tmp_path), *FAST]) == 0
    trace = json.loads((tmp_path / "alpha3_alpha_search.json").read_text())
    assert trace["accepted_candidate"] == 4
    assert trace["rounds"][-1]["accepted"] is True


def test_truncation_dims_json(tmp_path):
    code = main(["run", "dioph-x-minus-2", "--truncation-dims", "5,8", "-o", str(tmp_path), *FAST])
    assert code == 0
    rep = json.loads((tmp_path / "dioph-x-minus-2_convergence.json").read_text())
    assert rep["dims"] == [5, 8] and len(rep["total_variation"]) == 1


def test_truncation_dims_need_polynomial(tmp_path, capsys):
    assert main(["run", "smith-counterexample", "--truncation-dims", "5,8", "-o", str(tmp_path), *FAST]) == 2
    assert "polynomial" in capsys.readouterr().err


def test_degenerate_target_exit_code(tmp_path):
    code = main(["run", "--hp-diag", "1,1,2,3,4", "--dims", "5", "-o", str(tmp_path), *FAST])
    assert code == 4


@pytest.mark.parametrize("argv", [
    ["run", "no-such-scenario"],
    ["run", "--dims", "1"],
    ["run", "--hp-diag", "1,2,3"],
    ["run", "--alpha", "one"],
    ["run", "--hp-poly", "x +"],
    ["run", "--dims", "3,3", "--shifted"],
    ["sweep", "--axis", "T", "--values", "5:1:1"],
])
def test_config_errors_exit_2(argv, tmp_path, capsys):
    assert main([*argv, "-o", str(tmp_path), "--no-figures"]) == 2
    assert "config error" in capsys.readouterr().err


def test_validate_config_ok(tmp_path, capsys):
    path = tmp_path / "ok.toml"
    path.write_text('scenario = "alpha3"\nT = 20.0\nalpha = "2+0.5j"\n')
    assert main(["validate-config", str(path)]) == 0
    cfg = load_config(path)
    assert cfg.T == 20.0 and cfg.alpha == (2 + 0.5j,) and cfg.hp_diag == preset("alpha3").hp_diag


@pytest.mark.parametrize("body, needle", [
    ('scenario = "alpha3"\nT = -1.0\n', "positive"),
    ('scenario = "alpha3"\n\ngrid_points = "many"\n', "line 3"),
    ('scenario = "alpha3"\nbogus = 1\n', "line 2"),
    ('T = 13\n[extra]\nx = 1\n', "tables"),
    ('T = = 1\n', "line 1"),
])
def test_validate_config_diagnostics(tmp_path, capsys, body, needle):
    path = tmp_path / "bad.toml"
    path.write_text(body)
    assert main(["validate-config", str(path)]) == 2
    assert needle in capsys.readouterr().err
    with pytest.raises(ConfigError):
        load_config(path)


def test_config_file_then_flags(tmp_path):
    path = tmp_path / "run.toml"
    path.write_text('scenario = "smith-counterexample"\nalpha = 3\ngrid_points = 101\nfigures = false\n')
    assert main(["run", "--config", str(path), "--alpha", "1", "-o", str(tmp_path)]) == 0
    verdict = json.loads((tmp_path / "smith-counterexample_verdict.json").read_text())
    assert verdict["candidate"] == 0


def test_single_value_sweep_matches_run(tmp_path):
    assert main(["sweep", "smith-counterexample", "--axis", "alpha_mod", "--values", "2.5",
                 "-o", str(tmp_path), *FAST]) == 0
    assert main(["run", "smith-counterexample", "--alpha", "2.5", "-o", str(tmp_path), *FAST]) == 0
    row = read_csv(tmp_path / "smith-counterexample_sweep_alpha_mod.csv")[0]
    final = read_csv(tmp_path / "smith-counterexample_trajectory.csv")[-1]
    for k in range(5):
        assert row[f"p_fock_{k}"] == final[f"p_fock_{k}"]


def test_sweep_csv_columns(tmp_path):
    assert main(["sweep", "alpha3", "--axis", "T", "--values", "5,13.3444", "--workers", "2",
                 "-o", str(tmp_path), "--no-figures"]) == 0
    rows = read_csv(tmp_path / "alpha3_sweep_T.csv")
    assert [float(r["T"]) for r in rows] == [5.0, 13.3444]
    assert list(rows[0]) == ["T", "p_fock_0", "p_fock_1", "p_fock_2", "p_fock_3", "p_fock_4", "p_true_ground",
                             "candidate", "probability", "is_ground_claim", "degenerate_target",
                             "precondition_met"]


def test_parse_values():
    assert parse_values("1, 2.5") == [1.0, 2.5]
    assert parse_values("1:2:0.25") == [1.0, 1.25, 1.5, 1.75, 2.0]
    with pytest.raises(ConfigError):
        parse_values("a")


@pytest.mark.slow
@pytest.mark.parametrize("name", sorted(SCENARIOS))
def test_preset_runtime(name, tmp_path):
    start = time.perf_counter()
    assert main(["run", name, "-o", str(tmp_path)]) == 0
    assert time.perf_counter() - start < 60
