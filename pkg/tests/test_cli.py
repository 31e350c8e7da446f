import json

import pytest

from siegelkit.cli import main
from siegelkit.thetaforms import lattice_theta_coefficients, named_lattice
from siegelkit.fourier import siegel_phi


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip().startswith("{") else out


def test_toroidal_pullback(capsys):
    code, payload = run(capsys, "toroidal", "verify-pullback", "--n", "4", "--m", "2")
    assert code == 0
    assert payload["multiplicities"] == [2, 2, 2]


def test_metric_check_json_and_csv(capsys, tmp_path):
    code, payload = run(capsys, "metric-check", "--samples", "4", "--directions", "1")
    assert code == 0 and payload["pass"]
    assert payload["relative_spread"] <= 1e-8

    out = tmp_path / "metric.csv"
    code = main(["metric-check", "--samples", "2", "--directions", "1",
                 "--format", "csv", "--output", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].split(",") == ["tau_id", "direction_id", "bergman", "hodge", "ratio"]
    assert len(lines) == 3


def test_metric_check_seed_reproducible(capsys):
    _, first = run(capsys, "--seed", "5", "metric-check", "--samples", "3", "--directions", "1")
    _, second = run(capsys, "--seed", "5", "metric-check", "--samples", "3", "--directions", "1")
    assert first == second


def test_theta_subcommand(capsys):
    code, payload = run(capsys, "theta", "--char", "0;0", "--tau", "[[[0,1]]]",
                        "--radius", "15")
    assert code == 0
    assert payload["value"]["re"] == pytest.approx(1.0864348112, abs=1e-9)
    assert payload["even"] is True


def test_lattice_theta_matches_library(capsys, tmp_path):
    out = tmp_path / "e8g1.json"
    code = main(["lattice-theta", "--lattice", "e8", "--genus", "1", "--bound", "2",
                 "--output", str(out)])
    assert code == 0
    payload = json.loads(out.read_text())
    assert payload == lattice_theta_coefficients(named_lattice("e8"), 1, 2).to_json()


def test_phi_round_trip(capsys, tmp_path):
    src = tmp_path / "e8g2.json"
    main(["lattice-theta", "--lattice", "e8", "--genus", "2", "--bound", "2",
          "--output", str(src)])
    code, payload = run(capsys, "phi", "--input", str(src))
    assert code == 0
    expected = siegel_phi(lattice_theta_coefficients(named_lattice("e8"), 2, 2)).to_json()
    assert payload == expected


def test_cusp_check(capsys, tmp_path):
    theta_file = tmp_path / "theta.json"
    main(["lattice-theta", "--lattice", "e8", "--genus", "2", "--bound", "2",
          "--output", str(theta_file)])
    code, payload = run(capsys, "cusp-check", "--input", str(theta_file))
    assert payload["cusp"] is False
    assert "witness_twoA" in payload

    schottky_file = tmp_path / "schottky.json"
    main(["named-form", "--name", "schottky", "--genus", "2", "--bound", "2",
          "--output", str(schottky_file)])
    data = json.loads(schottky_file.read_text())
    assert data["all_zero"] is True
    del data["all_zero"]
    schottky_file.write_text(json.dumps(data))
    code, payload = run(capsys, "cusp-check", "--input", str(schottky_file),
                        "--expect-cusp", "true")
    assert code == 0 and payload["cusp"] is True


def test_symmetry_check_cli(capsys, tmp_path):
    theta_file = tmp_path / "theta.json"
    main(["lattice-theta", "--lattice", "e8", "--genus", "2", "--bound", "2",
          "--output", str(theta_file)])
    code, payload = run(capsys, "symmetry-check", "--input", str(theta_file),
                        "--v", "[[1,1],[0,1]]", "--u", "[[0,0],[0,0]]")
    assert code == 0 and payload["pass"]


def test_certify_chi10(capsys):
    code, payload = run(capsys, "certify", "--g", "2", "--l", "1", "--form", "chi10")
    assert code == 0
    assert payload["threshold"] == 10
    assert payload["evidence"]


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as err:
        main(["no-such-command"])
    assert err.value.code == 2
    # chi18 needs a degree-3 point
    code = main(["named-form", "--name", "chi18", "--tau", "[[[0,1]]]"])
    assert code == 2


def test_boundary_growth_cli(capsys):
    code, payload = run(capsys, "boundary-growth", "--genus", "1")
    assert code == 0 and payload["pass"]
