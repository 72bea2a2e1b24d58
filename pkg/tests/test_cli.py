import json

from latgas import acceptance
from latgas.cli import main


def write_cfg(tmp_path, data):
    p = tmp_path / "config.json"
    p.write_text(json.dumps(data))
    return str(p)


def test_oracle_command_matches_example(tmp_path):
    cfg = write_cfg(tmp_path, {"dimension": 1, "side": 2, "beta": 0.3,
                               "boundary": "zero", "mu": -1.0})
    rc = main(["oracle", "--config", cfg, "--out", str(tmp_path)])
    assert rc == 0
    lines = (tmp_path / "canonical_table.csv").read_text().splitlines()
    assert lines[0] == "N,logZ"
    assert len(lines) == 4
    assert float(lines[3].split(",")[1]) == 1.2
    probs = (tmp_path / "probabilities.csv").read_text().splitlines()
    assert probs[0] == "N,prob"


def test_repeated_runs_are_byte_identical(tmp_path):
    cfg = write_cfg(tmp_path, {"dimension": 1, "side": 6, "beta": 0.25,
                               "boundary": "periodic"})
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["oracle", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["oracle", "--config", cfg, "--out", str(out2)]) == 0
    assert (out1 / "canonical_table.csv").read_bytes() == \
        (out2 / "canonical_table.csv").read_bytes()


def test_config_error_exit_code(tmp_path):
    cfg = write_cfg(tmp_path, {"side": 4, "beta": 0.1})  # missing dimension
    assert main(["oracle", "--config", cfg, "--out", str(tmp_path)]) == 2
    cfg2 = write_cfg(tmp_path, {"dimension": 1, "side": 4, "beta": 0.1,
                                "boundary": "diagonal"})
    assert main(["oracle", "--config", cfg2, "--out", str(tmp_path)]) == 2
    assert main(["oracle", "--config", str(tmp_path / "nope.json"),
                 "--out", str(tmp_path)]) == 2


def test_guard_violation_exit_code(tmp_path):
    cfg = write_cfg(tmp_path, {"dimension": 2, "side": 6, "beta": 0.1,
                               "method": "enumeration"})
    assert main(["oracle", "--config", cfg, "--out", str(tmp_path)]) == 3


def test_series_command_schema(tmp_path):
    cfg = write_cfg(tmp_path, {"dimension": 1, "side": 8, "beta": 0.2,
                               "boundary": "periodic", "order": 3})
    assert main(["series", "--config", cfg, "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "series.csv").read_text().splitlines()
    assert lines[0] == "n,b_n,beta_n,B_Lambda_n,F_coeff"
    assert len(lines) == 4


def test_correlate_command(tmp_path):
    cfg = write_cfg(tmp_path, {"dimension": 1, "side": 10, "beta": 0.1,
                               "boundary": "periodic", "particles": 2})
    assert main(["correlate", "--config", cfg, "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "correlation_bound.csv").read_text().splitlines()
    assert lines[0] == "q1,q2,dist,u2_exact,rhs,feasible"
    assert all(line.endswith(",1") for line in lines[1:])


def test_deviate_command(tmp_path):
    cfg = write_cfg(tmp_path, {"dimension": 1, "side": 32, "beta": 0.0258,
                               "boundary": "zero", "alphas": [0.5],
                               "us": [0.0, 0.5]})
    assert main(["deviate", "--config", cfg, "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "deviations.csv").read_text().splitlines()
    assert lines[0].startswith("L,mu0,alpha,u,")
    assert len(lines) == 3


def test_radii_command_figure_files(tmp_path):
    cfg = write_cfg(tmp_path, {"beta_grid": {"start": 0.0, "stop": 1.0,
                                             "count": 5}})
    assert main(["radii", "--config", cfg, "--out", str(tmp_path),
                 "--threads", "2"]) == 0
    for name in ("radii_d1_J1.csv", "radii_d2_J1.csv", "radii_d3_J1.csv",
                 "radii_d1_J2.csv"):
        lines = (tmp_path / name).read_text().splitlines()
        assert lines[0] == "beta,R_C,R_C_bar,M_IS,M_LG,R_V,a_star_RC,a_star_RCbar"
        assert len(lines) == 6
    # thread count must not change the output
    single = tmp_path / "single"
    assert main(["radii", "--config", cfg, "--out", str(single)]) == 0
    assert (single / "radii_d1_J1.csv").read_bytes() == \
        (tmp_path / "radii_d1_J1.csv").read_bytes()


def test_radii_rejects_empty_grid(tmp_path):
    cfg = write_cfg(tmp_path, {"beta_grid": {"start": 0.0, "stop": 1.0,
                                             "count": 0}})
    assert main(["radii", "--config", cfg, "--out", str(tmp_path)]) == 2


def test_accept_exit_codes(tmp_path, monkeypatch, capsys):
    monkeypatch.setattr(acceptance, "CRITERIA",
                        [("always passes", lambda: (True, "ok"), 60.0)])
    assert main(["accept", "--out", str(tmp_path)]) == 0
    monkeypatch.setattr(acceptance, "CRITERIA",
                        [("always fails", lambda: (False, "bad"), 60.0)])
    assert main(["accept", "--out", str(tmp_path)]) == 4
    out = capsys.readouterr().out
    assert "FAIL" in out
