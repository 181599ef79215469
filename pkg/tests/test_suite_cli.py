import csv
import json

import numpy as np
import pytest

from pseudoboson import (
    ConfigError,
    build_map,
    convergence_study,
    load_config,
    run_suite,
    save_riesz_map,
    suite_failed,
)
from pseudoboson import random_riesz_map, make_space
from pseudoboson.cli import main


def write_config(path, **overrides):
    record = {
        "schema_version": 1,
        "dim": 16,
        "map_spec": {"kind": "identity"},
        "z_samples": [[0, 0], [1, 0]],
        "outputs": str(path.parent / "out"),
    }
    record.update(overrides)
    path.write_text(json.dumps(record))
    return path


class TestConfig:
    def test_minimal_roundtrip(self, tmp_path):
        cfg = load_config(write_config(tmp_path / "c.json"))
        assert cfg.dim == 16
        assert cfg.map_spec.kind == "identity"
        assert cfg.z_samples == (0j, 1 + 0j)
        assert cfg.radial_count == 16
        assert cfg.angular_count == 33

    def test_unknown_top_level_key(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write_config(tmp_path / "c.json", extra=1))

    def test_unknown_map_key(self, tmp_path):
        path = write_config(tmp_path / "c.json", map_spec={"kind": "identity", "foo": 1})
        with pytest.raises(ConfigError):
            load_config(path)

    def test_unknown_tolerance_rejected(self, tmp_path):
        path = write_config(tmp_path / "c.json", tolerances={"laddr": 1e-9})
        with pytest.raises(ConfigError):
            load_config(path)

    def test_nonpositive_tolerance_rejected(self, tmp_path):
        path = write_config(tmp_path / "c.json", tolerances={"ladder": 0.0})
        with pytest.raises(ConfigError):
            load_config(path)

    def test_schema_version_enforced(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write_config(tmp_path / "c.json", schema_version=2))

    def test_small_dim_rejected(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(write_config(tmp_path / "c.json", dim=3))

    def test_out_of_regime_needs_flag(self, tmp_path):
        path = write_config(tmp_path / "c.json", z_samples=[[5, 0]])
        with pytest.raises(ConfigError):
            load_config(path)
        load_config(write_config(tmp_path / "c2.json", z_samples=[[5, 0]],
                                 allow_out_of_regime=True))

    def test_overrides(self, tmp_path):
        cfg = load_config(write_config(tmp_path / "c.json"), dim_override=32,
                          seed_override=11, out_override=tmp_path / "elsewhere")
        assert cfg.dim == 32
        assert cfg.seed == 11
        assert cfg.outputs == tmp_path / "elsewhere"
        # quadrature defaults track the overridden dimension
        assert cfg.radial_count == 32

    def test_file_map_spec(self, tmp_path):
        riesz = random_riesz_map(make_space(16), 5.0, seed=2)
        save_riesz_map(riesz, tmp_path / "map.json")
        path = write_config(tmp_path / "c.json",
                            map_spec={"kind": "file", "path": str(tmp_path / "map.json")})
        cfg = load_config(path)
        loaded = build_map(cfg)
        np.testing.assert_array_equal(loaded.S.mat, riesz.S.mat)

    def test_file_map_dim_mismatch(self, tmp_path):
        riesz = random_riesz_map(make_space(8), 5.0, seed=2)
        save_riesz_map(riesz, tmp_path / "map.json")
        path = write_config(tmp_path / "c.json",
                            map_spec={"kind": "file", "path": str(tmp_path / "map.json")})
        with pytest.raises(ConfigError):
            build_map(load_config(path))


class TestRunSuite:
    def test_identity_dim16_all_pass(self, tmp_path):
        # amplitudes small enough that the dim-16 truncation tail stays
        # below the 1e-10 residual bar
        cfg = load_config(write_config(tmp_path / "c.json",
                                       z_samples=[[0, 0], [0.5, 0]]))
        reports = run_suite(cfg)
        assert not suite_failed(reports)
        assert all(r.status == "pass" for r in reports)
        assert max(r.residual for r in reports) <= 1e-10

    def test_projector_dim64_all_pass(self, tmp_path):
        path = write_config(tmp_path / "c.json", dim=64,
                            map_spec={"kind": "projector", "u_index": 0},
                            z_samples=[[0, 0], [1, 0], [1, 1], [0, 2]])
        reports = run_suite(load_config(path))
        assert not suite_failed(reports)
        ids = {r.check_id for r in reports}
        assert "coordinate_l2" in ids and "resolution_identity" in ids

    def test_outputs_written(self, tmp_path):
        cfg = load_config(write_config(tmp_path / "c.json"))
        run_suite(cfg)
        out = tmp_path / "out"
        assert (out / "report.txt").exists()
        assert (out / "report.json").exists()
        assert (out / "residuals.csv").exists()
        records = json.loads((out / "report.json").read_text())
        assert all(rec["status"] == "pass" for rec in records)

    def test_ill_conditioned_map_fails_gracefully(self, tmp_path):
        path = write_config(tmp_path / "c.json",
                            map_spec={"kind": "random", "cond": 1e6, "seed": 1})
        reports = run_suite(load_config(path))
        assert suite_failed(reports)
        assert reports[0].check_id == "riesz_construction"
        assert reports[0].status == "fail"
        assert "error" in reports[0].params

    def test_determinism_modulo_wall_time(self, tmp_path):
        path = write_config(tmp_path / "c.json", dim=24,
                            map_spec={"kind": "random", "cond": 10.0, "seed": 5})

        def run(tag):
            cfg = load_config(path, out_override=tmp_path / tag)
            run_suite(cfg)
            records = json.loads((tmp_path / tag / "report.json").read_text())
            for rec in records:
                rec.pop("wall_time")
            return records

        assert run("a") == run("b")

    def test_out_of_regime_flagged_not_failed(self, tmp_path):
        path = write_config(tmp_path / "c.json", z_samples=[[1, 0], [5, 0]],
                            allow_out_of_regime=True)
        reports = run_suite(load_config(path))
        oor = [r for r in reports if r.status == "out-of-regime"]
        assert oor, "out-of-regime amplitudes must be flagged"
        assert all(r.params.get("z") == "5+0j" for r in oor)
        assert not suite_failed(reports)
        assert suite_failed(reports, strict=True)

    def test_seed_override_changes_random_map(self, tmp_path):
        # a random map spec without its own seed follows the global one
        path = write_config(tmp_path / "c.json", dim=16,
                            map_spec={"kind": "random", "cond": 5.0})
        cfg_a = load_config(path, seed_override=1)
        cfg_b = load_config(path, seed_override=2)
        assert not np.array_equal(build_map(cfg_a).S.mat, build_map(cfg_b).S.mat)
        assert np.array_equal(build_map(cfg_a).S.mat, build_map(cfg_a).S.mat)

    def test_nonground_projector_skips_coordinate_checks(self, tmp_path):
        # the closed-form wavefunctions exist only for the ground-state
        # projector; other indices run everything else
        path = write_config(tmp_path / "c.json",
                            map_spec={"kind": "projector", "u_index": 3})
        reports = run_suite(load_config(path))
        assert not suite_failed(reports)
        ids = {r.check_id for r in reports}
        assert "coordinate_l2" not in ids
        assert "rbcs_pairing" in ids


class TestConvergenceStudy:
    def test_tables(self, tmp_path):
        path = write_config(tmp_path / "c.json",
                            map_spec={"kind": "projector", "u_index": 0},
                            z_samples=[[1, 0]])
        conv_path, quad_path = convergence_study(load_config(path), [16, 32, 64])
        with conv_path.open() as fh:
            rows = list(csv.DictReader(fh))
        assert [int(r["dim"]) for r in rows] == [16, 32, 64]
        eigen = [float(r["eigen_eta"]) for r in rows]
        assert eigen[0] > eigen[1] > eigen[2]
        bch = [float(r["bch_residual"]) for r in rows]
        assert bch[0] >= bch[1] >= bch[2]
        assert all(float(r["resolution_deviation"]) <= 1e-10 for r in rows)

        with quad_path.open() as fh:
            qrows = list(csv.DictReader(fh))
        # quarter resolution degrades by many orders of magnitude
        quarter = [float(r["deviation"]) for r in qrows
                   if int(r["radial_count"]) == int(r["dim"]) // 4]
        full = [float(r["deviation"]) for r in qrows
                if int(r["radial_count"]) == int(r["dim"])]
        assert min(quarter) >= 1e-3
        assert max(full) <= 1e-10

    def test_out_of_regime_flagged(self, tmp_path):
        path = write_config(tmp_path / "c.json", z_samples=[[2.5, 0]],
                            allow_out_of_regime=True)
        conv_path, _ = convergence_study(load_config(path), [16, 32])
        with conv_path.open() as fh:
            rows = list(csv.DictReader(fh))
        assert rows[0]["in_regime"] == "False"  # |z|^2 = 6.25 > 16/4
        assert rows[1]["in_regime"] == "True"   # 6.25 <= 32/4

    def test_dims_must_ascend(self, tmp_path):
        cfg = load_config(write_config(tmp_path / "c.json"))
        with pytest.raises(ConfigError):
            convergence_study(cfg, [32, 16])


class TestCli:
    def test_verify_exit_zero(self, tmp_path, capsys):
        path = write_config(tmp_path / "c.json")
        assert main(["verify", "--config", str(path)]) == 0
        out = capsys.readouterr().out
        assert "pass" in out

    def test_verify_exit_one_on_failure(self, tmp_path):
        path = write_config(tmp_path / "c.json",
                            map_spec={"kind": "random", "cond": 1e6, "seed": 1})
        assert main(["verify", "--config", str(path)]) == 1

    def test_config_error_exit_two(self, tmp_path, capsys):
        path = write_config(tmp_path / "c.json", extra=1)
        assert main(["verify", "--config", str(path)]) == 2
        assert "configuration error" in capsys.readouterr().err

    def test_missing_config_exit_two(self, tmp_path):
        assert main(["verify", "--config", str(tmp_path / "absent.json")]) == 2

    def test_strict_flag(self, tmp_path):
        path = write_config(tmp_path / "c.json", z_samples=[[5, 0]],
                            allow_out_of_regime=True)
        assert main(["verify", "--config", str(path)]) == 0
        assert main(["verify", "--config", str(path), "--strict"]) == 1

    def test_dim_override(self, tmp_path):
        path = write_config(tmp_path / "c.json")
        assert main(["verify", "--config", str(path), "--dim", "8"]) == 0
        report = json.loads((tmp_path / "out" / "report.json").read_text())
        resolution = next(r for r in report if r["check_id"] == "resolution_identity")
        assert resolution["params"]["radial"] == 8

    def test_converge_writes_tables(self, tmp_path, capsys):
        path = write_config(tmp_path / "c.json")
        assert main(["converge", "--config", str(path), "--dims", "8,16"]) == 0
        assert (tmp_path / "out" / "convergence.csv").exists()
        assert (tmp_path / "out" / "quadrature.csv").exists()

    def test_emit_wavefunctions(self, tmp_path):
        path = write_config(tmp_path / "c.json", z_samples=[[1, 0], [0, 1]])
        assert main(["emit-wavefunctions", "--config", str(path)]) == 0
        files = sorted((tmp_path / "out").glob("wavefunctions_*.csv"))
        assert len(files) == 2
        header = files[0].read_text().splitlines()[0]
        assert header == "x,re_Phi,im_Phi,re_phi,im_phi,re_psi,im_psi"
