"""Command-line behavior: golden outputs, exit codes, config files,
sweeps, and output invariants."""

import io
import json
import os
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout

import pytest

from cyclores import cli
from cyclores.core import FieldConfig, ParticleState, derived_scales
from cyclores.transitions import zeta_from_amplitude

from cli_cases import CASES, GOLDEN_DIR


def run_cli(argv):
    """Run the CLI in-process; returns (exit_code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    try:
        with redirect_stdout(out), redirect_stderr(err):
            code = cli.main(list(argv))
    except SystemExit as exc:  # argparse usage errors
        code = exc.code
    return code, out.getvalue(), err.getvalue()


def run_subprocess(argv, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "cyclores", *argv],
        capture_output=True, env=env,
    )


class TestGoldenFiles:
    @pytest.mark.parametrize("name", sorted(CASES))
    def test_byte_equality(self, name, tmp_path):
        argv, stdout_name, table_name = CASES[name]
        argv = list(argv)
        if table_name is not None:
            table_path = tmp_path / "table.out"
            argv += ["--output", str(table_path)]
        code, stdout, stderr = run_cli(argv)
        assert code == 0, stderr
        assert stdout.encode() == (GOLDEN_DIR / stdout_name).read_bytes()
        if table_name is not None:
            assert table_path.read_bytes() == (GOLDEN_DIR / table_name).read_bytes()

    def test_subprocess_matches_golden(self):
        argv, stdout_name, _ = CASES["spectrum"]
        proc = run_subprocess(argv)
        assert proc.returncode == 0
        assert proc.stdout == (GOLDEN_DIR / stdout_name).read_bytes()

    def test_backend_independence(self):
        # The pure-Python twin must emit byte-identical tables.
        pytest.importorskip("cyclores._kernels_cy")
        argv, stdout_name, _ = CASES["transitions"]
        proc = run_subprocess(argv, env_extra={"CYCLORES_PURE_PY": "1"})
        assert proc.returncode == 0
        assert proc.stdout == (GOLDEN_DIR / stdout_name).read_bytes()


class TestExitCodes:
    def test_missing_subcommand(self):
        code, _, _ = run_cli([])
        assert code == 2

    def test_invalid_field(self):
        code, _, err = run_cli(["spectrum", "--H0", "0", "--s-max", "3"])
        assert code == 2
        assert "invalid configuration" in err

    def test_missing_required(self):
        code, _, err = run_cli(["spectrum", "--s-max", "3"])
        assert code == 2
        assert "--H0" in err

    def test_unknown_species(self):
        code, _, _ = run_cli(
            ["spectrum", "--species", "muon", "--H0", "1e4", "--s-max", "1"]
        )
        assert code == 2

    def test_conflicting_zeta_sources(self):
        code, _, err = run_cli(
            ["transitions", "--s", "0", "--zeta", "1", "--A-bar", "1e-7",
             "--T", "1e-6", "--H0", "1e4", "--n-index", "1", "--omega", "1e12",
             "--g", "1"]
        )
        assert code == 2
        assert "exactly one" in err

    def test_no_root_payload(self):
        code, out, _ = run_cli(
            ["resonance", "--H0", "1e4", "--n-index", "1.0",
             "--omega", "1e12", "--g", "-1"]
        )
        assert code == 4
        payload = json.loads(out)
        assert payload["error"] == "no_root"
        assert payload["residual_min"] > 0.0
        assert payload["residual_max"] > payload["residual_min"]

    def test_validate_reports_but_never_gates(self):
        # A hopelessly hard photon fails the smallness conditions, yet
        # the subcommand still exits 0: it reports, it does not gate.
        code, out, _ = run_cli(
            ["validate", "--s", "0", "--H0", "1e4", "--n-index", "1.0",
             "--omega", "1e20", "--g", "1"]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["holds_photon"] is False
        assert payload["holds_exchange"] is None


class TestConfigFile:
    BASE = ["transitions", "--s", "2", "--zeta", "1.5", "--H0", "1e4",
            "--n-index", "1.0", "--omega", "1e12", "--g", "1"]

    def test_config_equals_flags(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "s = 2          # Landau index\n"
            "zeta = 1.5\n"
            "H0 = 1e4\n"
            "n_index = 1.0\n"
            "omega = 1e12\n"
            "g = 1\n"
        )
        code_a, out_a, _ = run_cli(self.BASE)
        code_b, out_b, _ = run_cli(["transitions", "--config", str(cfg)])
        assert code_a == code_b == 0
        assert out_a == out_b

    def test_flag_overrides_config(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("H0 = 1e4\ns_max = 9\n")
        code, out, _ = run_cli(
            ["spectrum", "--config", str(cfg), "--s-max", "1"]
        )
        assert code == 0
        assert len(out.strip().splitlines()) == 3  # header + rows 0..1

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("frequency = 1e12\n")
        code, _, err = run_cli(["spectrum", "--config", str(cfg), "--s-max", "1"])
        assert code == 2
        assert "unknown config keys" in err

    def test_missing_file_rejected(self, tmp_path):
        code, _, _ = run_cli(
            ["spectrum", "--config", str(tmp_path / "absent.cfg"), "--s-max", "1"]
        )
        assert code == 2


class TestTransitionsOutput:
    ARGS = ["transitions", "--s", "5", "--H0", "1e4", "--n-index", "1.0",
            "--omega", "1e12", "--g", "1"]

    def test_probability_and_cumulative_invariants(self):
        code, out, _ = run_cli(self.ARGS + ["--zeta", "3.0"])
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "s_prime,w,photons,delta_pz,delta_E,cumulative"
        last_cum = 0.0
        for line in lines[1:]:
            cells = line.split(",")
            w, cum = float(cells[1]), float(cells[5])
            assert 0.0 <= w <= 1.0
            assert cum >= last_cum
            last_cum = cum
        assert last_cum >= 1.0 - 1e-8

    def test_amplitude_path_matches_zeta_path(self):
        a_bar, t_coh = "2.5e-7", "1.25e-6"
        particle = ParticleState.electron(s=5)
        field = FieldConfig(H0=1e4, n=1.0, omega=1e12, g=1,
                            A_bar=float(a_bar), T=float(t_coh))
        zeta = zeta_from_amplitude(field, derived_scales(particle, field))
        _, out_amp, _ = run_cli(self.ARGS + ["--A-bar", a_bar, "--T", t_coh])
        _, out_zeta, _ = run_cli(self.ARGS + ["--zeta", repr(zeta)])
        assert out_amp == out_zeta

    def test_json_nests_cutoff_meta(self):
        code, out, _ = run_cli(self.ARGS + ["--zeta", "3.0", "--format", "json"])
        assert code == 0
        payload = json.loads(out)
        assert set(payload["cutoff_meta"]) == {
            "s_prime_min", "s_prime_max", "n_dropped", "tail_estimate"
        }
        assert payload["s"] == 5
        assert payload["rows"][0]["s_prime"] == payload["cutoff_meta"]["s_prime_min"]


class TestPulseOutput:
    def test_gaussian_summary_has_no_closed_form(self, tmp_path):
        code, out, _ = run_cli(
            ["pulse", "--H0", "1e4", "--n-index", "1.0",
             "--omega", "175882001077.21634", "--g", "1",
             "--envelope-kind", "gaussian", "--A-peak", "1e-7",
             "--duration", "1e-7", "--grid-points", "9",
             "--output", str(tmp_path / "t.csv")]
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["closed_form_zeta"] is None
        assert payload["relative_gap"] is None
        assert payload["zeta_eff"] > 0.0

    def test_envelope_csv_ingestion(self, tmp_path):
        # 5 ns sampled pulse resolving the carrier (cf. pulse tests).
        import numpy as np

        t_short = 5e-9
        tau = np.linspace(0.0, t_short, 4001)
        values = 1e-7 * np.sin(np.pi * tau / t_short) ** 2
        env_csv = tmp_path / "env.csv"
        lines = ["tau_seconds,A_gauss_cm"]
        lines += [f"{float(t)!r},{float(v)!r}" for t, v in zip(tau, values)]
        env_csv.write_text("\n".join(lines) + "\n")
        code, out, _ = run_cli(
            ["pulse", "--H0", "1e4", "--n-index", "1.0",
             "--omega", "175882001077.21634", "--g", "1",
             "--envelope", str(env_csv), "--grid-points", "5",
             "--output", str(tmp_path / "t.csv")]
        )
        assert code == 0
        assert json.loads(out)["zeta_eff"] > 0.0

    def test_rejects_both_envelope_specs(self, tmp_path):
        code, _, err = run_cli(
            ["pulse", "--H0", "1e4", "--n-index", "1.0", "--omega", "1e12",
             "--g", "1", "--envelope", "x.csv", "--envelope-kind", "flat_top",
             "--A-peak", "1e-7", "--duration", "1e-7"]
        )
        assert code == 2
        assert "not both" in err


class TestSweeps:
    ARGS = ["quasiclassical", "--s", "400", "--sweep", "zeta", "1", "9", "3"]

    def test_deterministic_repeat(self):
        code_a, out_a, _ = run_cli(self.ARGS)
        code_b, out_b, _ = run_cli(self.ARGS)
        assert code_a == code_b == 0
        assert out_a == out_b

    def test_thread_count_does_not_change_output(self, monkeypatch):
        _, serial, _ = run_cli(self.ARGS)
        monkeypatch.setenv("CYCLORES_THREADS", "4")
        _, threaded, _ = run_cli(self.ARGS)
        assert threaded == serial

    def test_csv_format_and_point_count(self):
        code, out, _ = run_cli(
            self.ARGS + ["--sweep", "s", "100", "400", "2", "log", "--format", "csv"]
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].startswith("zeta,s,status")
        assert len(lines) == 1 + 3 * 2  # cartesian grid

    def test_error_points_reported_not_fatal(self):
        # A resonance sweep across polarization-starved configs records
        # no_root statuses and still exits 0.
        code, out, _ = run_cli(
            ["resonance", "--H0", "1e4", "--n-index", "1.0", "--omega", "1e12",
             "--g", "-1", "--sweep", "omega", "1e11", "1e13", "3", "log"]
        )
        assert code == 0
        payload = json.loads(out)
        assert [pt["status"] for pt in payload] == ["no_root"] * 3

    def test_rejects_bad_axes(self):
        base = ["quasiclassical", "--s", "400", "--zeta", "1"]
        assert run_cli(base + ["--sweep", "zeta", "1", "9", "0"])[0] == 2
        assert run_cli(base + ["--sweep", "zeta", "-1", "9", "3", "log"])[0] == 2
        assert run_cli(base + ["--sweep", "omega", "1", "9", "3"])[0] == 2
        assert run_cli(base + ["--sweep", "zeta", "1", "9", "3", "cubic"])[0] == 2


class TestSpectrumOutput:
    def test_monotone_energies(self):
        code, out, _ = run_cli(["spectrum", "--H0", "1e4", "--s-max", "3"])
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "s,E_erg,E_over_mc2"
        energies = [float(line.split(",")[1]) for line in lines[1:]]
        assert len(energies) == 4
        assert energies == sorted(energies)
        assert all(b > a for a, b in zip(energies, energies[1:]))

    def test_json_variant(self):
        code, out, _ = run_cli(
            ["spectrum", "--H0", "1e4", "--s-max", "1", "--format", "json"]
        )
        assert code == 0
        payload = json.loads(out)
        assert [row["s"] for row in payload["rows"]] == [0, 1]
