import json
import math

import numpy as np
import pytest

from tomoqkd.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestAnalyze:
    def test_probability_form_normalized(self, capsys):
        code, out, _ = run_cli(
            capsys, "analyze", "--state", '{"p":[0.8,0.0667,0.0667,0.0667]}'
        )
        assert code == 0
        report = json.loads(out)
        assert report["ck_secure"] is True
        assert report["state"]["p"][0] == pytest.approx(0.8, abs=1e-3)
        assert sum(report["state"]["p"]) == pytest.approx(1.0, abs=1e-15)

    def test_angle_form_werner_point(self, capsys):
        code, out, _ = run_cli(
            capsys,
            "analyze",
            "--state",
            json.dumps({"p00": 0.52, "theta": math.pi / 4, "phi": math.asin(1 / math.sqrt(3))}),
        )
        assert code == 0
        report = json.loads(out)
        assert report["ad_coherent_secure"] is False
        assert report["ad_incoherent_secure"] is True
        assert report["distillable"] is True

    def test_angle_flags(self, capsys):
        code, out, _ = run_cli(capsys, "analyze", "--p00", "0.7", "--theta", "0", "--phi", "0")
        assert code == 0
        assert json.loads(out)["ad_coherent_secure"] is True

    def test_pure_state_informations(self, capsys):
        code, out, _ = run_cli(capsys, "analyze", "--state", '{"p":[1,0,0,0]}')
        assert code == 0
        report = json.loads(out)
        assert report["i_ab"] == pytest.approx(1.0, abs=1e-12)
        assert report["i_be"] == pytest.approx(0.0, abs=1e-12)

    def test_malformed_json(self, capsys):
        code, _, err = run_cli(capsys, "analyze", "--state", "{not json")
        assert code == 2
        assert "malformed" in err

    def test_negative_weight(self, capsys):
        code, _, err = run_cli(capsys, "analyze", "--state", '{"p":[1.2,-0.2,0,0]}')
        assert code == 2
        assert "invalid weight" in err

    def test_state_file(self, capsys, tmp_path):
        path = tmp_path / "state.json"
        path.write_text('{"p":[0.9, 0.05, 0.03, 0.02]}')
        code, out, _ = run_cli(capsys, "analyze", "--state", f"@{path}")
        assert code == 0
        assert json.loads(out)["ck_secure"] is True


WERNER_08 = '{"p":[0.8,0.06666666666666667,0.06666666666666667,0.06666666666666666]}'


class TestSimulate:
    def _args(self, out_dir, seed=42, extra=()):
        return [
            "simulate",
            "--state",
            WERNER_08,
            "--pairs",
            "90000",
            "--block-length",
            "6",
            "--seed",
            str(seed),
            "--policy",
            "round-robin",
            "--paper-faithful",
            "--out",
            str(out_dir),
            *extra,
        ]

    def test_manifest_reproducible(self, capsys, tmp_path):
        code, _, _ = run_cli(capsys, *self._args(tmp_path / "a"))
        assert code == 0
        code, _, _ = run_cli(capsys, *self._args(tmp_path / "b"))
        assert code == 0
        blob_a = (tmp_path / "a" / "manifest.json").read_bytes()
        blob_b = (tmp_path / "b" / "manifest.json").read_bytes()
        assert blob_a == blob_b

    def test_seed_changes_statistics_not_verdicts(self, capsys, tmp_path):
        run_cli(capsys, *self._args(tmp_path / "a", seed=42))
        run_cli(capsys, *self._args(tmp_path / "b", seed=43))
        man_a = json.loads((tmp_path / "a" / "manifest.json").read_text())
        man_b = json.loads((tmp_path / "b" / "manifest.json").read_text())
        assert man_a["tomography"]["p_hat"] != man_b["tomography"]["p_hat"]
        assert man_a["analysis"]["verdicts_agree"] is True
        assert man_b["analysis"]["verdicts_agree"] is True
        key = "estimated_state"
        assert (
            man_a["analysis"][key]["ck_secure"] == man_b["analysis"][key]["ck_secure"] is True
        )

    def test_statistics_match_exact_forms(self, capsys, tmp_path):
        run_cli(capsys, *self._args(tmp_path / "a"))
        manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
        assert abs(manifest["ad"]["acceptance_zscore"]) < 3
        assert abs(manifest["eve_incoherent"]["zscore_vs_mixture"]) < 3

    def test_pairs_below_block_length_rejected(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys,
            "simulate",
            "--state",
            WERNER_08,
            "--pairs",
            "3",
            "--block-length",
            "6",
            "--seed",
            "1",
            "--out",
            str(tmp_path),
        )
        assert code == 2
        assert "n_pairs" in err

    def test_analysis_state_needs_flag(self, capsys, tmp_path):
        argv = [
            "simulate",
            "--state",
            '{"p":[0.4,0.3,0.2,0.1]}',
            "--pairs",
            "9000",
            "--block-length",
            "3",
            "--seed",
            "1",
            "--out",
            str(tmp_path),
        ]
        code, _, err = run_cli(capsys, *argv)
        assert code == 2 and "analysis-mode" in err
        code, _, _ = run_cli(capsys, *argv, "--analysis-mode")
        assert code == 0

    def test_dump_pairs(self, capsys, tmp_path):
        code, _, _ = run_cli(capsys, *self._args(tmp_path, extra=["--dump-pairs"]))
        assert code == 0
        lines = (tmp_path / "pairs.csv").read_text().splitlines()
        assert lines[0].startswith("# tomoqkd")
        assert lines[1] == "pair,basis_a,basis_b,bit_a,bit_b,matched"
        assert len(lines) == 2 + 90000


class TestScan:
    def test_outputs(self, capsys, tmp_path):
        code, out, _ = run_cli(
            capsys, "scan", "--p00", "0.6", "--grid", "64x64", "--out", str(tmp_path),
            "--format", "csv,pgm,json",
        )
        assert code == 0
        csv_lines = (tmp_path / "scan.csv").read_text().splitlines()
        assert len(csv_lines) == 2 + 64 * 64
        for verdict in ("ck", "ad_incoherent", "ad_coherent"):
            assert (tmp_path / f"{verdict}.pgm").exists()
        summary = json.loads((tmp_path / "summary.json").read_text())
        assert summary["fractions"]["ad_incoherent"] == 1.0

    def test_reproducible_bytes(self, capsys, tmp_path):
        for sub in ("a", "b"):
            run_cli(
                capsys, "scan", "--p00", "0.6", "--grid", "16x16",
                "--out", str(tmp_path / sub),
            )
        assert (tmp_path / "a" / "scan.csv").read_bytes() == (tmp_path / "b" / "scan.csv").read_bytes()
        assert (tmp_path / "a" / "ck.pgm").read_bytes() == (tmp_path / "b" / "ck.pgm").read_bytes()

    def test_p00_outside_protocol_domain(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "scan", "--p00", "0.45", "--grid", "8x8", "--out", str(tmp_path)
        )
        assert code == 2 and "analysis mode" in err
        code, _, _ = run_cli(
            capsys, "scan", "--p00", "0.45", "--grid", "8x8", "--out", str(tmp_path),
            "--analysis-mode",
        )
        assert code == 0

    def test_bad_grid_string(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "scan", "--p00", "0.6", "--grid", "64", "--out", str(tmp_path)
        )
        assert code == 2


class TestThreshold:
    def test_value_and_bracket(self, capsys):
        code, out, _ = run_cli(capsys, "threshold", "--tol", "1e-4")
        assert code == 0
        result = json.loads(out)
        assert 0.760 <= result["p00_star"] <= 0.770
        low, high = result["bracket"]
        assert low <= result["p00_star"] <= high
        assert high - low <= 1e-4


class TestSelftest:
    def test_all_suites_pass(self, capsys):
        code, out, _ = run_cli(capsys, "selftest")
        assert code == 0
        lines = [line for line in out.splitlines() if line.startswith(("[ok]", "[FAIL]"))]
        assert len(lines) >= 10
        assert all(line.startswith("[ok]") for line in lines)
