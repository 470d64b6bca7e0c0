"""Tests for the command-line interface: parsing, output schemas, exits."""

import json
import math

import numpy as np
import pytest

import oracles
from qexp import cli
from qexp.information import NonConvergence
from qexp.matcalc import matrix_to_json, random_density


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def matrix_file(tmp_path, name, mat):
    return write_json(tmp_path / name, matrix_to_json(mat))


def channel_file(tmp_path, name, outputs):
    obj = {
        "dim": outputs[0].shape[0],
        "labels": [str(j) for j in range(len(outputs))],
        "outputs": [matrix_to_json(m) for m in outputs],
    }
    return write_json(tmp_path / name, obj)


@pytest.fixture
def rho_file(tmp_path):
    return matrix_file(tmp_path, "rho.json", random_density(2, 2, seed=1))


@pytest.fixture
def sigma_file(tmp_path):
    return matrix_file(tmp_path, "sigma.json", random_density(2, 2, seed=2))


@pytest.fixture
def distinguishable_channel(tmp_path):
    e0 = np.diag([1.0, 0.0]).astype(complex)
    e1 = np.diag([0.0, 1.0]).astype(complex)
    return channel_file(tmp_path, "dist.json", [e0, e1])


@pytest.fixture
def generic_channel(tmp_path):
    outputs = [random_density(2, 2, seed=s) for s in (3, 4, 5)]
    return channel_file(tmp_path, "gen.json", outputs)


def run_cli(capsys, argv):
    code = cli.main(argv)
    return code, capsys.readouterr().out


class TestParsing:
    def test_alpha_accepts_infinity_spellings(self):
        for text in ("inf", "+inf", "Infinity", "oo"):
            assert math.isinf(cli._parse_alpha(text))
        assert cli._parse_alpha(" 2.5 ") == 2.5

    def test_grid_range_is_inclusive(self):
        assert cli._parse_grid("0:1:0.25") == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_grid_comma_list(self):
        assert cli._parse_grid("0.1, 0.2,1") == [0.1, 0.2, 1.0]

    def test_grid_rejects_bad_specs(self):
        with pytest.raises(ValueError):
            cli._parse_grid("0:1:0.2:9")
        with pytest.raises(ValueError):
            cli._parse_grid("0:1:-0.5")
        with pytest.raises(ValueError):
            cli._parse_grid("1:0:0.5")

    def test_encode_value_marks_infinities(self):
        assert cli._encode_value(math.inf) == "+inf"
        assert cli._encode_value(-math.inf) == "-inf"
        assert cli._encode_value(0.25) == 0.25


class TestDivergenceCommand:
    def test_same_file_twice_is_zero(self, capsys, rho_file):
        code, out = run_cli(capsys, [
            "divergence", "--kind", "petz", "--alpha", "0.5",
            rho_file, rho_file])
        assert code == 0
        payload = json.loads(out)
        assert abs(payload["value"]) < 1e-12

    def test_orthogonal_pure_states_are_infinitely_far(
            self, capsys, tmp_path):
        a = matrix_file(tmp_path, "a.json", np.diag([1.0, 0.0]))
        b = matrix_file(tmp_path, "b.json", np.diag([0.0, 1.0]))
        code, out = run_cli(capsys, [
            "divergence", "--kind", "sandwiched", "--alpha", "2",
            a, b])
        assert code == 0
        assert json.loads(out)["value"] == "+inf"

    def test_diagonal_pair_matches_scalar_value(self, capsys, tmp_path):
        p = np.array([0.7, 0.3])
        q = np.array([0.4, 0.6])
        a = matrix_file(tmp_path, "a.json", np.diag(p))
        b = matrix_file(tmp_path, "b.json", np.diag(q))
        code, out = run_cli(capsys, [
            "divergence", "--kind", "petz", "--alpha", "1.7", a, b])
        assert code == 0
        expected = oracles.renyi_divergence(p, q, 1.7)
        assert json.loads(out)["value"] == pytest.approx(expected, abs=1e-12)

    def test_repeated_alpha_gives_value_list(self, capsys, rho_file,
                                             sigma_file):
        code, out = run_cli(capsys, [
            "divergence", "--kind", "petz",
            "--alpha", "0.5", "--alpha", "1", "--alpha", "inf",
            rho_file, sigma_file])
        assert code == 0
        payload = json.loads(out)
        assert "value" not in payload
        assert [row["alpha"] for row in payload["values"]] == \
            [0.5, 1.0, "+inf"]

    def test_bits_units_divide_by_log_two(self, capsys, rho_file,
                                          sigma_file):
        args = ["divergence", "--kind", "sandwiched", "--alpha", "2",
                rho_file, sigma_file]
        _, nats_out = run_cli(capsys, args)
        _, bits_out = run_cli(capsys, args + ["--units", "bits"])
        nats = json.loads(nats_out)["value"]
        bits = json.loads(bits_out)["value"]
        assert bits == pytest.approx(nats / math.log(2), rel=1e-12)

    def test_malformed_matrix_exits_two(self, capsys, tmp_path, rho_file):
        bad = write_json(tmp_path / "bad.json", {"nope": 1})
        code = cli.main(["divergence", "--kind", "petz", "--alpha", "1",
                         bad, rho_file])
        assert code == 2

    def test_missing_file_exits_two(self, rho_file):
        code = cli.main(["divergence", "--kind", "petz", "--alpha", "1",
                         "no-such-file.json", rho_file])
        assert code == 2

    def test_unknown_kind_is_usage_error(self, rho_file):
        with pytest.raises(SystemExit) as err:
            cli.main(["divergence", "--kind", "bogus", "--alpha", "1",
                      rho_file, rho_file])
        assert err.value.code == 2


class TestInfoAndMeanCommands:
    def test_identical_output_channel_has_zero_information(
            self, capsys, tmp_path):
        state = random_density(2, 2, seed=9)
        chan = channel_file(tmp_path, "same.json", [state, state])
        code, out = run_cli(capsys, [
            "info", "--uniform", "--i", "1", "--kind", "petz",
            "--alpha", "0.7", chan])
        assert code == 0
        assert abs(json.loads(out)["value"]) < 1e-10

    def test_distinguishable_binary_gives_log_two(
            self, capsys, distinguishable_channel):
        code, out = run_cli(capsys, [
            "info", "--uniform", "--i", "2", "--kind", "sandwiched",
            "--alpha", "2", distinguishable_channel])
        assert code == 0
        payload = json.loads(out)
        assert payload["value"] == pytest.approx(math.log(2), abs=1e-9)
        assert payload["residual"] <= 1e-8
        assert payload["iterations"] >= 0
        assert payload["mean"]["dim"] == 2

    def test_prior_file_and_uniform_are_exclusive(
            self, tmp_path, generic_channel):
        prior = write_json(tmp_path / "p.json", {"weights": [0.5, 0.25,
                                                             0.25]})
        with pytest.raises(SystemExit) as err:
            cli.main(["info", "--prior", prior, "--uniform", "--i", "1",
                      "--kind", "petz", "--alpha", "0.5", generic_channel])
        assert err.value.code == 2

    def test_prior_file_is_used(self, capsys, tmp_path,
                                distinguishable_channel):
        prior = write_json(tmp_path / "p.json", {"weights": [1.0, 0.0]})
        code, out = run_cli(capsys, [
            "info", "--prior", prior, "--i", "1", "--kind", "petz",
            "--alpha", "0.5", distinguishable_channel])
        assert code == 0
        assert abs(json.loads(out)["value"]) < 1e-10

    def test_missing_prior_flags_exits_two(self, generic_channel):
        code = cli.main(["info", "--i", "1", "--kind", "petz",
                         "--alpha", "0.5", generic_channel])
        assert code == 2

    def test_mean_matches_info_value(self, capsys, generic_channel):
        code, mean_out = run_cli(capsys, [
            "mean", "--uniform", "--i", "1", "--kind", "petz",
            "--alpha", "1.5", generic_channel])
        assert code == 0
        code, info_out = run_cli(capsys, [
            "info", "--uniform", "--i", "1", "--kind", "petz",
            "--alpha", "1.5", generic_channel])
        assert code == 0
        mean_payload = json.loads(mean_out)
        info_payload = json.loads(info_out)
        assert mean_payload["value"] == pytest.approx(
            info_payload["value"], abs=1e-8)
        assert mean_payload["mean"]["dim"] == 2


class TestCapacityCommand:
    def test_distinguishable_binary_capacity(self, capsys,
                                             distinguishable_channel):
        code, out = run_cli(capsys, [
            "capacity", "--i", "1", "--kind", "petz", "--alpha", "0.5",
            distinguishable_channel])
        assert code == 0
        payload = json.loads(out)
        assert payload["value"] == pytest.approx(math.log(2), abs=1e-6)
        assert sum(payload["argmax_prior"]) == pytest.approx(1.0, abs=1e-9)


class TestCurveCommands:
    def test_s_grid_zero_gives_single_zero_row(self, capsys,
                                               generic_channel):
        code, out = run_cli(capsys, [
            "e0-curve", "--uniform", "--i", "1", "--kind", "petz",
            "--s-grid", "0", generic_channel])
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "s,value"
        assert lines[1] == "0.0,0.0"
        assert len(lines) == 2

    def test_grid_sweep_row_count_and_monotone_start(
            self, capsys, generic_channel):
        code, out = run_cli(capsys, [
            "e0-curve", "--uniform", "--i", "1", "--kind", "petz",
            "--s-grid=-0.2:0.4:0.2", generic_channel])
        assert code == 0
        rows = out.strip().splitlines()[1:]
        assert len(rows) == 4
        values = [float(r.split(",")[1]) for r in rows]
        assert values[0] < 0.0 < values[2]

    def test_zero_error_channel_below_capacity_is_unbounded(
            self, capsys, distinguishable_channel):
        code, out = run_cli(capsys, [
            "exponent", "--channel", distinguishable_channel,
            "--rate", "0.3"])
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "rate,value,argmax_s,unbounded"
        fields = lines[1].split(",")
        assert fields[0] == "0.3"
        assert fields[1] == "+inf"
        assert fields[3] == "1"

    def test_fixed_prior_exponent_across_the_rate_axis(
            self, capsys, distinguishable_channel):
        # For two orthogonal outputs the auxiliary curve is s*ln2, so the
        # conjugate is unbounded below ln2, zero at ln2, and R - ln2 above.
        ln2 = math.log(2)
        code, out = run_cli(capsys, [
            "exponent", "--channel", distinguishable_channel, "--uniform",
            "--rate", f"0.3,{ln2},0.8"])
        assert code == 0
        rows = [r.split(",") for r in out.strip().splitlines()[1:]]
        assert rows[0][1] == "+inf" and rows[0][3] == "1"
        assert float(rows[1][1]) == pytest.approx(0.0, abs=1e-8)
        assert float(rows[2][1]) == pytest.approx(0.8 - ln2, abs=5e-3)
        assert rows[2][3] == "0"

    def test_source_exponent_rows(self, capsys, tmp_path):
        side = [random_density(2, 2, seed=s) for s in (11, 12)]
        src = write_json(tmp_path / "src.json", {
            "prior": {"weights": [0.6, 0.4]},
            "side_info": {
                "dim": 2,
                "labels": ["0", "1"],
                "outputs": [matrix_to_json(m) for m in side],
            },
        })
        code, out = run_cli(capsys, [
            "exponent", "--source", src, "--rate", "0.2,0.5"])
        assert code == 0
        rows = out.strip().splitlines()[1:]
        assert len(rows) == 2
        values = [float(r.split(",")[1]) for r in rows]
        assert values[0] >= values[1] >= 0.0

    def test_exponent_without_inputs_exits_two(self):
        code = cli.main(["exponent", "--rate", "0.3"])
        assert code == 2


class TestManifests:
    def test_out_writes_payload_and_sidecar(self, capsys, tmp_path,
                                            rho_file, sigma_file):
        out_path = tmp_path / "result.json"
        code = cli.main([
            "divergence", "--kind", "petz", "--alpha", "0.5",
            "--seed", "9", "--out", str(out_path), rho_file, sigma_file])
        assert code == 0
        assert capsys.readouterr().out == ""
        payload = json.loads(out_path.read_text())
        assert payload["kind"] == "petz"
        manifest = json.loads(
            (tmp_path / "result.json.manifest.json").read_text())
        assert manifest["command"] == "divergence"
        assert manifest["inputs"] == [rho_file, sigma_file]
        assert manifest["parameters"]["alpha"] == [0.5]
        assert manifest["parameters"]["units"] == "nats"
        assert manifest["seed"] == 9
        assert manifest["tool_version"] == cli.__version__

    def test_manifest_flag_with_stdout(self, capsys, tmp_path, rho_file):
        manifest_path = tmp_path / "m.json"
        code, out = run_cli(capsys, [
            "divergence", "--kind", "petz", "--alpha", "1",
            "--manifest", str(manifest_path), rho_file, rho_file])
        assert code == 0
        assert json.loads(out)["value"] == pytest.approx(0.0, abs=1e-12)
        manifest = json.loads(manifest_path.read_text())
        assert manifest["command"] == "divergence"
        assert manifest["seed"] == 0


class TestCheckCommand:
    def test_suite_none_is_empty_success(self, capsys):
        code, out = run_cli(capsys, ["check", "--suite", "none",
                                     "--seed", "11"])
        assert code == 0
        payload = json.loads(out)
        assert payload == {"passed": True, "seed": 11, "suites": []}

    def test_unknown_suite_exits_two(self):
        code = cli.main(["check", "--suite", "no-such-suite"])
        assert code == 2

    def test_dash_and_underscore_names_agree_byte_for_byte(
            self, tmp_path):
        first = tmp_path / "r1.json"
        second = tmp_path / "r2.json"
        base = ["check", "--trials", "10", "--seed", "7"]
        assert cli.main(base + ["--suite", "interpolation-petz",
                                "--out", str(first)]) == 0
        assert cli.main(base + ["--suite", "interpolation_petz",
                                "--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()
        payload = json.loads(first.read_text())
        assert payload["passed"] is True
        report = payload["suites"][0]
        assert report["suite"] == "interpolation_petz"
        assert report["instances"] == 10
        assert report["max_violation"] <= report["tolerance"]

    def test_trials_and_dim_overrides(self, capsys):
        code, out = run_cli(capsys, [
            "check", "--suite", "divergence-laws", "--trials", "15",
            "--dim", "2", "--seed", "3"])
        assert code == 0
        report = json.loads(out)["suites"][0]
        assert report["instances"] == 15
        assert report["passed"] is True

    def test_negative_trials_exits_two(self):
        code = cli.main(["check", "--suite", "divergence-laws",
                         "--trials", "-5"])
        assert code == 2


class TestErrorMapping:
    def test_nonconvergence_exits_three(self, monkeypatch, rho_file):
        def boom(*args, **kwargs):
            raise NonConvergence("fixed point stalled")

        monkeypatch.setattr(cli, "divergence", boom)
        code = cli.main(["divergence", "--kind", "petz", "--alpha", "1",
                         rho_file, rho_file])
        assert code == 3

    def test_runtime_error_exits_three(self, monkeypatch, rho_file):
        def boom(*args, **kwargs):
            raise RuntimeError("numerical failure")

        monkeypatch.setattr(cli, "divergence", boom)
        code = cli.main(["divergence", "--kind", "petz", "--alpha", "1",
                         rho_file, rho_file])
        assert code == 3

    def test_domain_error_exits_two(self, rho_file, sigma_file):
        code = cli.main(["divergence", "--kind", "petz",
                         "--alpha", "-0.5", rho_file, sigma_file])
        assert code == 2

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as err:
            cli.main(["--version"])
        assert err.value.code == 0
        assert cli.__version__ in capsys.readouterr().out
