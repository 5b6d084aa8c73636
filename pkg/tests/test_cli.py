import json

import pytest

from finexp.cli import main

SAMPLE = {
    "spaces": {
        "Theta": ["h0", "h1"],
        "X": ["x0", "x1"],
        "X4": ["p", "q", "r", "s"],
    },
    "distributions": {
        "uniform": {"space": "Theta", "mass": [0.5, 0.5]},
        "uniform4": {"space": "X4", "mass": [0.25, 0.25, 0.25, 0.25]},
    },
    "kernels": {
        "bsc": {"from": "Theta", "to": "X", "matrix": [[0.9, 0.1], [0.1, 0.9]]},
        "ident": {"from": "Theta", "to": "Theta", "matrix": [[1.0, 0.0], [0.0, 1.0]]},
        "point": {"from": "Theta", "to": "X", "matrix": [[1.0, 1.0], [0.0, 0.0]]},
    },
    "losses": {
        "zero_one": {"theta": "Theta", "actions": "Theta", "values": [[0.0, 1.0], [1.0, 0.0]]},
        "mismatched": {"theta": "X4", "actions": "X4", "values": [[0.0] * 4] * 4},
    },
}


@pytest.fixture
def sample_file(tmp_path):
    path = tmp_path / "exp.json"
    path.write_text(json.dumps(SAMPLE))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out else None


class TestValue:
    def test_bsc(self, capsys, sample_file):
        code, out = run(capsys, ["value", sample_file, "--experiment", "bsc", "--prior", "uniform", "--loss", "zero_one"])
        assert code == 0
        assert out["value"] == pytest.approx(0.1, abs=1e-12)
        assert out["bayes_rule"] == {"x0": "h0", "x1": "h1"}

    def test_identity_experiment(self, capsys, sample_file):
        code, out = run(capsys, ["value", sample_file, "--experiment", "ident", "--prior", "uniform", "--loss", "zero_one"])
        assert code == 0
        assert out["value"] == 0.0

    def test_malformed_column_exits_2(self, capsys, tmp_path):
        doc = json.loads(json.dumps(SAMPLE))
        doc["kernels"]["bsc"]["matrix"] = [[0.8, 0.1], [0.1, 0.9]]
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        code = main(["value", str(path), "--experiment", "bsc", "--prior", "uniform", "--loss", "zero_one"])
        assert code == 2
        assert "bsc" in capsys.readouterr().err

    def test_unknown_name_exits_2(self, capsys, sample_file):
        code = main(["value", sample_file, "--experiment", "nope", "--prior", "uniform", "--loss", "zero_one"])
        assert code == 2
        assert "nope" in capsys.readouterr().err

    def test_space_mismatch_exits_3(self, capsys, sample_file):
        code = main(["value", sample_file, "--experiment", "bsc", "--prior", "uniform", "--loss", "mismatched"])
        assert code == 3
        capsys.readouterr()


class TestDeficiency:
    def test_same_kernel(self, capsys, sample_file):
        code, out = run(capsys, ["deficiency", sample_file, "bsc", "bsc", "--prior", "uniform"])
        assert code == 0
        assert out["delta"] == pytest.approx(0.0, abs=1e-7)
        assert out["factors_through"] is True

    def test_point_vs_identity_weighted(self, capsys, sample_file):
        code, out = run(capsys, ["deficiency", sample_file, "point", "ident", "--prior", "uniform"])
        assert code == 0
        assert out["delta"] == pytest.approx(1.0, abs=1e-7)
        assert out["factors_through"] is False

    def test_point_vs_identity_sup(self, capsys, sample_file):
        code, out = run(capsys, ["deficiency", sample_file, "point", "ident", "--sup"])
        assert code == 0
        assert out["delta"] == pytest.approx(1.0, abs=1e-7)
        assert len(out["witness"]) == 2  # rows = outputs of the simulated kernel

    def test_prior_and_sup_exclusive(self, sample_file):
        with pytest.raises(SystemExit):
            main(["deficiency", sample_file, "bsc", "ident", "--prior", "uniform", "--sup"])


class TestAutoencode:
    def test_full_width_lossless(self, capsys, sample_file):
        code, out = run(capsys, ["autoencode", sample_file, "--prior", "uniform4", "--latent", "4"])
        assert code == 0
        assert out["epsilon"] == 0.0

    def test_uniform4_two_codes(self, capsys, sample_file):
        code, out = run(capsys, ["autoencode", sample_file, "--prior", "uniform4", "--latent", "2", "--seed", "5"])
        assert code == 0
        assert out["epsilon"] == pytest.approx(1.0, abs=1e-12)
        assert out["trace"] == sorted(out["trace"])

    def test_deterministic_bytes(self, capsys, sample_file):
        argv = ["autoencode", sample_file, "--prior", "uniform4", "--latent", "2", "--seed", "7"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        assert capsys.readouterr().out == first


class TestStack:
    def test_uniform4_two_one(self, capsys, sample_file):
        code, out = run(capsys, ["stack", sample_file, "--prior", "uniform4", "--sizes", "2,1"])
        assert code == 0
        assert out["layer_epsilon"][0] == pytest.approx(1.0, abs=1e-12)
        assert out["total_epsilon"] <= out["bound"] + 1e-6
        assert out["bound_holds"] is True


class TestIB:
    def test_beta_zero_full_codes(self, capsys, sample_file):
        code, out = run(
            capsys,
            ["ib", sample_file, "--experiment", "bsc", "--prior", "uniform", "--loss", "zero_one", "--latent", "2"],
        )
        assert code == 0
        assert out["distortion"] <= 1e-9
        assert out["trace_nonincreasing"] is True

    def test_huge_beta(self, capsys, sample_file):
        code, out = run(
            capsys,
            [
                "ib", sample_file, "--experiment", "bsc", "--prior", "uniform",
                "--loss", "zero_one", "--latent", "2", "--beta", "1e6",
            ],
        )
        assert code == 0
        assert out["mutual_information_bits"] <= 1e-3


class TestVerify:
    def test_single_suite(self, capsys):
        code, out = run(capsys, ["verify", "--suite", "triangle", "--trials", "5", "--seed", "7", "--max-dim", "3"])
        assert code == 0
        assert out["all_pass"] is True
        (suite,) = out["suites"]
        assert suite["failures"] == 0
        assert suite["checks"] == 10  # triangle + self-distance per trial

    def test_unknown_suite_exits_2(self, capsys):
        code = main(["verify", "--suite", "nope", "--trials", "2"])
        assert code == 2
        capsys.readouterr()

    def test_max_dim_cap(self, capsys):
        code = main(["verify", "--suite", "triangle", "--trials", "1", "--max-dim", "33"])
        assert code == 2
        capsys.readouterr()

    def test_all_deterministic_bytes(self, capsys):
        argv = ["verify", "--suite", "all", "--trials", "2", "--seed", "3", "--max-dim", "3"]
        assert main(argv) == 0
        first = capsys.readouterr().out
        assert main(argv) == 0
        assert capsys.readouterr().out == first
