import json
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

import svdlab.cli as climod
from conftest import PAIR_2X2, PAIR_SIGMA
from svdlab.backends import BACKENDS
from svdlab.cli import main, read_label_csv
from svdlab.eigenface import load_model
from svdlab.matrix import read_matrix_text, write_matrix_text

FACES = Path(__file__).parent / "data" / "faces"


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def pair_file(tmp_path):
    p = tmp_path / "pair.txt"
    write_matrix_text(p, PAIR_2X2)
    return p


def rotation(n, i, j, theta):
    g = np.eye(n)
    c, s = np.cos(theta), np.sin(theta)
    g[i, i] = g[j, j] = c
    g[i, j], g[j, i] = -s, s
    return g


class TestDecompose:
    @pytest.mark.parametrize("alg", sorted(BACKENDS))
    def test_all_backends_on_the_known_pair(self, runner, tmp_path, pair_file, alg):
        prefix = tmp_path / f"out_{alg}"
        result = runner.invoke(
            main, ["decompose", "--alg", alg, "--input", str(pair_file), "--out", str(prefix)]
        )
        assert result.exit_code == 0, result.output
        assert "wrote" in result.output and "residual" in result.output
        u = read_matrix_text(f"{prefix}.U.txt")
        s = read_matrix_text(f"{prefix}.S.txt")
        v = read_matrix_text(f"{prefix}.V.txt")
        assert np.allclose(np.sort(np.diag(s))[::-1], PAIR_SIGMA, atol=5e-5)
        assert np.allclose(u @ s @ v.T, PAIR_2X2, atol=1e-8)

    def test_missing_input_is_a_usage_error(self, runner, tmp_path):
        result = runner.invoke(
            main,
            ["decompose", "--alg", "qr", "--input", str(tmp_path / "nope.txt"),
             "--out", str(tmp_path / "o")],
        )
        assert result.exit_code == 2

    def test_malformed_matrix_exits_2(self, runner, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("2\n1.0 2.0\n")
        result = runner.invoke(
            main, ["decompose", "--alg", "qr", "--input", str(bad), "--out", str(tmp_path / "o")]
        )
        assert result.exit_code == climod.EXIT_INPUT

    def test_asymmetric_matrix_exits_2(self, runner, tmp_path):
        bad = tmp_path / "asym.txt"
        write_matrix_text(bad, np.array([[1.0, 2.0], [0.0, 1.0]]))
        result = runner.invoke(
            main, ["decompose", "--alg", "qr", "--input", str(bad), "--out", str(tmp_path / "o")]
        )
        assert result.exit_code == climod.EXIT_INPUT
        assert "symmetric" in result.output

    def test_gk_close_pair_exits_3(self, runner, tmp_path):
        # |lambda| pair split by 1e-9 starves the unshifted chase
        q = rotation(3, 0, 1, 0.4) @ rotation(3, 1, 2, 1.1)
        a = q @ np.diag([3.0, 1.0 + 1e-9, -1.0]) @ q.T
        a = 0.5 * (a + a.T)
        src = tmp_path / "close.txt"
        write_matrix_text(src, a)
        result = runner.invoke(
            main, ["decompose", "--alg", "gk", "--input", str(src), "--out", str(tmp_path / "o")]
        )
        assert result.exit_code == climod.EXIT_CONVERGENCE
        assert "did not converge" in result.output

    def test_residual_gate_exits_4(self, runner, tmp_path, pair_file, monkeypatch):
        real = climod._decompose

        def corrupt(alg, a, tol, cutoff, scheme):
            res = real(alg, a, tol, cutoff, scheme)
            res.u[:, 0] = 0.0
            return res

        monkeypatch.setattr(climod, "_decompose", corrupt)
        result = runner.invoke(
            main,
            ["decompose", "--alg", "qr", "--input", str(pair_file), "--out", str(tmp_path / "o")],
        )
        assert result.exit_code == climod.EXIT_RESIDUAL
        assert "exceeds" in result.output

    def test_unknown_alg_rejected_by_parser(self, runner, pair_file, tmp_path):
        result = runner.invoke(
            main, ["decompose", "--alg", "magic", "--input", str(pair_file), "--out", "o"]
        )
        assert result.exit_code == 2


class TestBench:
    def test_csv_output_parses(self, runner):
        result = runner.invoke(
            main,
            ["bench", "--algs", "qr,dc", "--sizes", "8,12", "--reps", "1",
             "--seed", "3", "--format", "csv"],
        )
        assert result.exit_code == 0, result.output
        lines = result.stdout.strip().splitlines()
        assert lines[0] == "alg,n,rep_median_s,rep_min_s,rep_max_s,residual,orth_defect"
        assert len(lines) == 5
        for line in lines[1:]:
            alg, n, med = line.split(",")[:3]
            assert alg in ("qr", "dc") and int(n) in (8, 12)
            assert float(med) >= 0.0

    def test_progress_goes_to_stderr(self, runner):
        result = runner.invoke(
            main, ["bench", "--algs", "qr", "--sizes", "8", "--reps", "1", "--format", "csv"]
        )
        assert "running qr n=8" in result.stderr
        assert "running" not in result.stdout

    def test_table_format(self, runner):
        result = runner.invoke(main, ["bench", "--algs", "qr", "--sizes", "8", "--reps", "1"])
        assert result.exit_code == 0
        assert "median (s)" in result.output

    def test_unknown_backend_exits_2(self, runner):
        result = runner.invoke(main, ["bench", "--algs", "qr,nope", "--sizes", "8"])
        assert result.exit_code == climod.EXIT_INPUT
        assert "unknown backend" in result.output

    def test_bad_sizes_exit_2(self, runner):
        result = runner.invoke(main, ["bench", "--algs", "qr", "--sizes", "1"])
        assert result.exit_code == climod.EXIT_INPUT


class TestEigenfacesCli:
    def test_train_then_classify(self, runner, tmp_path):
        model_path = tmp_path / "faces.eigf"
        result = runner.invoke(
            main,
            ["eigenfaces", "train", "--dir", str(FACES), "--k", "4", "--alg", "qr",
             "--out", str(model_path)],
        )
        assert result.exit_code == 0, result.output
        assert "trained on 10 images, kept 4 eigenfaces" in result.output
        model = load_model(model_path)
        assert model.k == 4 and model.training_count == 10

        for query, expect in (("alpha_query.pgm", "alpha"), ("beta_query.pgm", "beta")):
            res = runner.invoke(
                main,
                ["eigenfaces", "classify", "--model", str(model_path),
                 "--image", str(FACES / query)],
            )
            assert res.exit_code == 0, res.output
            assert f"label: {expect}" in res.output

    def test_classify_json(self, runner, tmp_path):
        model_path = tmp_path / "faces.eigf"
        runner.invoke(
            main,
            ["eigenfaces", "train", "--dir", str(FACES), "--k", "3", "--alg", "qr",
             "--out", str(model_path)],
        )
        result = runner.invoke(
            main,
            ["eigenfaces", "classify", "--model", str(model_path),
             "--image", str(FACES / "beta_query.pgm"), "--json"],
        )
        assert result.exit_code == 0
        payload = json.loads(result.output)
        assert payload["label"] == "beta"
        assert payload["omega_distance"] >= 0.0
        assert payload["reconstruction_error"] >= 0.0

    def test_train_on_empty_dir_exits_2(self, runner, tmp_path):
        result = runner.invoke(
            main, ["eigenfaces", "train", "--dir", str(tmp_path), "--out", str(tmp_path / "m")]
        )
        assert result.exit_code == climod.EXIT_INPUT
        assert "no class-subdirectory PGM files" in result.output

    def test_classify_bad_model_exits_2(self, runner, tmp_path):
        bad = tmp_path / "model.eigf"
        bad.write_bytes(b"garbage here")
        result = runner.invoke(
            main,
            ["eigenfaces", "classify", "--model", str(bad),
             "--image", str(FACES / "alpha_query.pgm")],
        )
        assert result.exit_code == climod.EXIT_INPUT


class TestPerclosCli:
    def write_csv(self, path, rows, header="timestamp_s,label"):
        lines = ([header] if header else []) + [f"{t},{l}" for t, l in rows]
        path.write_text("\n".join(lines) + "\n")

    def test_single_window_exact(self, runner, tmp_path):
        p = tmp_path / "labels.csv"
        rows = [(float(i), "closed" if i < 6 else "open") for i in range(60)]
        self.write_csv(p, rows)
        result = runner.invoke(main, ["perclos", "--labels", str(p)])
        assert result.exit_code == 0, result.output
        assert result.output == "0.000,180.000,10\n"

    def test_window_option(self, runner, tmp_path):
        p = tmp_path / "labels.csv"
        rows = [(float(i), "open") for i in range(60)]
        self.write_csv(p, rows)
        result = runner.invoke(main, ["perclos", "--labels", str(p), "--window", "30"])
        lines = result.output.strip().splitlines()
        assert [l.split(",")[0] for l in lines] == ["0.000", "30.000"]
        assert all(l.endswith(",0") for l in lines)

    def test_headerless_csv_accepted(self, runner, tmp_path):
        p = tmp_path / "labels.csv"
        self.write_csv(p, [(0.0, "closed"), (1.0, "open")], header=None)
        result = runner.invoke(main, ["perclos", "--labels", str(p)])
        assert result.exit_code == 0
        assert result.output == "0.000,180.000,50\n"

    def test_bad_timestamp_exits_2(self, runner, tmp_path):
        p = tmp_path / "labels.csv"
        p.write_text("timestamp_s,label\nsoon,open\n")
        result = runner.invoke(main, ["perclos", "--labels", str(p)])
        assert result.exit_code == climod.EXIT_INPUT
        assert "line 2: bad timestamp" in result.output

    def test_wrong_column_count_exits_2(self, runner, tmp_path):
        p = tmp_path / "labels.csv"
        p.write_text("0.0,open,extra\n")
        result = runner.invoke(main, ["perclos", "--labels", str(p)])
        assert result.exit_code == climod.EXIT_INPUT
        assert "expected timestamp_s,label" in result.output

    def test_bad_label_names_the_file(self, runner, tmp_path):
        p = tmp_path / "labels.csv"
        self.write_csv(p, [(0.0, "blinking")])
        result = runner.invoke(main, ["perclos", "--labels", str(p)])
        assert result.exit_code == climod.EXIT_INPUT
        assert "labels.csv" in result.output


class TestReadLabelCsv:
    def test_labels_lowercased(self, tmp_path):
        p = tmp_path / "labels.csv"
        p.write_text("0.0,OPEN\n1.0,Closed\n")
        series = read_label_csv(p)
        assert series.labels == ("open", "closed")

    def test_blank_lines_skipped(self, tmp_path):
        p = tmp_path / "labels.csv"
        p.write_text("0.0,open\n\n1.0,closed\n\n")
        series = read_label_csv(p)
        assert len(series.labels) == 2


def test_help_lists_commands(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    for cmd in ("decompose", "bench", "eigenfaces", "perclos"):
        assert cmd in result.output
