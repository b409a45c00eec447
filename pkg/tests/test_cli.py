import numpy as np
import pytest

from dcsbm.cli import main
from dcsbm.graphio import (
    GraphFormatError,
    read_edge_list,
    read_labels,
    read_model_file,
    write_edge_list,
    write_labels,
)
from dcsbm.model import sample_graph
from tests.test_model import tiny_params


class TestEdgeList:
    def test_basic_parse(self, tmp_path):
        f = tmp_path / "g.edges"
        f.write_text("# comment\n0 1\n1 2\n\n")
        g = read_edge_list(f)
        assert g.n == 3
        assert g.num_edges == 2

    def test_self_loop_line_number(self, tmp_path):
        f = tmp_path / "g.edges"
        f.write_text("0 1\n2 2\n")
        with pytest.raises(GraphFormatError, match=":2"):
            read_edge_list(f)

    def test_duplicate_line_number(self, tmp_path):
        f = tmp_path / "g.edges"
        f.write_text("0 1\n1 0\n")
        with pytest.raises(GraphFormatError, match=":2"):
            read_edge_list(f)

    def test_one_indexed_shift(self, tmp_path):
        f = tmp_path / "g.edges"
        f.write_text("1 2\n2 3\n")
        g = read_edge_list(f, one_indexed=True)
        assert g.n == 3
        assert g.edges[0, 0] == 0

    def test_roundtrip_canonical(self, tmp_path):
        g = sample_graph(tiny_params([[2.0]], n=20), seed=1)
        f = tmp_path / "g.edges"
        write_edge_list(g, f)
        text1 = f.read_text()
        g2 = read_edge_list(f)
        write_edge_list(g2, f)
        assert f.read_text() == text1

    def test_karate_checksum(self):
        g = read_edge_list("data/karate.edges")
        assert g.n == 34
        assert g.num_edges == 78
        assert int(g.degrees.sum()) == 156


class TestLabels:
    def test_roundtrip(self, tmp_path):
        f = tmp_path / "l.txt"
        labels = np.array([0, 1, -1, 2])
        write_labels(labels, f)
        assert np.array_equal(read_labels(f), labels)

    def test_duplicate_vertex(self, tmp_path):
        f = tmp_path / "l.txt"
        f.write_text("0 1\n0 2\n")
        with pytest.raises(GraphFormatError):
            read_labels(f)


class TestModelFile:
    def test_parse_with_family(self, tmp_path):
        f = tmp_path / "model.txt"
        f.write_text(
            "n = 6\nK = 2\nalpha = 0.5 0.5\nblock = 2 1 1 2\n"
            "weights = family:constant:1.5\n"
        )
        p = read_model_file(f)
        assert p.n == 6
        assert np.all(p.weights == 1.5)
        assert np.array_equal(p.sigma, [0, 0, 0, 1, 1, 1])

    def test_parse_explicit_weights_and_sigma(self, tmp_path):
        f = tmp_path / "model.txt"
        f.write_text(
            "n = 4\nK = 2\nalpha = 0.5 0.5\nblock = 1 0.5 0.5 1\n"
            "sigma = 0 1 0 1\nweights = 1 2 3 4\n"
        )
        p = read_model_file(f)
        assert np.array_equal(p.sigma, [0, 1, 0, 1])
        assert np.array_equal(p.weights, [1, 2, 3, 4])

    def test_missing_field(self, tmp_path):
        f = tmp_path / "model.txt"
        f.write_text("n = 4\n")
        with pytest.raises(GraphFormatError):
            read_model_file(f)


class TestCliCommands:
    def test_generate_detect_roundtrip(self, tmp_path, capsys):
        graph_path = tmp_path / "g.edges"
        labels_path = tmp_path / "t.txt"
        out_path = tmp_path / "pred.txt"
        rc = main([
            "generate", "--preset", "eppm", "--n", "300", "--seed", "1",
            "--out-graph", str(graph_path), "--out-labels", str(labels_path),
        ])
        assert rc == 0
        summary = capsys.readouterr().out
        assert "n=300" in summary
        g = read_edge_list(graph_path)
        assert int(g.degrees.sum()) == 2 * g.num_edges
        rc = main([
            "detect", "--graph", str(graph_path), "--f-mult", "0.3",
            "--truth", str(labels_path), "--out", str(out_path),
        ])
        assert rc == 0
        out = capsys.readouterr().out
        assert "L_hat=2" in out
        pred = read_labels(out_path)
        assert pred.size == 300

    def test_generate_invalid_model_exit_2(self, tmp_path):
        bad = tmp_path / "model.txt"
        bad.write_text(
            "n = 4\nK = 1\nalpha = 1\nblock = 9\nweights = family:constant:1\n"
        )
        rc = main([
            "generate", "--model", str(bad), "--out-graph", str(tmp_path / "g"),
        ])
        assert rc == 2

    def test_unwritable_path_exit_3(self, tmp_path):
        rc = main([
            "generate", "--preset", "eppm", "--n", "200",
            "--out-graph", str(tmp_path / "nodir" / "g.edges"),
        ])
        assert rc == 3

    def test_baseline_frobenius(self, tmp_path, capsys):
        graph_path = tmp_path / "g.edges"
        main([
            "generate", "--preset", "eppm", "--n", "200", "--seed", "0",
            "--out-graph", str(graph_path),
        ])
        capsys.readouterr()
        rc = main([
            "baseline", "--graph", str(graph_path), "--method", "frobenius",
            "--operator", "hhat", "--eig-index", "2",
            "--dump-eigvecs", str(tmp_path / "vec.csv"),
        ])
        assert rc == 0
        lines = (tmp_path / "vec.csv").read_text().splitlines()
        assert lines[0].startswith("# dcsbm-csv v1")
        assert lines[1] == "node,value1,value2"
        assert len(lines) == 202

    def test_verify_csv_deterministic(self, tmp_path):
        out1 = tmp_path / "v1.csv"
        out2 = tmp_path / "v2.csv"
        args = [
            "verify", "--preset", "eppm", "--n", "200", "--seeds", "0:2",
        ]
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_text() == out2.read_text()
        assert out1.read_text().startswith("# dcsbm-csv v1 verify")

    def test_experiment_rows(self, tmp_path):
        out = tmp_path / "e.csv"
        rc = main([
            "experiment", "--preset", "eppm", "--n-list", "200",
            "--seeds", "0:2", "--methods", "detect", "--f-mult", "0.3",
            "--out", str(out),
        ])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("# dcsbm-csv v1 experiment")
        assert len(lines) == 4  # schema + header + one row per seed

    def test_alignment_subcommand(self, tmp_path, capsys):
        from dcsbm.spectra import SymMatrix

        rng = np.random.default_rng(0)
        A = rng.standard_normal((6, 6))
        SymMatrix.from_dense(np.diag([2.0, 1.0, 0.5, 0.0, -0.5, -1.0])).dump(
            tmp_path / "a.txt"
        )
        SymMatrix.from_dense(0.05 * (A + A.T)).dump(tmp_path / "d.txt")
        rc = main([
            "alignment", "--matrix-a", str(tmp_path / "a.txt"),
            "--matrix-delta", str(tmp_path / "d.txt"),
        ])
        assert rc == 0
        out = capsys.readouterr().out
        assert "weyl_ok=True" in out


class TestCliExtra:
    def test_experiment_rerun_byte_identical(self, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        args = [
            "experiment", "--preset", "eppm", "--n-list", "200",
            "--seeds", "0:2", "--methods", "detect,frobenius",
            "--f-mult", "0.3", "--eig-index", "2",
        ]
        assert main(args + ["--out", str(out1)]) == 0
        assert main(args + ["--out", str(out2)]) == 0
        assert out1.read_text() == out2.read_text()

    def test_fig1_preset_equal_blocks(self, tmp_path, capsys):
        rc = main([
            "generate", "--preset", "fig1-3block", "--n", "3000", "--seed", "0",
            "--out-graph", str(tmp_path / "g.edges"),
            "--out-labels", str(tmp_path / "t.txt"),
        ])
        assert rc == 0
        labels = read_labels(tmp_path / "t.txt")
        counts = np.bincount(labels)
        assert counts.tolist() == [1000, 1000, 1000]

    def test_detect_degree_floor_flag(self, capsys):
        rc = main([
            "detect", "--graph", "data/karate.edges", "--regime", "logorder",
            "--known-L", "2", "--alpha-min", "0.4", "--leftover", "nearest",
            "--degree-floor", "31.6", "--seed", "1", "--truth", "data/karate.labels",
        ])
        assert rc == 0
        out = capsys.readouterr().out
        assert "misclassification=" in out


class TestHeavyTailModelFile:
    def test_family_with_extra_params(self, tmp_path):
        f = tmp_path / "model.txt"
        f.write_text(
            "n = 100\nK = 2\nalpha = 0.5 0.5\nblock = 2 1 1 2\n"
            "weights = family:heavytail:1.5:0.3:0.1\n"
        )
        p = read_model_file(f)
        k = round(100 ** 0.3)
        assert np.all(p.weights[: 100 - k] == 1.5)
        assert p.weights.max() > 1.5


class TestMalformedMatrixFile:
    def test_alignment_bad_file_exit_2(self, tmp_path, capsys):
        bad = tmp_path / "bad.txt"
        bad.write_text("0 1\n")  # missing value column
        good = tmp_path / "good.txt"
        from dcsbm.spectra import SymMatrix

        SymMatrix.from_dense(np.eye(2)).dump(good)
        rc = main(["alignment", "--matrix-a", str(bad), "--matrix-delta", str(good)])
        assert rc == 2

    def test_labels_non_integer(self, tmp_path):
        f = tmp_path / "l.txt"
        f.write_text("0 liberal\n")
        with pytest.raises(GraphFormatError):
            read_labels(f)


from hypothesis import given, settings
from hypothesis import strategies as st


class TestRoundTripFuzz:
    @settings(max_examples=40, deadline=None)
    @given(
        labels=st.lists(st.integers(-1, 6), min_size=0, max_size=40),
    )
    def test_labels_roundtrip(self, labels, tmp_path_factory):
        path = tmp_path_factory.mktemp("rt") / "l.txt"
        arr = np.array(labels, dtype=np.int64)
        write_labels(arr, path)
        assert np.array_equal(read_labels(path, n=arr.size), arr)

    @settings(max_examples=30, deadline=None)
    @given(
        pairs=st.lists(
            st.tuples(st.integers(0, 19), st.integers(0, 19)).filter(
                lambda p: p[0] != p[1]
            ),
            max_size=60,
            unique_by=lambda p: (min(p), max(p)),
        )
    )
    def test_edge_list_roundtrip(self, pairs, tmp_path_factory):
        from dcsbm.model import Graph

        path = tmp_path_factory.mktemp("rt") / "g.edges"
        us = np.array([p[0] for p in pairs], dtype=np.int64)
        vs = np.array([p[1] for p in pairs], dtype=np.int64)
        g = Graph.from_edge_arrays(20, us, vs)
        write_edge_list(g, path)
        g2 = read_edge_list(path, n=20)
        assert np.array_equal(g.edges, g2.edges)
        assert np.array_equal(g.degrees, g2.degrees)


def test_star_export_surface():
    import dcsbm

    exported = {name: getattr(dcsbm, name, None) for name in dcsbm.__all__}
    missing = [name for name, obj in exported.items() if obj is None]
    assert not missing


def test_edge_list_n_override_too_small(tmp_path):
    f = tmp_path / "g.edges"
    f.write_text("0 5\n")
    with pytest.raises(GraphFormatError, match="outside"):
        read_edge_list(f, n=3)


def test_verify_csv_shape_consistency(tmp_path):
    out = tmp_path / "v.csv"
    assert main([
        "verify", "--preset", "eppm", "--n", "200", "--seeds", "0:3",
        "--out", str(out),
    ]) == 0
    lines = out.read_text().splitlines()
    header_cols = lines[1].count(",")
    assert len(lines) == 5
    for row in lines[2:]:
        assert row.count(",") == header_cols


class TestHelpSurfaces:
    @pytest.mark.parametrize("sub,flags", [
        ("detect", ["--regime", "--f-mult", "--known-L", "--alpha-min",
                    "--leftover", "--degree-floor"]),
        ("baseline", ["--method", "--operator", "--floor", "--eig-index",
                      "--tau", "--lap-n-vectors"]),
        ("experiment", ["--n-list", "--seeds", "--methods", "--with-concentration"]),
        ("generate", ["--preset", "--out-graph", "--out-labels"]),
        ("verify", ["--seeds", "--out"]),
        ("alignment", ["--matrix-a", "--matrix-delta"]),
    ])
    def test_documented_flags_exist(self, sub, flags, capsys):
        with pytest.raises(SystemExit) as exc:
            main([sub, "--help"])
        assert exc.value.code == 0
        text = capsys.readouterr().out
        for flag in flags:
            assert flag in text
