import numpy as np
import pytest
from click.testing import CliRunner

from dualprec.cli import cli
from dualprec.dataset_io import read_csv
from dualprec.ppm import read_ppm
from dualprec.reports import BenchReport

from test_gltf import VERTS, build_glb, minimal_doc


@pytest.fixture()
def runner():
    return CliRunner()


def run_ok(runner, args):
    result = runner.invoke(cli, args)
    assert result.exit_code == 0, result.output + str(result.exception)
    return result


class TestGenerate:
    def test_random2d(self, runner, tmp_path):
        out = tmp_path / "pts.csv"
        result = run_ok(runner, ["generate", "random2d", "--count", "1000",
                                 "--seed", "7", "--out", str(out)])
        assert "points:   1000" in result.output
        ds = read_csv(out)
        assert len(ds) == 1000 and ds.dims == 2

    def test_menger_row_count(self, runner, tmp_path):
        out = tmp_path / "menger.csv"
        run_ok(runner, ["generate", "menger", "--iterations", "2", "--out", str(out)])
        assert len(read_csv(out)) == 3200  # 400 cubes * 8 corners

    def test_unknown_generator_is_usage_error(self, runner, tmp_path):
        result = runner.invoke(cli, ["generate", "bogus", "--out",
                                     str(tmp_path / "x.csv")])
        assert result.exit_code == 2
        assert "random2d" in result.output  # valid names listed

    def test_determinism(self, runner, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            run_ok(runner, ["generate", "random2d", "--count", "200",
                            "--seed", "3", "--out", str(out)])
        assert a.read_bytes() == b.read_bytes()


class TestConvert:
    def test_glb_fixture_roundtrip(self, runner, tmp_path):
        glb = tmp_path / "model.glb"
        glb.write_bytes(build_glb(minimal_doc(3), VERTS.tobytes()))
        out = tmp_path / "model.csv"
        result = run_ok(runner, ["convert", str(glb), str(out)])
        assert "extracted 3 points" in result.output
        ds = read_csv(out)
        assert (ds.coords == VERTS.astype(np.float64)).all()

    def test_non_glb_input(self, runner, tmp_path):
        bad = tmp_path / "bad.glb"
        bad.write_bytes(b"this is not a container")
        result = runner.invoke(cli, ["convert", str(bad), str(tmp_path / "o.csv")])
        assert result.exit_code == 1
        assert "error:" in result.output

    def test_two_primitive_concatenation(self, runner, tmp_path):
        doc = minimal_doc(3)
        doc["accessors"].append(
            {"bufferView": 1, "componentType": 5126, "count": 2, "type": "VEC3"}
        )
        doc["bufferViews"].append({"buffer": 0, "byteOffset": 36, "byteLength": 24})
        doc["meshes"][0]["primitives"].append({"attributes": {"POSITION": 1}})
        extra = np.array([[9, 9, 9], [8, 8, 8]], np.float32)
        glb = tmp_path / "two.glb"
        glb.write_bytes(build_glb(doc, VERTS.tobytes() + extra.tobytes()))
        out = tmp_path / "two.csv"
        run_ok(runner, ["convert", str(glb), str(out)])
        ds = read_csv(out)
        assert len(ds) == 5
        assert (ds.coords[3] == [9.0, 9.0, 9.0]).all()


class TestAnalyze:
    def test_far_translation_dominance(self, runner, tmp_path):
        data = tmp_path / "pts.csv"
        run_ok(runner, ["generate", "random2d", "--count", "2000",
                        "--seed", "1", "--out", str(data)])
        out = tmp_path / "report.csv"
        fig = tmp_path / "report.png"
        result = run_ok(runner, ["analyze", str(data), "--translate", "1e6,1e6,0",
                                 "--out", str(out), "--figure", str(fig)])
        lines = out.read_text().splitlines()
        assert lines[0].startswith("precision,max_abs_ndc_error")
        rows = {ln.split(",")[0]: ln.split(",") for ln in lines[1:]}
        assert float(rows["df64"][3]) * 1e3 <= float(rows["binary32"][3])
        assert fig.exists() and fig.stat().st_size > 0
        assert "improves max pixel error" in result.output

    def test_missing_dataset_nonzero_exit(self, runner, tmp_path):
        result = runner.invoke(cli, ["analyze", str(tmp_path / "absent.csv"),
                                     "--out", str(tmp_path / "r.csv")])
        assert result.exit_code == 1
        assert "error:" in result.output


class TestBench:
    def test_two_variant_report(self, runner, tmp_path):
        data = tmp_path / "tet.csv"
        run_ok(runner, ["generate", "sierpinski", "--iterations", "4",
                        "--out", str(data)])
        out = tmp_path / "bench.csv"
        md = tmp_path / "bench.md"
        fig = tmp_path / "bench.png"
        run_ok(runner, ["bench", str(data), "--frames", "3", "--out", str(out),
                        "--markdown", str(md), "--figure", str(fig),
                        "--resolution", "128x128"])
        report = BenchReport.read_csv(out)
        assert len(report.rows) == 2
        assert [r.variant for r in report.rows] == ["emulated64", "native64"]
        assert all(r.vertices == 1024 for r in report.rows)
        assert all(r.gpu_render_ms > 0 and r.fps > 0 for r in report.rows)
        assert all(r.wall_clock_fallback for r in report.rows)
        assert "Rendering Time (milliseconds)" in md.read_text()
        assert fig.exists()

    def test_unsupported_variant_warns_and_exits_zero(self, runner, tmp_path,
                                                      monkeypatch):
        from dualprec.render import software

        monkeypatch.setitem(software._DEFAULT_FEATURES, "shaderFloat64", False)
        data = tmp_path / "pts.csv"
        run_ok(runner, ["generate", "random2d", "--count", "100",
                        "--out", str(data)])
        out = tmp_path / "bench.csv"
        result = run_ok(runner, ["bench", str(data), "--frames", "2",
                                 "--out", str(out), "--resolution", "64x64"])
        assert "warning" in result.output
        report = BenchReport.read_csv(out)
        by_variant = {r.variant: r for r in report.rows}
        assert not by_variant["native64"].supported
        assert by_variant["emulated64"].supported

    def test_zero_frames_usage_error(self, runner, tmp_path):
        data = tmp_path / "pts.csv"
        run_ok(runner, ["generate", "random2d", "--count", "10",
                        "--out", str(data)])
        result = runner.invoke(cli, ["bench", str(data), "--frames", "0",
                                     "--out", str(tmp_path / "r.csv")])
        assert result.exit_code == 2

    def test_row_order_mirrors_tables(self, runner, tmp_path):
        paths = []
        for i, (gen, it) in enumerate((("menger", "1"), ("sierpinski", "2"))):
            p = tmp_path / f"d{i}.csv"
            run_ok(runner, ["generate", gen, "--iterations", it, "--out", str(p)])
            paths.append(str(p))
        out = tmp_path / "bench.csv"
        run_ok(runner, ["bench", *paths, "--frames", "2", "--out", str(out),
                        "--resolution", "64x64"])
        report = BenchReport.read_csv(out)
        # variant-major blocks (emulated first, then native), dataset order
        # preserved inside each block; dataset names come from the file stems
        assert [(r.variant, r.dataset) for r in report.rows] == [
            ("emulated64", "d0"),
            ("emulated64", "d1"),
            ("native64", "d0"),
            ("native64", "d1"),
        ]


class TestMandelbrot:
    def test_images_and_collapse_rows(self, runner, tmp_path):
        out = tmp_path / "mb"
        run_ok(runner, ["mandelbrot", "--zooms", "1e-1,1e-6", "--width", "64",
                        "--max-iter", "20", "--out-dir", str(out),
                        "--figure", str(out / "collapse.png")])
        images = sorted(p.name for p in out.glob("*.ppm"))
        assert images == [
            "mandelbrot_binary32_zoom0.1.ppm",
            "mandelbrot_binary32_zoom1e-06.ppm",
            "mandelbrot_binary64_zoom0.1.ppm",
            "mandelbrot_binary64_zoom1e-06.ppm",
        ]
        img = read_ppm(out / images[0])
        assert img.shape == (64, 64, 3)
        rows = (out / "collapse.csv").read_text().splitlines()
        assert rows[0] == "precision,zoom,width,collapse_ratio"
        assert len(rows) == 5
        assert (out / "collapse.png").exists()

    def test_duplicate_invocation_identical(self, runner, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            run_ok(runner, ["mandelbrot", "--zooms", "1e-2", "--width", "32",
                            "--max-iter", "16", "--out-dir", str(out)])
        fa = sorted(a.glob("*.ppm"))
        fb = sorted(b.glob("*.ppm"))
        assert [p.read_bytes() for p in fa] == [p.read_bytes() for p in fb]


class TestView:
    def test_headless_guidance(self, runner, tmp_path):
        data = tmp_path / "pts.csv"
        run_ok(runner, ["generate", "random2d", "--count", "10",
                        "--out", str(data)])
        result = runner.invoke(cli, ["view", str(data)])
        assert result.exit_code == 1
        assert "bench --headless" in result.output


class TestConfig:
    def test_config_presets_flags(self, runner, tmp_path):
        cfg = tmp_path / "suite.cfg"
        cfg.write_text("generate.count = 321  # smaller default\n")
        out = tmp_path / "pts.csv"
        run_ok(runner, ["--config", str(cfg), "generate", "random2d",
                        "--out", str(out)])
        assert len(read_csv(out)) == 321

    def test_explicit_flag_overrides_config(self, runner, tmp_path):
        cfg = tmp_path / "suite.cfg"
        cfg.write_text("generate.count = 321\n")
        out = tmp_path / "pts.csv"
        run_ok(runner, ["--config", str(cfg), "generate", "random2d",
                        "--count", "17", "--out", str(out)])
        assert len(read_csv(out)) == 17

    def test_malformed_config(self, runner, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("this line has no equals sign\n")
        result = runner.invoke(cli, ["--config", str(cfg), "generate",
                                     "random2d", "--out", str(tmp_path / "x.csv")])
        assert result.exit_code == 2
