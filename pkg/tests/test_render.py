import math

import numpy as np
import pytest

from dualprec import df64
from dualprec.datasets import Dataset
from dualprec.errors import (
    DeviceError,
    FeatureError,
    ShaderError,
    ValidationError,
)
from dualprec.fractals import SierpinskiParams, gen_random_2d, sierpinski_points
from dualprec.palette import colorize
from dualprec.render import (
    CameraState,
    DragEvent,
    PipelineVariant,
    ScrollEvent,
    VariantKind,
    build_pipeline,
    camera_update,
    init_context,
    offscreen_capture,
    render_and_measure,
    upload_dataset,
)
from dualprec.render.mailbox import LatestValue, MetricsBoard
from dualprec.render.variants import pack_vertices, unpack_vertices


@pytest.fixture(scope="module")
def ctx():
    return init_context(headless=True, backend="software")


@pytest.fixture(scope="module")
def tet_dataset():
    return colorize(sierpinski_points(SierpinskiParams(n=4)))


def make_points(coords, dims=3):
    coords = np.asarray(coords, dtype=np.float64)
    colors = np.tile([0.25, 0.5, 0.75], (len(coords), 1))
    return Dataset(dims, coords, colors)


class TestVariantLayouts:
    def test_emulated_3d_slots(self):
        v = PipelineVariant.for_dataset("emulated64", 3)
        names = [(a.name, a.location, a.components, a.scalar) for a in v.vertex_layout]
        assert names == [
            ("highPos", 0, 3, "f32"),
            ("lowPos", 1, 3, "f32"),
            ("highColor", 2, 3, "f32"),
            ("lowColor", 3, 3, "f32"),
        ]
        assert v.stride == 48
        assert v.push_constant_size == 64
        assert v.required_device_features == ()

    def test_native_3d_color_skips_slot_one(self):
        v = PipelineVariant.for_dataset("native64", 3)
        assert [(a.name, a.location) for a in v.vertex_layout] == [
            ("pos", 0),
            ("color", 2),  # a 64-bit 3-vector consumes two locations
        ]
        assert v.stride == 48
        assert v.push_constant_size == 128
        assert "shaderFloat64" in v.required_device_features

    def test_native_2d_stride_matches_contract(self):
        v = PipelineVariant.for_dataset("native64", 2)
        assert v.stride == 2 * 8 + 3 * 8
        assert [(a.name, a.location) for a in v.vertex_layout] == [
            ("pos", 0),
            ("color", 1),  # dvec2 fits one location
        ]

    def test_buffer_size_formula(self, ctx):
        ds = gen_random_2d(1000, seed=5)
        for kind in ("native64", "emulated64", "plain32"):
            variant = PipelineVariant.for_dataset(kind, 2)
            buf = upload_dataset(ctx, ds, variant)
            assert buf.nbytes == len(ds) * variant.stride
            assert buf.count == len(ds)


class TestPacking:
    def test_exact_binary32_point_has_zero_lows(self):
        ds = make_points([[0.5, 0.5, 0.5]])
        v = PipelineVariant.for_dataset("emulated64", 3)
        rec = unpack_vertices(pack_vertices(ds, v), v, 1)
        assert (rec["highPos"][0] == np.float32(0.5)).all()
        assert (rec["lowPos"][0] == 0.0).all()

    def test_pi_coordinates_match_split_bitwise(self):
        ds = make_points([[math.pi, -math.pi, math.pi / 3]])
        v = PipelineVariant.for_dataset("emulated64", 3)
        rec = unpack_vertices(pack_vertices(ds, v), v, 1)
        for axis in range(3):
            want = df64.split(ds.coords[0, axis])
            assert float(rec["highPos"][0, axis]) == want.high
            assert float(rec["lowPos"][0, axis]) == want.low

    def test_packing_roundtrip_within_pair_tolerance(self, tet_dataset):
        v = PipelineVariant.for_dataset("emulated64", 3)
        rec = unpack_vertices(pack_vertices(tet_dataset, v), v, len(tet_dataset))
        back = rec["highPos"].astype(np.float64) + rec["lowPos"].astype(np.float64)
        err = np.abs(back - tet_dataset.coords)
        assert (err <= 2.0**-44 * np.maximum(np.abs(tet_dataset.coords), 1e-30)).all()

    def test_native_packing_verbatim(self, tet_dataset):
        v = PipelineVariant.for_dataset("native64", 3)
        rec = unpack_vertices(pack_vertices(tet_dataset, v), v, len(tet_dataset))
        assert (rec["pos"] == tet_dataset.coords).all()
        assert (rec["color"] == tet_dataset.colors).all()

    def test_dims_mismatch_rejected(self):
        ds = gen_random_2d(10, seed=2)
        with pytest.raises(ValidationError):
            pack_vertices(ds, PipelineVariant.for_dataset("native64", 3))


class TestContext:
    def test_software_context_headless(self, ctx):
        assert ctx.device.backend == "software"
        assert ctx.headless
        assert "software" in ctx.describe()

    def test_auto_falls_back_to_software(self):
        assert init_context(backend="auto").device.backend == "software"

    def test_vulkan_backend_names_missing_capability(self):
        with pytest.raises(DeviceError) as err:
            init_context(backend="vulkan")
        assert "Vulkan" in str(err.value)

    def test_windowed_requires_native_device(self):
        with pytest.raises(DeviceError) as err:
            init_context(headless=False, backend="software")
        assert "headless" in str(err.value)

    def test_device_index_env_override(self, monkeypatch):
        monkeypatch.setenv("DUALPREC_DEVICE_INDEX", "2")
        with pytest.raises(DeviceError) as err:
            init_context(backend="software")
        assert "index 2" in str(err.value)

    def test_bad_device_index_env(self, monkeypatch):
        monkeypatch.setenv("DUALPREC_DEVICE_INDEX", "gpu0")
        with pytest.raises(DeviceError):
            init_context(backend="software")


class TestBuildPipeline:
    def test_feature_matrix(self):
        weak = init_context(backend="software", features={"shaderFloat64": False})
        with pytest.raises(FeatureError) as err:
            build_pipeline(weak, PipelineVariant.for_dataset("native64", 3))
        assert "shaderFloat64" in str(err.value)
        assert "emulated64" in str(err.value)  # remediation text
        pipe = build_pipeline(weak, PipelineVariant.for_dataset("emulated64", 3))
        assert pipe.variant.kind is VariantKind.EMULATED64

    def test_both_variants_build_on_capable_device(self, ctx):
        for kind in ("native64", "emulated64"):
            pipe = build_pipeline(ctx, PipelineVariant.for_dataset(kind, 3))
            assert pipe.interface  # slot map populated

    def test_missing_shader_module(self, tmp_path):
        broken = init_context(backend="software", shader_dir=tmp_path)
        with pytest.raises(ShaderError) as err:
            build_pipeline(broken, PipelineVariant.for_dataset("native64", 3))
        assert "native.vert.spv" in str(err.value)

    def test_push_constant_limit(self, ctx):
        variant = PipelineVariant.for_dataset("native64", 3)
        object.__setattr__(variant, "push_constant_size", 256)
        with pytest.raises(FeatureError):
            build_pipeline(ctx, variant)


class TestRenderAndMeasure:
    def test_zero_frames_rejected(self, ctx, tet_dataset):
        variant = PipelineVariant.for_dataset("emulated64", 3)
        pipe = build_pipeline(ctx, variant)
        buf = upload_dataset(ctx, tet_dataset, variant)
        with pytest.raises(ValidationError):
            render_and_measure(ctx, pipe, buf, CameraState(), frames=0)

    def test_metrics_positive_and_flagged(self, ctx, tet_dataset):
        variant = PipelineVariant.for_dataset("native64", 3)
        pipe = build_pipeline(ctx, variant)
        buf = upload_dataset(ctx, tet_dataset, variant)
        m = render_and_measure(ctx, pipe, buf, CameraState(), frames=5,
                               resolution=(256, 256))
        assert m.gpu_render_ms > 0
        assert m.fps > 0
        assert m.frame_index == 5
        assert m.wall_clock_fallback  # software device has no timestamp queries

    def test_empty_upload_rejected(self, ctx):
        empty = Dataset(3, np.empty((0, 3)), np.empty((0, 3)))
        with pytest.raises(ValidationError):
            upload_dataset(ctx, empty, PipelineVariant.for_dataset("native64", 3))


class TestCapture:
    def test_camera_pointing_away_gives_background(self, ctx):
        ds = make_points([[0.0, 0.0, 0.0]])
        variant = PipelineVariant.for_dataset("native64", 3)
        pipe = build_pipeline(ctx, variant)
        buf = upload_dataset(ctx, ds, variant)
        far = CameraState(target=(500.0, 500.0, 500.0), distance=1.0)
        img = offscreen_capture(ctx, pipe, buf, far, resolution=(64, 64))
        assert (img[:, :, :3] == 0).all()

    def test_capture_determinism(self, ctx, tet_dataset):
        variant = PipelineVariant.for_dataset("emulated64", 3)
        pipe = build_pipeline(ctx, variant)
        buf = upload_dataset(ctx, tet_dataset, variant)
        cam = CameraState()
        a = offscreen_capture(ctx, pipe, buf, cam, resolution=(128, 128))
        b = offscreen_capture(ctx, pipe, buf, cam, resolution=(128, 128))
        assert (a == b).all()

    def test_variants_draw_same_vertex_count(self, ctx, tet_dataset):
        counts = set()
        for kind in ("native64", "emulated64"):
            variant = PipelineVariant.for_dataset(kind, 3)
            buf = upload_dataset(ctx, tet_dataset, variant)
            counts.add(buf.count)
        assert len(counts) == 1

    def test_native_close_to_emulated(self, ctx, tet_dataset):
        cam = CameraState()
        images = {}
        for kind in ("native64", "emulated64"):
            variant = PipelineVariant.for_dataset(kind, 3)
            pipe = build_pipeline(ctx, variant)
            buf = upload_dataset(ctx, tet_dataset, variant)
            images[kind] = offscreen_capture(ctx, pipe, buf, cam,
                                             resolution=(256, 256))
        a = images["native64"].astype(np.int16)
        b = images["emulated64"].astype(np.int16)
        close = (np.abs(a - b) <= 1).all(axis=2)
        assert close.mean() >= 0.995

    def test_zeroed_lows_equal_plain32_pixel_exact(self, ctx, tet_dataset):
        cam = CameraState()
        ve = PipelineVariant.for_dataset("emulated64", 3)
        vp = PipelineVariant.for_dataset("plain32", 3)
        img_e = offscreen_capture(
            ctx, build_pipeline(ctx, ve), upload_dataset(ctx, tet_dataset, ve),
            cam, resolution=(128, 128), zero_lows=True,
        )
        img_p = offscreen_capture(
            ctx, build_pipeline(ctx, vp), upload_dataset(ctx, tet_dataset, vp),
            cam, resolution=(128, 128),
        )
        assert (img_e == img_p).all()


class TestSaveCapture:
    def test_png_and_ppm_by_extension(self, ctx, tet_dataset, tmp_path):
        from dualprec.ppm import read_ppm
        from dualprec.render.context import save_capture

        variant = PipelineVariant.for_dataset("native64", 3)
        pipe = build_pipeline(ctx, variant)
        buf = upload_dataset(ctx, tet_dataset, variant)
        img = offscreen_capture(ctx, pipe, buf, CameraState(), resolution=(64, 64))
        save_capture(img, tmp_path / "cap.ppm")
        assert (read_ppm(tmp_path / "cap.ppm") == img[:, :, :3]).all()
        save_capture(img, tmp_path / "cap.png")
        from PIL import Image

        with Image.open(tmp_path / "cap.png") as png:
            assert (np.asarray(png) == img).all()
        with pytest.raises(ValidationError):
            save_capture(img, tmp_path / "cap.bmp")


class TestCamera:
    def test_zero_delta_unchanged(self):
        s = CameraState()
        assert camera_update(s, DragEvent(0.0, 0.0)) == s
        assert camera_update(s, ScrollEvent(0)) == s

    def test_scroll_roundtrip_one_ulp(self):
        s = CameraState(distance=3.0)
        zoomed = camera_update(s, ScrollEvent(4))
        back = camera_update(zoomed, ScrollEvent(-4))
        assert abs(back.distance - 3.0) <= math.ulp(3.0)

    def test_elevation_clamped_to_open_bound(self):
        s = CameraState(elevation=1.5)
        pushed = camera_update(s, DragEvent(0.0, 1e5))
        assert pushed.elevation < math.pi / 2
        CameraState(elevation=pushed.elevation)  # still a valid state

    def test_invalid_states_rejected(self):
        with pytest.raises(ValidationError):
            CameraState(distance=0.0)
        with pytest.raises(ValidationError):
            CameraState(elevation=math.pi / 2)


class TestMailboxes:
    def test_latest_value_wins(self):
        box = LatestValue()
        box.put(1)
        box.put(2)
        assert box.take() == 2
        assert box.take() is None

    def test_metrics_snapshot(self):
        board = MetricsBoard()
        assert board.snapshot() is None
        board.publish("m1")
        board.publish("m2")
        assert board.snapshot() == "m2"
        assert board.snapshot() == "m2"  # snapshots do not drain
