"""Command-line surface: generate | convert | analyze | bench | mandelbrot | view.

Every numeric parameter is a long flag with a documented default, so the
full experiment protocol is scriptable.  A config file of flat
``section.key = value`` lines may pre-set any flag; explicit flags win.
"""

from __future__ import annotations

from pathlib import Path

import click

from . import __version__
from .datasets import Dataset, dataset_stats
from .dataset_io import read_csv, write_csv
from .errors import DualprecError, FeatureError
from .figures import analyze_figure, bench_figure, collapse_figure
from .fractals import (
    JuliaParams,
    MandelbrotView,
    MandelbulbParams,
    MengerParams,
    SierpinskiParams,
    gen_random_2d,
    julia_quat_points,
    mandelbulb_points,
    menger_points,
    sierpinski_points,
)
from .gltf import extract_points_from_glb
from .palette import Palette, colorize
from .precision import (
    ErrorReport,
    TransformStack,
    collapse_ratio,
    error_report,
    render_mandelbrot_image,
)
from .render import (
    CameraState,
    PipelineVariant,
    build_pipeline,
    init_context,
    render_and_measure,
    upload_dataset,
)
from .reports import BenchReport, BenchRow

GENERATORS = ("random2d", "mandelbulb", "julia", "menger", "sierpinski")
VARIANTS = ("emulated64", "native64", "plain32")


def load_config(path: str) -> dict:
    """Flat ``section.key = value`` lines; '#' starts a comment."""
    tree: dict = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise click.UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        node = tree
        *sections, leaf = key.split(".")
        for section in sections:
            node = node.setdefault(section, {})
        node[leaf.replace("-", "_")] = value
    return tree


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except DualprecError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(1)


@click.group(cls=_Group)
@click.version_option(__version__)
@click.option(
    "--config",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Flat key=value file pre-setting any flag (e.g. 'bench.frames = 30').",
)
@click.pass_context
def cli(ctx, config):
    """Dual-precision point-cloud benchmark suite."""
    if config:
        ctx.default_map = load_config(config)


def _echo_stats(ds: Dataset) -> None:
    stats = dataset_stats(ds)
    bbox = " ".join(f"[{lo:.6g}, {hi:.6g}]" for lo, hi in stats.bbox)
    click.echo(f"points:   {stats.count}")
    click.echo(f"bbox:     {bbox}")
    click.echo(f"checksum: {stats.checksum:016x}")


@cli.command()
@click.argument("generator", type=click.Choice(GENERATORS))
@click.option("--out", required=True, type=click.Path(writable=True),
              help="Destination CSV path.")
@click.option("--count", default=10000, show_default=True,
              help="random2d: number of points.")
@click.option("--seed", default=0, show_default=True, help="random2d: RNG seed.")
@click.option("--iterations", default=None, type=int,
              help="menger/sierpinski recursion depth, mandelbulb/julia "
                   "iteration budget (per-generator default otherwise).")
@click.option("--resolution", default=None, type=int,
              help="mandelbulb/julia lattice resolution.")
@click.option("--power", default=8.0, show_default=True, help="mandelbulb power.")
@click.option("--bailout", default=4.0, show_default=True,
              help="mandelbulb squared-radius bailout.")
@click.option("--threshold", default=4.0, show_default=True,
              help="julia quaternion norm bound.")
@click.option("--julia-c", default="-0.2,0.6,0.2,0.2", show_default=True,
              help="julia constant as x,y,z,w.")
@click.option("--cube-size", default=1.0, show_default=True, help="menger size.")
@click.option("--dedup/--no-dedup", default=False, show_default=True,
              help="menger: drop shared corner vertices.")
@click.option("--paint/--no-paint", default=True, show_default=True,
              help="apply the hue ramp before writing.")
def generate(generator, out, count, seed, iterations, resolution, power,
             bailout, threshold, julia_c, cube_size, dedup, paint):
    """Generate a dataset and write it as CSV."""
    if generator == "random2d":
        ds = gen_random_2d(count, seed)
    elif generator == "mandelbulb":
        ds = mandelbulb_points(
            MandelbulbParams(
                max_iterations=iterations or 10,
                bailout=bailout,
                power=power,
                resolution=resolution or 64,
            )
        )
    elif generator == "julia":
        c = tuple(float(v) for v in julia_c.split(","))
        if len(c) != 4:
            raise click.UsageError("--julia-c needs four comma-separated values")
        ds = julia_quat_points(
            JuliaParams(c=c, max_iter=iterations or 32, threshold=threshold,
                        resolution=resolution or 32)
        )
    elif generator == "menger":
        ds = menger_points(
            MengerParams(
                max_iterations=iterations if iterations is not None else 3,
                cube_size=cube_size,
                deduplicate=dedup,
            )
        )
    else:
        ds = sierpinski_points(
            SierpinskiParams(n=iterations if iterations is not None else 5)
        )
    if len(ds) == 0:
        raise click.ClickException("generator produced no points; relax parameters")
    if paint:
        ds = colorize(ds, Palette())
    written = write_csv(ds, out)
    click.echo(f"wrote {written} records to {out}")
    _echo_stats(ds)


@cli.command()
@click.argument("glb_path")
@click.argument("csv_path")
@click.option("--paint/--no-paint", default=False, show_default=True,
              help="recolor with the hue ramp even when COLOR_0 exists.")
def convert(glb_path, csv_path, paint):
    """Extract point positions from a GLB model into CSV."""
    ds = extract_points_from_glb(glb_path)
    if paint:
        ds = colorize(ds, Palette())
    written = write_csv(ds, csv_path)
    click.echo(f"extracted {written} points from {glb_path} into {csv_path}")
    _echo_stats(ds)


def _parse_viewport(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        return int(w), int(h)
    except ValueError:
        raise click.UsageError(f"viewport must look like 1024x1024, got {text!r}")


@cli.command()
@click.argument("dataset")
@click.option("--translate", default="0,0,0", show_default=True,
              help="world-space translation applied by the transform stack.")
@click.option("--viewport", default="1024x1024", show_default=True)
@click.option("--out", required=True, type=click.Path(writable=True),
              help="error-report CSV destination.")
@click.option("--figure", default=None, type=click.Path(writable=True),
              help="optional PNG chart next to the CSV.")
def analyze(dataset, translate, viewport, out, figure):
    """Compare binary32 and emulated-pair transforms against binary64."""
    ds = read_csv(dataset)
    offset = tuple(float(v) for v in translate.split(","))
    if len(offset) != 3:
        raise click.UsageError("--translate needs x,y,z")
    stack = TransformStack.translation(offset, _parse_viewport(viewport))
    reports: dict[str, ErrorReport] = {}
    for precision in ("binary32", "df64"):
        reports[precision] = error_report(ds, stack, precision)
    lines = ["precision," + ErrorReport.CSV_HEADER]
    for precision, rep in reports.items():
        lines.append(f"{precision},{rep.to_csv_row()}")
    Path(out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    for precision, rep in reports.items():
        click.echo(
            f"{precision:9s} max_ndc={rep.max_abs_ndc_error:.3e} "
            f"rms_ndc={rep.rms_ndc_error:.3e} "
            f"max_px={rep.max_pixel_error:.3e} ulp={rep.max_ulp_distance}"
        )
    improvement = reports["binary32"].max_pixel_error / max(
        reports["df64"].max_pixel_error, 1e-300
    )
    click.echo(f"pair emulation improves max pixel error by {improvement:.1f}x")
    if figure:
        analyze_figure(reports, figure)
        click.echo(f"figure written to {figure}")
    click.echo(f"report written to {out}")


def _positive(name):
    def check(ctx, param, value):
        if value is not None and value < 1:
            raise click.UsageError(f"--{name} must be at least 1")
        return value

    return check


@cli.command()
@click.argument("datasets", nargs=-1, required=True)
@click.option("--variants", default="emulated64,native64", show_default=True,
              help="comma-separated pipeline variants to measure.")
@click.option("--frames", default=60, show_default=True, callback=_positive("frames"))
@click.option("--out", required=True, type=click.Path(writable=True),
              help="bench report CSV destination.")
@click.option("--markdown", default=None, type=click.Path(writable=True),
              help="optional Markdown rendering of the tables.")
@click.option("--figure", default=None, type=click.Path(writable=True),
              help="optional PNG chart.")
@click.option("--resolution", default="1024x1024", show_default=True)
@click.option("--backend", default="auto", show_default=True,
              type=click.Choice(["auto", "vulkan", "software"]))
@click.option("--headless/--windowed", default=True, show_default=True)
def bench(datasets, variants, frames, out, markdown, figure, resolution,
          backend, headless):
    """Upload each dataset and measure both pipeline variants.

    Rendering time is the median over the measured frames (labelled as such
    in the report); unsupported variants are warned about and marked, and
    the command still exits 0.
    """
    kinds = []
    for name in variants.split(","):
        name = name.strip()
        if name not in VARIANTS:
            raise click.UsageError(
                f"unknown variant {name!r}; choose from {', '.join(VARIANTS)}"
            )
        kinds.append(name)
    res = _parse_viewport(resolution)
    ctx = init_context(headless=headless, backend=backend)
    loaded = []
    for path in datasets:
        ds = read_csv(path)
        stats = dataset_stats(ds)
        loaded.append((ds, stats))
        click.echo(f"loaded {path}: {stats.count} points")
    report = BenchReport(device=ctx.describe())
    camera = CameraState()
    for kind in kinds:
        for ds, stats in loaded:
            try:
                variant = PipelineVariant.for_dataset(kind, ds.dims)
                pipeline = build_pipeline(ctx, variant)
                buffer = upload_dataset(ctx, ds, variant)
                metrics = render_and_measure(
                    ctx, pipeline, buffer, camera, frames, resolution=res
                )
            except FeatureError as exc:
                click.echo(f"warning: {kind} on {ds.name}: {exc}", err=True)
                report.add(BenchRow(ds.name, stats.count, kind, 0.0, 0.0,
                                    False, supported=False))
                continue
            assert buffer.count == stats.count
            report.add(
                BenchRow(
                    ds.name,
                    stats.count,
                    kind,
                    metrics.gpu_render_ms,
                    metrics.fps,
                    metrics.wall_clock_fallback,
                )
            )
            click.echo(
                f"{kind:11s} {ds.name:12s} {stats.count:>10,} vertices  "
                f"{metrics.gpu_render_ms:9.3f} ms (median of {frames})  "
                f"{metrics.fps:8.1f} fps"
            )
    report.write_csv(out)
    click.echo(f"report written to {out}")
    if markdown:
        report.write_markdown(markdown)
        click.echo(f"markdown written to {markdown}")
    if figure:
        bench_figure(report, figure)
        click.echo(f"figure written to {figure}")


def _zoom_iterations(zoom: float) -> int:
    # Deepen the escape budget as the window shrinks.
    return max(32, min(600, int(32 * (0.1 / zoom) ** 0.2)))


@cli.command()
@click.option("--center-re", default=-0.7436450, show_default=True)
@click.option("--center-im", default=0.13182590, show_default=True)
@click.option("--zooms", default="1e-1,1e-4,1e-6", show_default=True,
              help="comma-separated window half-widths.")
@click.option("--precisions", default="binary32,binary64", show_default=True)
@click.option("--width", default=512, show_default=True,
              help="samples per axis (and image size).")
@click.option("--max-iter", default=None, type=int,
              help="escape budget; default scales with zoom depth.")
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
@click.option("--figure", default=None, type=click.Path(writable=True),
              help="optional collapse-ratio PNG chart.")
def mandelbrot(center_re, center_im, zooms, precisions, width, max_iter,
               out_dir, figure):
    """Render escape-grid images and collapse-ratio rows per zoom."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    zoom_values = [float(z) for z in zooms.split(",")]
    precision_list = [p.strip() for p in precisions.split(",")]
    for precision in precision_list:
        if precision not in ("binary32", "binary64", "df64"):
            raise click.UsageError(f"unknown precision {precision!r}")
    collapse_rows = []
    for zoom in zoom_values:
        iterations = max_iter or _zoom_iterations(zoom)
        view = MandelbrotView(center_re=center_re, center_im=center_im,
                              zoom=zoom, width=width, max_iterations=iterations)
        for precision in precision_list:
            image_path = out / f"mandelbrot_{precision}_zoom{zoom:g}.ppm"
            render_mandelbrot_image(view, precision, image_path)
            click.echo(f"wrote {image_path}")
            if precision in ("binary32", "binary64"):
                ratio = collapse_ratio(view, precision)
                collapse_rows.append((precision, zoom, ratio))
    csv_path = out / "collapse.csv"
    lines = ["precision,zoom,width,collapse_ratio"]
    for precision, zoom, ratio in collapse_rows:
        lines.append(f"{precision},{zoom:g},{width},{ratio!r}")
    csv_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    click.echo(f"collapse ratios written to {csv_path}")
    if figure:
        collapse_figure(collapse_rows, figure)
        click.echo(f"figure written to {figure}")


@cli.command()
@click.argument("dataset")
@click.option("--variant", default="native64", show_default=True,
              type=click.Choice(VARIANTS))
@click.option("--backend", default="auto", show_default=True)
def view(dataset, variant, backend):
    """Open an interactive orbit-camera window with a live FPS overlay.

    Needs a windowed, Vulkan-capable host; headless environments get a
    DeviceError pointing at 'bench --headless'.
    """
    ds = read_csv(dataset)
    ctx = init_context(headless=False, backend=backend)
    # A windowed context implies a native device with a presentation loop;
    # reaching here without one is impossible (init_context raised).
    raise click.ClickException(
        f"windowed session on {ctx.describe()} is not implemented"
    )


def main(argv=None):
    return cli(args=argv)


if __name__ == "__main__":
    main()
