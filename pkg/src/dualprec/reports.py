"""Benchmark report model and serialization (CSV + Markdown).

Reports mirror the benchmark tables' column order — dataset information,
rendering time in milliseconds, framerate — one block per pipeline variant,
and always carry the device descriptor and tool version so numbers from
different machines are never silently compared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime, timezone
from os import PathLike
from pathlib import Path

from . import __version__
from .errors import ParseError, ValidationError

__all__ = ["BenchRow", "BenchReport"]

_CSV_HEADER = "dataset,vertices,variant,gpu_render_ms,fps,wall_clock_fallback,supported"


@dataclass(frozen=True)
class BenchRow:
    dataset: str
    vertices: int
    variant: str
    gpu_render_ms: float
    fps: float
    wall_clock_fallback: bool = False
    supported: bool = True

    def __post_init__(self):
        if self.supported and (self.gpu_render_ms <= 0 or self.fps <= 0):
            raise ValidationError("supported rows need positive ms and fps")


@dataclass
class BenchReport:
    device: str
    rows: list[BenchRow] = field(default_factory=list)
    timestamp: str = ""
    tool_version: str = __version__

    def __post_init__(self):
        if not self.timestamp:
            self.timestamp = datetime.now(timezone.utc).isoformat(timespec="seconds")

    def add(self, row: BenchRow) -> None:
        self.rows.append(row)

    def write_csv(self, path: str | PathLike) -> None:
        lines = [
            f"# dualprec bench report, tool version {self.tool_version}",
            f"# device: {self.device}",
            f"# timestamp: {self.timestamp}",
            "# gpu_render_ms is the median over the measured frames",
            _CSV_HEADER,
        ]
        for r in self.rows:
            ms = f"{r.gpu_render_ms:.6f}" if r.supported else ""
            fps = f"{r.fps:.3f}" if r.supported else ""
            lines.append(
                f"{r.dataset},{r.vertices},{r.variant},{ms},{fps},"
                f"{int(r.wall_clock_fallback)},{int(r.supported)}"
            )
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def read_csv(cls, path: str | PathLike) -> "BenchReport":
        text = Path(path).read_text(encoding="utf-8").splitlines()
        device = ""
        timestamp = ""
        version = ""
        rows = []
        seen_header = False
        for lineno, line in enumerate(text, 1):
            if line.startswith("# device:"):
                device = line.split(":", 1)[1].strip()
            elif line.startswith("# timestamp:"):
                timestamp = line.split(":", 1)[1].strip()
            elif line.startswith("#"):
                if "tool version" in line:
                    version = line.rsplit(" ", 1)[-1]
            elif line == _CSV_HEADER:
                seen_header = True
            elif line:
                if not seen_header:
                    raise ParseError("row before header", line=lineno)
                parts = line.split(",")
                if len(parts) != 7:
                    raise ParseError(f"expected 7 columns, got {len(parts)}",
                                     line=lineno)
                supported = parts[6] == "1"
                rows.append(
                    BenchRow(
                        dataset=parts[0],
                        vertices=int(parts[1]),
                        variant=parts[2],
                        gpu_render_ms=float(parts[3]) if supported else 0.0,
                        fps=float(parts[4]) if supported else 0.0,
                        wall_clock_fallback=parts[5] == "1",
                        supported=supported,
                    )
                    if supported
                    else BenchRow(parts[0], int(parts[1]), parts[2], 0.0, 0.0,
                                  parts[5] == "1", False)
                )
        report = cls(device=device, rows=rows, timestamp=timestamp)
        if version:
            report.tool_version = version
        return report

    def to_markdown(self) -> str:
        out = [
            f"Device: {self.device}  ",
            f"Timestamp: {self.timestamp}  ",
            f"Tool version: {self.tool_version}",
            "",
        ]
        titles = {
            "emulated64": "Emulated double precision (pair-of-binary32 pipeline)",
            "native64": "Native double precision (binary64 pipeline)",
            "plain32": "Plain single precision (binary32 pipeline)",
        }
        variants_in_order = []
        for r in self.rows:
            if r.variant not in variants_in_order:
                variants_in_order.append(r.variant)
        for variant in variants_in_order:
            out.append(f"## {titles.get(variant, variant)}")
            out.append("")
            out.append("| Dataset Information | Rendering Time (milliseconds) | Framerate (fps) |")
            out.append("|---|---|---|")
            for r in self.rows:
                if r.variant != variant:
                    continue
                if r.supported:
                    out.append(
                        f"| {r.vertices:,} vertices of {r.dataset} "
                        f"| {r.gpu_render_ms:.2f} | {r.fps:.0f} |"
                    )
                else:
                    out.append(
                        f"| {r.vertices:,} vertices of {r.dataset} "
                        f"| unsupported | unsupported |"
                    )
            out.append("")
        return "\n".join(out)

    def write_markdown(self, path: str | PathLike) -> None:
        Path(path).write_text(self.to_markdown(), encoding="utf-8")
