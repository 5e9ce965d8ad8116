"""Report files: JSON, CSV and a bare SVG scatter of the zeros."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from mpmath import mp

from .pipeline import RunReport


def dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def zeros_csv(zeros, digits: int = 30) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "re", "im"])
    for i, z in enumerate(zeros):
        w.writerow([i, mp.nstr(z.real, digits), mp.nstr(z.imag, digits)])
    return buf.getvalue()


def moments_csv(mu, digits: int = 30) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["k", "re", "im"])
    for k, m in enumerate(mu):
        w.writerow([k, mp.nstr(m.real, digits), mp.nstr(m.imag, digits)])
    return buf.getvalue()


def zeros_svg(zeros, size: int = 400, pad: int = 30) -> str:
    """Axes through the origin (when in view) and one dot per zero."""
    pts = [(float(z.real), float(z.imag)) for z in zeros]
    xs = [p[0] for p in pts] + [0.0]
    ys = [p[1] for p in pts] + [0.0]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-12)
    cx, cy = (max(xs) + min(xs)) / 2, (max(ys) + min(ys)) / 2
    scale = (size - 2 * pad) / span

    def sx(x):
        return pad + (x - cx) * scale + (size - 2 * pad) / 2

    def sy(y):
        return size - (pad + (y - cy) * scale + (size - 2 * pad) / 2)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">',
           f'<rect width="{size}" height="{size}" fill="white"/>',
           f'<line x1="0" y1="{sy(0):.3f}" x2="{size}" y2="{sy(0):.3f}" stroke="#888"/>',
           f'<line x1="{sx(0):.3f}" y1="0" x2="{sx(0):.3f}" y2="{size}" stroke="#888"/>']
    for x, y in pts:
        out.append(f'<circle cx="{sx(x):.3f}" cy="{sy(y):.3f}" r="3" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_report(report: RunReport, directory, svg: bool = True) -> Path:
    """Write ``report.json``, ``timings.json`` and the CSV/SVG files that apply."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    (d / "report.json").write_text(dumps(report.to_json()))
    (d / "timings.json").write_text(dumps({k: round(v, 6) for k, v in report.timings.items()}))
    if report.zeros:
        (d / "zeros.csv").write_text(zeros_csv(report.zeros))
        if svg:
            (d / "zeros.svg").write_text(zeros_svg(report.zeros))
    if report.moments:
        (d / "moments.csv").write_text(moments_csv(report.moments))
    for name, text in report.extra_files.items():
        (d / name).write_text(text)
    return d
