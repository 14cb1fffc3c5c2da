"""Serialisation helpers: fixed-precision CSV, stable JSON, a bare SVG line chart."""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Mapping, Sequence

import numpy as np

SIG_DIGITS = 12


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return f"{float(v):.{SIG_DIGITS}g}"


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _clean(obj):
    if isinstance(obj, Mapping):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(f"{x:.{SIG_DIGITS}g}")
    return obj


def to_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def to_svg(x, series: Mapping[str, Sequence[float]], width: int = 640, height: int = 400) -> str:
    """Self-contained SVG 1.1 line chart: one polyline per series plus axes."""
    x = np.asarray(x, dtype=float)
    ys = {k: np.asarray(v, dtype=float) for k, v in series.items()}
    finite = np.concatenate([v[np.isfinite(v)] for v in ys.values()] or [np.zeros(1)])
    lo, hi = (float(finite.min()), float(finite.max())) if finite.size else (0.0, 1.0)
    if hi == lo:
        hi = lo + 1.0
    pad = 40
    sx = lambda t: pad + (t - x[0]) / (x[-1] - x[0]) * (width - 2 * pad)
    sy = lambda t: height - pad - (t - lo) / (hi - lo) * (height - 2 * pad)
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{pad}" y="{height - pad / 3:.0f}" font-size="11">{fmt(x[0])}</text>',
        f'<text x="{width - pad}" y="{height - pad / 3:.0f}" font-size="11" '
        f'text-anchor="end">{fmt(x[-1])}</text>',
        f'<text x="2" y="{height - pad}" font-size="11">{fmt(lo)}</text>',
        f'<text x="2" y="{pad}" font-size="11">{fmt(hi)}</text>',
    ]
    for i, (name, v) in enumerate(ys.items()):
        color = colors[i % len(colors)]
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x, v) if np.isfinite(b))
        out.append(f'<polyline fill="none" stroke="{color}" points="{pts}"/>')
        out.append(f'<text x="{width - pad}" y="{pad + 14 * i}" font-size="11" '
                   f'text-anchor="end" fill="{color}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
