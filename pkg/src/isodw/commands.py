"""Command implementations behind the CLI.

Each ``cmd_*`` takes a validated :class:`RunConfig` and returns the text of
its report (or a list of ``(path, text)`` pairs for file-producing
commands), so the same code is exercised by the CLI and by tests.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .analysis import (
    alr_classify,
    critical_gamma,
    localization,
    shift_covariance,
    two_peaks,
    zm_extrema,
)
from .errors import IsoDWError, NoCrossing
from .family import (
    NORM_MODES,
    build_context,
    darboux_deformation,
    paper_gamma_norm,
    potential_member,
    zero_mode,
)
from .grid import QuadSettings
from .output import to_csv, to_json, to_svg
from .seeds import SEEDS, make_seed
from .spectra import DEFAULT_POINTS, family_box, isospectral_report

OUTPUT_DIR_ENV = "ISODW_OUTPUT_DIR"

# Published parameter table: c -> (gamma_s, gamma_cr, left max x, right max x, local min x)
TABLE1 = {
    -2.0: (-0.1416, -9.1, -4.4, -0.63, -3.11),
    -1.0: (-0.5648, -1.2, -3.4, 0.35, -2.11),
    0.0: (-4.6310, -7.0, -2.4, 1.36, -1.02),
    1.0: (-19.3694, -28.3, -1.4, 2.35, -0.10),
    2.0: (-1.5719, -2.2, -0.4, 3.35, 0.91),
}

FAMILY_COLUMNS = ("x", "V1", "V2", "V1gamma", "deformation", "psi", "psi2", "gamma_of_x", "mu")
TABLE1_COLUMNS = (
    "c", "gamma_s", "gamma_cr", "left_max", "right_max", "local_min",
    "delta_vs_paper_percent", "covariance_rel_discrepancy", "error",
)
FORMATS = ("csv", "json", "svg")


class ConfigError(ValueError):
    """A flag value or flag combination is invalid."""

    def __init__(self, flag: str, message: str):
        self.flag = flag
        super().__init__(f"{flag}: {message}")


@dataclass(frozen=True)
class RunConfig:
    seed: str = "quartic"
    shift: float = 0.0
    gammas: Optional[tuple[float, ...]] = None
    domain: Optional[tuple[float, float]] = None
    samples: int = 2001
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 60
    norm: str = "l2"
    lower_limit: Optional[float] = None
    allow_singular: bool = False
    output: Optional[str] = None
    format: Optional[str] = None
    points: int = DEFAULT_POINTS
    levels: int = 4
    shifts: tuple[float, ...] = tuple(TABLE1)
    columns: tuple[str, ...] = ("psi2",)

    def validate(self) -> "RunConfig":
        if self.seed not in SEEDS:
            raise ConfigError("--seed", f"unknown seed {self.seed!r}")
        if not math.isfinite(self.shift):
            raise ConfigError("--shift", "must be finite")
        for g in self.gammas or ():
            if not math.isfinite(g):
                raise ConfigError("--gamma", f"must be finite, got {g}")
        if self.domain is not None:
            a, b = self.domain
            if not a < 0 < b:
                raise ConfigError("--domain", f"need a < 0 < b, got {a},{b}")
        if self.samples < 2:
            raise ConfigError("--samples", "must be >= 2")
        if not (self.abs_tol > 0):
            raise ConfigError("--abs-tol", "must be > 0")
        if not (self.rel_tol > 0):
            raise ConfigError("--rel-tol", "must be > 0")
        if self.max_depth < 10:
            raise ConfigError("--max-depth", "must be >= 10")
        if self.norm not in NORM_MODES:
            raise ConfigError("--norm", f"must be one of {NORM_MODES}")
        if self.lower_limit is not None and self.seed != "quartic":
            raise ConfigError("--lower-limit", "only applies to the quartic seed")
        if self.lower_limit is not None and self.norm != "paper":
            raise ConfigError("--lower-limit", "only used with --norm paper")
        if self.format is not None and self.format not in FORMATS:
            raise ConfigError("--format", f"must be one of {FORMATS}")
        if self.points < 200:
            raise ConfigError("--points", "must be >= 200")
        if not 1 <= self.levels <= 6:
            raise ConfigError("--levels", "must be between 1 and 6")
        bad = [c for c in self.columns if c not in FAMILY_COLUMNS[1:]]
        if bad:
            raise ConfigError("--columns", f"unknown column(s) {bad}")
        return self

    @property
    def quad(self) -> QuadSettings:
        return QuadSettings(self.abs_tol, self.rel_tol, self.max_depth)

    def gamma_list(self) -> tuple[float, ...]:
        if self.gammas:
            return self.gammas
        return (make_seed(self.seed, self.shift).default_gamma,)


def provenance(cfg: RunConfig, ctx=None, **extra) -> dict:
    out = {
        "package": "isodw",
        "version": __version__,
        "seed": cfg.seed,
        "shift": cfg.shift,
        "gamma": list(cfg.gamma_list()),
        "norm": cfg.norm,
        "lower_limit": cfg.lower_limit,
        "quad": {"abs_tol": cfg.abs_tol, "rel_tol": cfg.rel_tol, "max_depth": cfg.max_depth},
        "samples": cfg.samples,
    }
    if ctx is not None:
        out["domain"] = list(ctx.domain)
        out["nodes"] = int(ctx.nodes.size)
    out.update(extra)
    return out


def _context(cfg: RunConfig, shift: Optional[float] = None):
    seed = make_seed(cfg.seed, cfg.shift if shift is None else shift)
    return build_context(seed, domain=cfg.domain, quad=cfg.quad)


def _output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


def family_table(cfg: RunConfig, ctx, gamma: float) -> dict[str, np.ndarray]:
    profile = zero_mode(ctx, gamma, ctx.grid(cfg.samples), norm=cfg.norm,
                        lower_limit=cfg.lower_limit, allow_singular=cfg.allow_singular)
    x = profile.samples.xs
    seed = ctx.seed
    psi = profile.samples.ys
    return {
        "x": x,
        "V1": seed.v1(x),
        "V2": seed.v2(x),
        "V1gamma": potential_member(ctx, gamma, x, allow_singular=cfg.allow_singular),
        "deformation": darboux_deformation(ctx, gamma, x, allow_singular=cfg.allow_singular),
        "psi": psi,
        "psi2": psi * psi,
        "gamma_of_x": ctx.gamma(x),
        "mu": seed.weight(x),
    }


def _family_path(cfg: RunConfig, gamma: float, ext: str, many: bool) -> Path:
    if cfg.output:
        p = Path(cfg.output)
        if p.is_dir():
            return p / f"family_{cfg.seed}_c{cfg.shift:g}_g{gamma:g}.{ext}"
        return p.with_name(f"{p.stem}_g{gamma:g}{p.suffix}") if many else p
    return _output_dir() / f"family_{cfg.seed}_c{cfg.shift:g}_g{gamma:g}.{ext}"


def cmd_family(cfg: RunConfig) -> list[tuple[Path, str]]:
    """Sampled family quantities, one file per gamma."""
    ctx = _context(cfg)
    fmt = cfg.format or "csv"
    gammas = cfg.gamma_list()
    files = []
    for g in gammas:
        cols = family_table(cfg, ctx, g)
        if fmt == "csv":
            text = to_csv(FAMILY_COLUMNS, zip(*(cols[c] for c in FAMILY_COLUMNS)))
        elif fmt == "json":
            text = to_json({"provenance": provenance(cfg, ctx, gamma=g),
                            "regular": ctx.is_regular(g),
                            "columns": {c: cols[c] for c in FAMILY_COLUMNS}})
        else:
            text = to_svg(cols["x"], {c: cols[c] for c in cfg.columns})
        files.append((_family_path(cfg, g, fmt, len(gammas) > 1), text))
    return files


def cmd_thresholds(cfg: RunConfig) -> str:
    ctx = _context(cfg)
    reg = ctx.regular
    a, b = ctx.domain
    checks = {
        "gamma_at_right_edge": ctx.gamma(b),
        "weight_at_right_edge": ctx.seed.weight(b),
        "gamma_at_left_edge": ctx.gamma(a),
        "weight_at_left_edge": ctx.seed.weight(a),
    }
    plateaus = {"lower": reg.lower, "upper": reg.upper}
    if reg.upper is not None:
        checks["plateau_span"] = reg.upper - reg.lower
    return to_json({
        "provenance": provenance(cfg, ctx),
        "gamma_s": reg.lower,
        "plateaus": plateaus,
        "regular_side": reg.describe(),
        "plateau_checks": checks,
    })


def _extrema_json(ext) -> list[dict]:
    return [{"x": e.x, "kind": e.kind, "height": e.height} for e in ext]


def cmd_critical(cfg: RunConfig) -> str:
    ctx = _context(cfg)
    try:
        g_cr = critical_gamma(ctx, n_scan=cfg.samples)
    except NoCrossing as exc:
        return to_json({"provenance": provenance(cfg, ctx), "no_crossing": True,
                        "detail": str(exc)})
    mid = 0.5 * (g_cr + ctx.gamma_s)
    interval = sorted([g_cr, ctx.gamma_s]) if alr_classify(ctx, mid, cfg.samples) else None
    return to_json({
        "provenance": provenance(cfg, ctx),
        "gamma_cr": g_cr,
        "gamma_s": ctx.gamma_s,
        "alr_interval": interval,
        "peaks_at_cr": _extrema_json(zm_extrema(ctx, g_cr, cfg.norm, cfg.samples,
                                                cfg.lower_limit)),
    })


def localization_json(rep) -> dict:
    return {
        "gamma": rep.gamma,
        "norm_mode": rep.norm_mode,
        "norm_constant": rep.norm_constant,
        "window": list(rep.window),
        "split_x": rep.split_x,
        "p_left": rep.p_left,
        "p_right": rep.p_right,
        "ratio": rep.ratio,
        "peaks": [{"x": x, "height": h} for x, h in rep.peaks],
        "anomalous": rep.anomalous,
    }


def cmd_localize(cfg: RunConfig) -> str:
    ctx = _context(cfg)
    reports = [
        localization_json(localization(ctx, g, norm=cfg.norm, lower_limit=cfg.lower_limit,
                                       n_scan=cfg.samples))
        for g in cfg.gamma_list()
    ]
    extra = {}
    if cfg.norm == "paper":
        extra["abs_Gamma"] = paper_gamma_norm(ctx, cfg.lower_limit)
    if len(reports) == 1:
        return to_json({"provenance": provenance(cfg, ctx, **extra), **reports[0]})
    return to_json({"provenance": provenance(cfg, ctx, **extra), "reports": reports})


def table1_rows(cfg: RunConfig) -> list[list]:
    if cfg.seed != "quartic":
        raise ConfigError("--seed", "table1 is defined for the quartic seed")
    ctx0 = build_context(make_seed("quartic", 0.0), quad=cfg.quad)
    rows = []
    for c in cfg.shifts:
        row = [c] + [None] * (len(TABLE1_COLUMNS) - 1)
        try:
            ctx = build_context(make_seed("quartic", c), quad=cfg.quad)
            gs = ctx.gamma_s
            row[1] = gs
            mapped = shift_covariance(c, ctx0.gamma_s, ctx0, reference=gs)
            row[7] = mapped.discrepancy
            g_cr = critical_gamma(ctx, n_scan=cfg.samples)
            row[2] = g_cr
            peaks = two_peaks(zm_extrema(ctx, g_cr, "l2", cfg.samples))
            row[3:6] = [peaks.left.x, peaks.right.x, peaks.split.x]
            ref = TABLE1.get(float(c))
            if ref is not None:
                row[6] = 100.0 * max(abs(gs - ref[0]) / abs(ref[0]),
                                     abs(g_cr - ref[1]) / abs(ref[1]))
            row[8] = ""
        except IsoDWError as exc:
            row[8] = f"{type(exc).__name__}: {exc}"
        rows.append(row)
    return rows


def cmd_table1(cfg: RunConfig) -> str:
    rows = table1_rows(cfg)
    if (cfg.format or "csv") == "json":
        return to_json({"provenance": provenance(cfg, shifts=list(cfg.shifts)),
                        "columns": list(TABLE1_COLUMNS), "rows": rows})
    return to_csv(TABLE1_COLUMNS, rows)


def _report_json(rep) -> dict:
    return {
        "offset": rep.offset,
        "max_delta": rep.max_delta,
        "levels": [{"E_a": a, "E_b": b, "delta": d} for a, b, d in rep.rows],
    }


def cmd_spectrum(cfg: RunConfig) -> str:
    seed = make_seed(cfg.seed, cfg.shift)
    out = {"provenance": provenance(cfg, points=cfg.points, levels=cfg.levels,
                                    box=list(seed.spectral_domain))}
    for g in cfg.gamma_list():
        v1, v2, vg, box = family_box(seed, g)
        out[f"gamma={g:g}"] = {
            "V1_vs_V1gamma": _report_json(isospectral_report(v1, vg, box, cfg.points, cfg.levels)),
            "V1_vs_V2": _report_json(isospectral_report(v1, v2, box, cfg.points, cfg.levels)),
        }
    return to_json(out)
