"""Zero-mode structure: extrema, critical gamma, anomalous localization.

Peak heights are compared through log(h_left) - log(h_right), which does
not depend on how the zero mode is normalised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import brentq

from . import grid
from .errors import Degenerate, NoCrossing, OnePeak, PoleAtTurningPoint
from .family import (
    FamilyContext,
    norm_constant,
    phi_general,
    potential_member,
    raw_zero_mode,
)
from .grid import Extremum

PAPER_WINDOW_HALF_WIDTH = 3.0
# geometric search for gamma_cr: start just inside the regular side, double outward
SEARCH_START = 1.001
SEARCH_LIMIT = 1e6
HEIGHT_RTOL = 1e-6


def gamma_star(ctx: FamilyContext, x):
    """gamma*(x) = gamma(x) - mu(x) / F(x).

    A horizontal line gamma = const crosses this curve exactly where the
    zero mode of that family member has an extremum. Scalar input raises
    :class:`PoleAtTurningPoint` where F vanishes; array input gets NaN there.
    """
    xa = np.asarray(x, dtype=float)
    f = ctx.seed.f(xa)
    pole = np.abs(f) < 1e-12
    if xa.ndim == 0 and pole:
        raise PoleAtTurningPoint(f"F({float(xa)}) = 0, gamma* diverges")
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out = ctx.gamma(xa) - ctx.seed.weight(xa) / f
    out = np.where(pole, np.nan, out)
    return float(out) if xa.ndim == 0 else out


class ZMExtremum(NamedTuple):
    x: float
    kind: str
    height: float


def zm_extrema(
    ctx: FamilyContext,
    gamma: float,
    norm: str = "l2",
    n_scan: int = 2001,
    lower_limit: Optional[float] = None,
) -> list[ZMExtremum]:
    """Extrema of Psi**2 as the roots of Phi_g on the working domain.

    Heights are Psi**2 under the requested normalisation.
    """
    ctx.check_gamma(gamma)
    a, b = ctx.domain
    phi = lambda t: phi_general(ctx, gamma, t)
    roots = grid.find_roots(phi, a, b, n_scan)
    if not roots:
        return []
    k2 = norm_constant(ctx, gamma, norm, lower_limit) ** 2
    delta = 1e-7 * (b - a)
    out = []
    for r in roots:
        # (ln Psi)' = -Phi_g, so Phi_g rising through zero marks a maximum
        rising = phi(r + delta) > phi(r - delta)
        h = k2 * raw_zero_mode(ctx, gamma, r) ** 2
        out.append(ZMExtremum(r, "max" if rising else "min", float(h)))
    return out


@dataclass(frozen=True)
class TwoPeaks:
    left: ZMExtremum
    right: ZMExtremum
    split: ZMExtremum


def two_peaks(extrema: list[ZMExtremum]) -> TwoPeaks:
    maxima = [e for e in extrema if e.kind == "max"]
    if len(maxima) < 2:
        raise OnePeak(f"zero mode has {len(maxima)} maximum(s); need two")
    left, right = maxima[0], maxima[-1]
    between = [e for e in extrema if e.kind == "min" and left.x < e.x < right.x]
    if not between:
        raise OnePeak("no minimum separates the outer maxima")
    split = min(between, key=lambda e: e.height)
    return TwoPeaks(left, right, split)


def log_height_ratio(ctx: FamilyContext, gamma: float, n_scan: int = 2001) -> float:
    """log(h_left / h_right) for the outer two maxima of the raw zero mode."""
    ctx.check_gamma(gamma)
    a, b = ctx.domain
    roots = grid.find_roots(lambda t: phi_general(ctx, gamma, t), a, b, n_scan)
    delta = 1e-7 * (b - a)
    maxima = [r for r in roots
              if phi_general(ctx, gamma, r + delta) > phi_general(ctx, gamma, r - delta)]
    if len(maxima) < 2:
        raise OnePeak(f"zero mode at gamma={gamma:g} has {len(maxima)} maximum(s)")
    psi_l, psi_r = raw_zero_mode(ctx, gamma, np.array([maxima[0], maxima[-1]]))
    return 2.0 * (math.log(abs(psi_l)) - math.log(abs(psi_r)))


def _search_branch(ctx: FamilyContext, start: float, n_scan: int) -> Optional[float]:
    g_prev, d_prev = None, None
    g = SEARCH_START * start
    while abs(g) <= SEARCH_LIMIT * abs(start):
        try:
            d = log_height_ratio(ctx, g, n_scan)
        except OnePeak:
            d = None
        if d is not None and d == 0.0:
            return g
        if d is not None and d_prev is not None and d * d_prev < 0:
            root = brentq(lambda t: log_height_ratio(ctx, t, n_scan), g_prev, g,
                          xtol=1e-13 * abs(g), rtol=4 * np.finfo(float).eps, maxiter=200)
            return float(root)
        if d is not None:
            g_prev, d_prev = g, d
        g *= 2.0
    return None


def critical_gamma(ctx: FamilyContext, n_scan: int = 2001) -> float:
    """gamma at which the two zero-mode peaks have equal height.

    Searches the regular side below the lower plateau first, then the side
    above the upper plateau when the seed has one.

    Raises:
        NoCrossing: the height difference never changes sign.
    """
    starts = [ctx.regular.lower]
    if ctx.regular.upper is not None:
        starts.append(ctx.regular.upper)
    for s in starts:
        if s == 0.0:
            continue
        g = _search_branch(ctx, s, n_scan)
        if g is not None:
            return g
    raise NoCrossing(
        f"peak heights never cross for the {ctx.seed.name} seed at c={ctx.seed.c:g} "
        f"(searched |gamma| up to {SEARCH_LIMIT:g} x plateau)"
    )


@dataclass(frozen=True)
class Well:
    x: float
    depth: float  # minimum of V1_gamma in the well
    area: float  # integral of (barrier top - V) over the part below the barrier


def find_wells(ctx: FamilyContext, gamma: float, n_scan: int = 2001) -> tuple[Well, Well]:
    """The two lowest local minima of V1_gamma, ordered left to right."""
    a, b = ctx.domain
    v = lambda t: potential_member(ctx, gamma, t)
    minima = [e.x for e in grid.find_extrema(v, a, b, n_scan) if e.kind == "min"]
    if len(minima) < 2:
        raise Degenerate(f"V1_gamma at gamma={gamma:g} has {len(minima)} well(s)")
    lo = sorted(sorted(minima, key=lambda t: float(v(t)))[:2])
    xs = np.linspace(lo[0], lo[1], 2001)
    vals = v(xs)
    top, x_top = float(np.max(vals)), float(xs[np.argmax(vals)])
    wells = []
    for xm, (s0, s1) in zip(lo, [(a, x_top), (x_top, b)]):
        span = np.linspace(s0, s1, 4001)
        area = float(np.trapezoid(np.clip(top - v(span), 0.0, None), span))
        wells.append(Well(float(xm), float(v(xm)), area))
    return wells[0], wells[1]


def alr_classify(ctx: FamilyContext, gamma: float, n_scan: int = 2001) -> bool:
    """True when the zero-mode peak in the shallower well is the higher one."""
    ratio = log_height_ratio(ctx, gamma, n_scan)
    left, right = find_wells(ctx, gamma, n_scan)
    scale = 1.0 + abs(left.depth) + abs(right.depth)
    if abs(left.depth - right.depth) > 1e-9 * scale:
        left_is_shallow = left.depth > right.depth
    elif abs(left.area - right.area) > 1e-9 * (left.area + right.area):
        left_is_shallow = left.area < right.area
    else:
        raise Degenerate(f"wells at gamma={gamma:g} are indistinguishable")
    if ratio == 0.0:
        return False
    left_higher = ratio > 0
    return left_higher == left_is_shallow


@dataclass(frozen=True)
class LocalizationReport:
    gamma: float
    split_x: float
    p_left: float
    p_right: float
    peaks: list[tuple[float, float]]
    anomalous: bool
    norm_mode: str
    window: tuple[float, float]
    norm_constant: float = field(default=float("nan"))

    @property
    def ratio(self) -> float:
        return self.p_left / self.p_right


def localization(
    ctx: FamilyContext,
    gamma: float,
    window: Optional[tuple[float, float]] = None,
    norm: str = "l2",
    lower_limit: Optional[float] = None,
    n_scan: int = 2001,
) -> LocalizationReport:
    """Probabilities on either side of the interior minimum of Psi**2.

    The default window is the working domain for ``l2`` and [c-3, c+3]
    for ``paper``, the window the published integrals use.
    """
    ext = zm_extrema(ctx, gamma, norm, n_scan, lower_limit)
    peaks = two_peaks(ext)
    if window is None:
        if norm == "paper":
            c = ctx.seed.c
            window = (c - PAPER_WINDOW_HALF_WIDTH, c + PAPER_WINDOW_HALF_WIDTH)
        else:
            window = ctx.domain
    a, b = window
    if not a < peaks.split.x < b:
        raise ValueError(f"window [{a}, {b}] does not contain the split point {peaks.split.x:g}")
    k = norm_constant(ctx, gamma, norm, lower_limit)
    dens = lambda t: (k * raw_zero_mode(ctx, gamma, t)) ** 2
    p_left = grid.integrate(dens, a, peaks.split.x, ctx.quad)
    p_right = grid.integrate(dens, peaks.split.x, b, ctx.quad)
    return LocalizationReport(
        gamma=float(gamma),
        split_x=peaks.split.x,
        p_left=p_left,
        p_right=p_right,
        peaks=[(peaks.left.x, peaks.left.height), (peaks.right.x, peaks.right.height)],
        anomalous=alr_classify(ctx, gamma, n_scan),
        norm_mode=norm,
        window=(float(a), float(b)),
        norm_constant=k,
    )


@dataclass(frozen=True)
class CovarianceCheck:
    c: float
    gamma0: float
    mapped_gamma: float
    reference_gamma: Optional[float]
    discrepancy: Optional[float]


def covariance_map(ctx0: FamilyContext, c: float, gamma0: float) -> float:
    """gamma for shift c whose member is the translate of the c = 0 member at gamma0.

    With mu(x; c) = mu0(x - c) / mu0(-c) one gets
    gamma_c(x) = (gamma0(x - c) - gamma0(-c)) / mu0(-c).
    """
    if ctx0.seed.c != 0.0:
        raise ValueError("covariance map needs the unshifted context")
    return (gamma0 - ctx0.gamma(-c)) / float(ctx0.seed.weight(-c))


def shift_covariance(
    c: float, gamma0: float, ctx0: FamilyContext, reference: Optional[float] = None
) -> CovarianceCheck:
    if ctx0.seed.name != "quartic":
        raise ValueError("shift covariance map is defined for the quartic seed")
    mapped = covariance_map(ctx0, c, gamma0)
    disc = None if reference is None else abs(mapped - reference) / abs(reference)
    return CovarianceCheck(float(c), float(gamma0), float(mapped), reference, disc)


__all__ = [
    "CovarianceCheck",
    "Extremum",
    "LocalizationReport",
    "TwoPeaks",
    "Well",
    "ZMExtremum",
    "alr_classify",
    "covariance_map",
    "critical_gamma",
    "find_wells",
    "gamma_star",
    "localization",
    "log_height_ratio",
    "shift_covariance",
    "two_peaks",
    "zm_extrema",
]
