"""Numeric kernel: adaptive quadrature, cumulative integrals, roots and extrema.

Every routine here accepts plain callables. Vectorised callables (numpy
ufunc style) are evaluated on whole node arrays; anything else is looped
over point by point.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import NonConvergence, NonFinite

# Gauss-Kronrod 7/15 pair on [-1, 1].
_XK = np.array([
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144845693013,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144845693013,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
])
# Gauss weights live on the odd Kronrod nodes.
_WG = np.zeros(15)
_WG[1::2] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
]

_MAX_PANELS = 50_000


@dataclass(frozen=True)
class QuadSettings:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 60

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError(f"abs_tol must be > 0, got {self.abs_tol}")
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be > 0, got {self.rel_tol}")
        if self.max_depth < 10:
            raise ValueError(f"max_depth must be >= 10, got {self.max_depth}")


DEFAULT_QUAD = QuadSettings()


@dataclass(frozen=True)
class SampledFunction:
    """Tabulated function with cubic-spline evaluation between nodes.

    The spline is a not-a-knot cubic through all nodes; this is the only
    interpolation rule used in the package.
    """

    xs: np.ndarray
    ys: np.ndarray
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        xs = np.array(self.xs, dtype=float)
        ys = np.array(self.ys, dtype=float)
        if xs.ndim != 1 or xs.shape != ys.shape:
            raise ValueError("xs and ys must be 1-D arrays of equal length")
        if xs.size < 2:
            raise ValueError("a sampled function needs at least 2 nodes")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("xs must be strictly increasing")
        xs.flags.writeable = False
        ys.flags.writeable = False
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "_spline", None)

    def __len__(self):
        return self.xs.size

    def __call__(self, x):
        if self._spline is None:
            object.__setattr__(self, "_spline", CubicSpline(self.xs, self.ys))
        return self._spline(x)


class Extremum(NamedTuple):
    x: float
    kind: str  # "max" or "min"


def _evaluate(f: Callable, x: np.ndarray) -> np.ndarray:
    try:
        y = np.asarray(f(x), dtype=float)
    except TypeError:
        y = None
    if y is None or y.shape != x.shape:
        y = np.array([float(f(t)) for t in x.ravel()]).reshape(x.shape)
    return y


def gauss_kronrod(f: Callable, lo, hi):
    """Kronrod estimates and |K15 - G7| error bounds for a batch of panels.

    ``hi < lo`` is allowed and yields the signed integral.
    """
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[:, None] + half[:, None] * _XK[None, :]
    vals = _evaluate(f, nodes)
    if not np.all(np.isfinite(vals)):
        bad = nodes[~np.isfinite(vals)][0]
        raise NonFinite(f"integrand is not finite at x={bad!r}")
    kron = half * (vals @ _WK)
    gauss = half * (vals @ _WG)
    return kron, np.abs(kron - gauss)


def integrate(f: Callable, a: float, b: float, q: QuadSettings = DEFAULT_QUAD) -> float:
    """Adaptive Gauss-Kronrod (7/15) quadrature of ``f`` over ``[a, b]``.

    The worst panel is bisected until the summed error estimate satisfies
    ``err <= max(abs_tol, rel_tol * |I|)``.

    Raises:
        NonConvergence: a panel needing refinement is already ``max_depth``
            bisections deep, or the panel budget is exhausted.
        NonFinite: ``f`` returned NaN or inf inside ``[a, b]``.
    """
    if a > b:
        raise ValueError(f"integrate needs a <= b, got a={a}, b={b}")
    if a == b:
        return 0.0
    k, e = gauss_kronrod(f, np.array([a], float), np.array([b], float))
    # heap of (-err, lo, hi, depth, value)
    heap = [(-e[0], a, b, 0, k[0])]
    total, err = k[0], e[0]
    while err > max(q.abs_tol, q.rel_tol * abs(total)):
        neg_e, lo, hi, depth, val = heapq.heappop(heap)
        if depth >= q.max_depth or len(heap) >= _MAX_PANELS:
            raise NonConvergence(
                f"quadrature on [{a}, {b}] stalled at error {err:.3e} "
                f"(depth {depth}, {len(heap) + 1} panels)"
            )
        m = 0.5 * (lo + hi)
        kk, ee = gauss_kronrod(f, np.array([lo, m]), np.array([m, hi]))
        total += kk.sum() - val
        err += ee.sum() + neg_e
        heapq.heappush(heap, (-ee[0], lo, m, depth + 1, kk[0]))
        heapq.heappush(heap, (-ee[1], m, hi, depth + 1, kk[1]))
    # re-sum to shed the drift of the running updates
    return float(math.fsum(item[4] for item in heap))


def _panel_integrals(f: Callable, lo: np.ndarray, hi: np.ndarray, q: QuadSettings) -> np.ndarray:
    vals, errs = gauss_kronrod(f, lo, hi)
    redo = errs > np.maximum(q.abs_tol, q.rel_tol * np.abs(vals))
    for i in np.flatnonzero(redo):
        vals[i] = integrate(f, lo[i], hi[i], q)
    return vals


def cumulative(f: Callable, x0: float, xs, q: QuadSettings = DEFAULT_QUAD) -> SampledFunction:
    """Tabulate ``x -> integral of f from x0 to x`` on the nodes ``xs``.

    Panels are accumulated outward from ``x0`` in both directions, so a
    huge tail on one side never swamps the values on the other.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.ndim != 1 or xs.size < 2 or np.any(np.diff(xs) <= 0):
        raise ValueError("xs must be a strictly increasing 1-D grid of length >= 2")
    if not xs[0] <= x0 <= xs[-1]:
        raise ValueError(f"x0={x0} is not bracketed by the grid [{xs[0]}, {xs[-1]}]")
    out = np.zeros_like(xs)

    right = xs > x0
    if right.any():
        pts = np.concatenate(([x0], xs[right]))
        out[right] = np.cumsum(_panel_integrals(f, pts[:-1], pts[1:], q))

    left = xs < x0
    if left.any():
        pts = np.concatenate((xs[left], [x0]))
        pieces = _panel_integrals(f, pts[:-1], pts[1:], q)
        out[left] = -np.cumsum(pieces[::-1])[::-1]

    return SampledFunction(xs, out)


def find_roots(f: Callable, a: float, b: float, n_scan: int = 2001) -> list[float]:
    """Roots of ``f`` on ``[a, b]``, one per sign change on a uniform scan.

    Tangent roots (no sign change) are not detected. Sign changes across a
    pole are rejected because ``f`` does not become small there.
    """
    if n_scan < 2:
        raise ValueError("n_scan must be >= 2")
    xs = np.linspace(a, b, n_scan)
    ys = _evaluate(f, xs)
    finite = np.isfinite(ys)
    scale = 1.0 + (np.max(np.abs(ys[finite])) if finite.any() else 0.0)
    g = lambda t: float(f(t))

    roots = [float(x) for x in xs[finite & (ys == 0.0)]]
    for i in range(n_scan - 1):
        y0, y1 = ys[i], ys[i + 1]
        if not (np.isfinite(y0) and np.isfinite(y1)) or y0 == 0.0 or y1 == 0.0 or (y0 > 0) == (y1 > 0):
            continue
        try:
            r = brentq(g, xs[i], xs[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps,
                       maxiter=200)
            fr = g(r)
        except ValueError:
            # f refused to evaluate inside the bracket (a pole); not a root
            continue
        if abs(fr) < 1e-10 * scale:
            roots.append(r)
    return sorted(roots)


def fd_second(f: Callable, x: float, h: float) -> float:
    if not h > 0:
        raise ValueError("step h must be > 0")
    return (f(x - h) - 2.0 * f(x) + f(x + h)) / (h * h)


def find_extrema(f: Callable, a: float, b: float, n_scan: int = 2001) -> list[Extremum]:
    """Interior local extrema of ``f`` on ``[a, b]``.

    Located as roots of a centred first difference and classified by the
    sign of the second difference at the scan spacing.
    """
    step = (b - a) / (n_scan - 1)
    h = 1e-3 * step
    deriv = lambda t: (f(t + h) - f(t - h)) / (2.0 * h)
    out = []
    for r in find_roots(deriv, a + step, b - step, n_scan):
        curv = fd_second(f, r, step)
        if curv < 0:
            out.append(Extremum(r, "max"))
        elif curv > 0:
            out.append(Extremum(r, "min"))
    return out

