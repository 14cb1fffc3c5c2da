"""One-parameter isospectral family generated from a Riccati seed.

For a seed F with weight mu = exp(log_weight) the general Riccati solution is

    Phi_g = F + mu / (gamma - gamma(x)),     gamma(x) = -int_0^x mu,

which gives the family V1_gamma = V1 + 2 (Phi_g**2 - F**2) and the zero mode
Psi = sqrt(mu) / (gamma - gamma(x)). A member is regular when gamma never
meets the range of gamma(x).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import grid
from .errors import Overflow, SingularGamma
from .grid import DEFAULT_QUAD, QuadSettings, SampledFunction
from .seeds import DEFAULT_LOG_WEIGHT_CAP, RiccatiSeed

# log_weight above which Psi and Phi_g switch to the tail asymptotics
ASYMPTOTIC_LOG_WEIGHT = 300.0
# an edge counts as a plateau when the weight there is this small relative to its peak
PLATEAU_WEIGHT_RATIO = 1e-8
PAPER_LOWER_LIMIT = -2.425
NORM_MODES = ("l2", "paper")


@dataclass(frozen=True)
class RegularSet:
    """Regular gamma values: ``gamma < lower`` or, if ``upper`` is set, ``gamma > upper``.

    ``upper`` is None when gamma(x) grows without bound past the left edge
    (quartic seeds), so only the lower side is regular.
    """

    lower: float
    upper: Optional[float]

    def contains(self, gamma: float) -> bool:
        return gamma < self.lower or (self.upper is not None and gamma > self.upper)

    def describe(self) -> str:
        if self.upper is None:
            return f"gamma < {self.lower:.10g}"
        return f"gamma < {self.lower:.10g} or gamma > {self.upper:.10g}"


@dataclass(frozen=True)
class FamilyContext:
    seed: RiccatiSeed
    domain: tuple[float, float]
    gamma_of_x: SampledFunction
    gamma_range: tuple[float, float]
    regular: RegularSet
    quad: QuadSettings = DEFAULT_QUAD

    @property
    def gamma_s(self) -> float:
        """Threshold on the negative side: the plateau of gamma(x) as x -> +inf."""
        return self.regular.lower

    @property
    def nodes(self) -> np.ndarray:
        return self.gamma_of_x.xs

    def grid(self, n: int = 2001) -> np.ndarray:
        return np.linspace(self.domain[0], self.domain[1], n)

    def gamma(self, x):
        """gamma(x) at arbitrary points of the domain.

        Starts from the nearest tabulated node and adds one Gauss-Kronrod
        panel, which is exact to rounding at node spacing.
        """
        x = np.asarray(x, dtype=float)
        flat = np.atleast_1d(x).ravel()
        a, b = self.domain
        if np.any((flat < a - 1e-12) | (flat > b + 1e-12)):
            raise ValueError(f"gamma(x) requested outside the domain [{a}, {b}]")
        xs, ys = self.gamma_of_x.xs, self.gamma_of_x.ys
        idx = np.clip(np.searchsorted(xs, flat), 1, xs.size - 1)
        idx -= ((flat - xs[idx - 1]) < (xs[idx] - flat)).astype(int)
        panel, _ = grid.gauss_kronrod(self.seed.weight, xs[idx], flat)
        out = ys[idx] - panel
        return out.reshape(x.shape) if x.ndim else float(out[0])

    def is_regular(self, gamma: float) -> bool:
        return self.regular.contains(gamma)

    def check_gamma(self, gamma: float, allow_singular: bool = False) -> bool:
        ok = self.is_regular(gamma)
        if not ok and not allow_singular:
            raise SingularGamma(gamma, (self.regular.lower,
                                        self.regular.upper if self.regular.upper is not None
                                        else math.inf))
        return ok


def build_context(
    seed: RiccatiSeed,
    domain: Optional[tuple[float, float]] = None,
    quad: QuadSettings = DEFAULT_QUAD,
    n_nodes: int = 2001,
    cap: float = DEFAULT_LOG_WEIGHT_CAP,
) -> FamilyContext:
    """Tabulate gamma(x) for ``seed`` and locate its plateaus.

    Without an explicit ``domain`` the seed's working domain is used,
    widened if needed so that it contains the origin.
    """
    if domain is None:
        a, b = seed.working_domain
        a, b = min(a, -0.5), max(b, 0.5)
    else:
        a, b = map(float, domain)
    if not a < 0 < b:
        raise ValueError(f"domain must satisfy a < 0 < b, got [{a}, {b}]")
    if n_nodes < 201:
        raise ValueError(f"n_nodes must be >= 201, got {n_nodes}")

    xs = np.linspace(a, b, n_nodes)
    if not np.any(xs == 0.0):
        xs = np.sort(np.append(xs, 0.0))
    lw = seed.log_weight(xs)
    if np.max(lw) > cap:
        i = int(np.argmax(lw))
        raise Overflow(f"log_weight={lw[i]:.6g} at x={xs[i]:.6g} exceeds cap {cap}")

    cum = grid.cumulative(seed.weight, 0.0, xs, quad)
    gam = -cum.ys
    if np.any(np.diff(gam) > 0):
        raise ValueError("gamma(x) is not monotonically decreasing; weight went negative")
    gamma_of_x = SampledFunction(xs, gam)

    peak = np.max(lw)
    lower = float(gam[-1])
    if seed.f(b) > 0 and lw[-1] - peak < math.log(PLATEAU_WEIGHT_RATIO):
        # Laplace tail: int_b^inf mu ~ mu(b) / |d log mu / dx| = mu(b) / (2 F(b))
        lower -= float(seed.weight(b) / (2.0 * seed.f(b)))
    upper = None
    if seed.f(a) < 0 and lw[0] - peak < math.log(PLATEAU_WEIGHT_RATIO):
        upper = float(gam[0] + seed.weight(a) / (2.0 * -seed.f(a)))

    return FamilyContext(
        seed=seed,
        domain=(a, b),
        gamma_of_x=gamma_of_x,
        gamma_range=(float(gam.min()), float(gam.max())),
        regular=RegularSet(lower, upper),
        quad=quad,
    )


def regular_gamma_range(ctx: FamilyContext) -> RegularSet:
    return ctx.regular


def _ratio(ctx: FamilyContext, gamma: float, x):
    """mu / (gamma - gamma(x)), and the mask of exact poles."""
    x = np.asarray(x, dtype=float)
    diff = gamma - ctx.gamma(x)
    lw = ctx.seed.log_weight(x)
    pole = np.abs(diff) < 1e-10 * abs(gamma) if gamma != 0 else diff == 0
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        r = np.sign(diff) * np.exp(lw - np.log(np.abs(diff)))
        # deep tail: gamma - gamma(x) ~ -mu / (2F), so the ratio tends to -2F
        r = np.where(lw > ASYMPTOTIC_LOG_WEIGHT, -2.0 * ctx.seed.f(x), r)
    r = np.where(pole, np.nan, r)
    return r if r.ndim else float(r)


def phi_general(ctx: FamilyContext, gamma: float, x, allow_singular: bool = False):
    ctx.check_gamma(gamma, allow_singular)
    return ctx.seed.f(x) + _ratio(ctx, gamma, x)


def darboux_deformation(ctx: FamilyContext, gamma: float, x, allow_singular: bool = False):
    """V1_gamma - V1, written as 2 r (2F + r) with r = mu / (gamma - gamma(x))."""
    ctx.check_gamma(gamma, allow_singular)
    r = _ratio(ctx, gamma, x)
    return 2.0 * r * (2.0 * ctx.seed.f(x) + r)


def potential_member(ctx: FamilyContext, gamma: float, x, allow_singular: bool = False):
    return ctx.seed.v1(x) + darboux_deformation(ctx, gamma, x, allow_singular)


def raw_zero_mode(ctx: FamilyContext, gamma: float, x):
    """Unnormalised Psi = sqrt(mu) / (gamma - gamma(x)), evaluated in log space."""
    x = np.asarray(x, dtype=float)
    diff = gamma - ctx.gamma(x)
    lw = ctx.seed.log_weight(x)
    with np.errstate(divide="ignore", over="ignore", under="ignore", invalid="ignore"):
        psi = np.sign(diff) * np.exp(0.5 * lw - np.log(np.abs(diff)))
        tail = -2.0 * np.abs(ctx.seed.f(x)) * np.exp(-0.5 * lw)
        psi = np.where(lw > ASYMPTOTIC_LOG_WEIGHT, tail, psi)
    psi = np.where(np.abs(psi) < 1e-300, 0.0, psi)
    if gamma != 0:
        psi = np.where(np.abs(diff) < 1e-10 * abs(gamma), np.nan, psi)
    return psi if psi.ndim else float(psi)


@dataclass(frozen=True)
class ZeroModeProfile:
    gamma: float
    norm_mode: str
    norm_constant: float
    samples: SampledFunction
    regular: bool


def paper_gamma_norm(ctx: FamilyContext, lower_limit: Optional[float] = None) -> float:
    """|Gamma| used by the published normalisation.

    Two-plateau seeds use the integral of mu over the whole line. One-sided
    seeds integrate from ``lower_limit`` (default c - 2.425) to +inf.
    """
    if ctx.regular.upper is not None:
        return abs(ctx.regular.upper - ctx.regular.lower)
    l = ctx.seed.c + PAPER_LOWER_LIMIT if lower_limit is None else lower_limit
    return abs(ctx.gamma(l) - ctx.regular.lower)


def norm_constant(
    ctx: FamilyContext, gamma: float, norm: str = "l2", lower_limit: Optional[float] = None
) -> float:
    """Factor that turns the raw zero mode into the requested normalisation.

    ``l2`` gives unit norm on the working domain. ``paper`` multiplies by
    sqrt(gamma (gamma + 1) / |Gamma|) as in the published figures; that
    choice does not give unit norm and needs gamma (gamma + 1) > 0.
    """
    if norm == "l2":
        a, b = ctx.domain
        total = grid.integrate(lambda t: raw_zero_mode(ctx, gamma, t) ** 2, a, b, ctx.quad)
        return 1.0 / math.sqrt(total)
    if norm == "paper":
        g2 = gamma * (gamma + 1.0)
        if g2 <= 0:
            raise ValueError(f"paper normalisation needs gamma*(gamma+1) > 0, got gamma={gamma}")
        return math.sqrt(g2 / paper_gamma_norm(ctx, lower_limit))
    raise ValueError(f"norm must be one of {NORM_MODES}, got {norm!r}")


def zero_mode(
    ctx: FamilyContext,
    gamma: float,
    xs=None,
    norm: str = "l2",
    lower_limit: Optional[float] = None,
    allow_singular: bool = False,
) -> ZeroModeProfile:
    regular = ctx.check_gamma(gamma, allow_singular)
    xs = ctx.grid() if xs is None else np.asarray(xs, dtype=float)
    if regular:
        k = norm_constant(ctx, gamma, norm, lower_limit)
    else:
        # a singular member is not normalisable; report the raw shape
        k = 1.0
    return ZeroModeProfile(
        gamma=float(gamma),
        norm_mode=norm if regular else "raw",
        norm_constant=k,
        samples=SampledFunction(xs, k * raw_zero_mode(ctx, gamma, xs)),
        regular=regular,
    )


def residual_schrodinger(ctx: FamilyContext, gamma: float, x, h: float = 1e-3):
    """-Psi'' + (V1_gamma - eps_f) Psi with a central second difference."""
    ctx.check_gamma(gamma)
    psi = lambda t: raw_zero_mode(ctx, gamma, t)
    v = potential_member(ctx, gamma, x)
    return -grid.fd_second(psi, x, h) + (v - ctx.seed.factorization_energy) * psi(x)
