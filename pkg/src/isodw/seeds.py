"""Riccati particular solutions F and the quantities derived from them.

Units are hbar = 1, 2m = 1. Each seed F satisfies

    F' + F**2 = V2 - eps_f,        -F' + F**2 = V1 - eps_f,

and carries ``log_weight``, the log of the integrand whose running
integral defines gamma(x).
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import Overflow, Unsupported

SQRT2 = math.sqrt(2.0)
RAZAVY_ALPHA = 1.0 + SQRT2
RAZAVY_ENERGY = -2.0 * (1.0 + SQRT2)

DEFAULT_LOG_WEIGHT_CAP = 700.0


class RiccatiSeed(ABC):
    """Common contract for the shifted seeds.

    Subclasses provide ``f``, ``f_prime``, ``int_f`` and ``log_weight`` as
    vectorised functions of position; the partner potentials follow from
    them.
    """

    name: str
    c: float
    factorization_energy: float

    @abstractmethod
    def f(self, x): ...

    @abstractmethod
    def f_prime(self, x): ...

    @abstractmethod
    def int_f(self, x):
        """Closed form of the integral of F from 0 to x."""

    @abstractmethod
    def log_weight(self, x): ...

    @abstractmethod
    def v1(self, x): ...

    def v2(self, x):
        return self.v1(x) + 2.0 * self.f_prime(x)

    def weight(self, x):
        with np.errstate(over="ignore", under="ignore"):
            return np.exp(self.log_weight(x))

    @property
    @abstractmethod
    def working_domain(self) -> tuple[float, float]: ...

    @property
    @abstractmethod
    def spectral_domain(self) -> tuple[float, float]:
        """Dirichlet box wide enough that low eigenvectors vanish at the walls."""

    @property
    @abstractmethod
    def default_gamma(self) -> float: ...


@dataclass(frozen=True)
class QuarticSeed(RiccatiSeed):
    """F(x) = (x - c)**2 - 1 with weight exp(-2 * int_0^x F), so weight(0) = 1."""

    c: float = 0.0
    name = "quartic"
    factorization_energy = 0.0

    def f(self, x):
        u = np.asarray(x, dtype=float) - self.c
        return u * u - 1.0

    def f_prime(self, x):
        return 2.0 * (np.asarray(x, dtype=float) - self.c)

    def int_f(self, x):
        x = np.asarray(x, dtype=float)
        c = self.c
        return x**3 / 3.0 - c * x * x + (c * c - 1.0) * x

    def log_weight(self, x):
        return -2.0 * self.int_f(x)

    def v1(self, x):
        u = np.asarray(x, dtype=float) - self.c
        return (u * u - 1.0) ** 2 - 2.0 * u

    def v2(self, x):
        u = np.asarray(x, dtype=float) - self.c
        return (u * u - 1.0) ** 2 + 2.0 * u

    @property
    def working_domain(self):
        return (self.c - 3.5, self.c + 8.0)

    @property
    def spectral_domain(self):
        return (self.c - 5.0, self.c + 6.0)

    @property
    def default_gamma(self):
        return -7.0


@dataclass(frozen=True)
class RazavySeed(RiccatiSeed):
    """Seed of the n = 2 Razavy double well, shifted by ``c``.

    Only xi = beta = 1, n = 2 has a closed-form ground state here; other
    parameter values raise :class:`Unsupported`. The weight is the
    unnormalised ground-state density psi0**2, not rescaled to 1 at x = 0.
    """

    c: float = 0.0
    xi: float = 1.0
    beta: float = 1.0
    n: int = 2
    name = "razavy"
    factorization_energy = RAZAVY_ENERGY

    def __post_init__(self):
        if (self.xi, self.beta, self.n) != (1.0, 1.0, 2):
            raise Unsupported(
                f"Razavy seed only supports xi=1, beta=1, n=2 "
                f"(got xi={self.xi}, beta={self.beta}, n={self.n})"
            )

    def _ch_sh(self, x):
        u2 = 2.0 * (np.asarray(x, dtype=float) - self.c)
        with np.errstate(over="ignore"):
            return np.cosh(u2), np.sinh(u2)

    def f(self, x):
        ch, sh = self._ch_sh(x)
        e = RAZAVY_ENERGY
        return 0.5 * sh - 2.0 * e * sh / (e * ch - 2.0)

    def f_prime(self, x):
        ch, _ = self._ch_sh(x)
        e = RAZAVY_ENERGY
        return ch - 4.0 * e * (e - 2.0 * ch) / (e * ch - 2.0) ** 2

    def _int_from_c(self, x):
        # integral of F from c to x
        ch, _ = self._ch_sh(x)
        e = RAZAVY_ENERGY
        return (ch - 1.0) / 4.0 - np.log((e * ch - 2.0) / (e - 2.0))

    def int_f(self, x):
        return self._int_from_c(x) - self._int_from_c(0.0)

    def psi0(self, x):
        """Unnormalised ground state of the (shifted) Razavy well."""
        ch, _ = self._ch_sh(x)
        with np.errstate(under="ignore", invalid="ignore"):
            return np.where(np.isinf(ch), 0.0, np.exp(-ch / 4.0) * (1.0 + RAZAVY_ALPHA * ch))

    def log_weight(self, x):
        ch, _ = self._ch_sh(x)
        with np.errstate(invalid="ignore"):
            return -0.5 * ch + 2.0 * np.log1p(RAZAVY_ALPHA * ch)

    def v1(self, x):
        u = np.asarray(x, dtype=float) - self.c
        with np.errstate(over="ignore"):
            return np.cosh(4.0 * u) / 8.0 - 3.0 * np.cosh(2.0 * u) - 0.125

    @property
    def working_domain(self):
        return (self.c - 4.5, self.c + 4.5)

    @property
    def spectral_domain(self):
        return (self.c - 4.0, self.c + 4.0)

    @property
    def default_gamma(self):
        return -51.0


def quartic_seed(c: float = 0.0) -> QuarticSeed:
    if not math.isfinite(c):
        raise ValueError(f"shift must be finite, got {c}")
    return QuarticSeed(float(c))


def razavy_seed(c: float = 0.0) -> RazavySeed:
    if not math.isfinite(c):
        raise ValueError(f"shift must be finite, got {c}")
    return RazavySeed(float(c))


SEEDS = {"quartic": quartic_seed, "razavy": razavy_seed}


def make_seed(kind: str, c: float = 0.0) -> RiccatiSeed:
    try:
        return SEEDS[kind](c)
    except KeyError:
        raise ValueError(f"unknown seed {kind!r}; choose from {sorted(SEEDS)}") from None


class Bundle(NamedTuple):
    F: float
    F_prime: float
    V1: float
    V2: float
    log_weight: float


def eval_bundle(seed: RiccatiSeed, x: float, cap: float = DEFAULT_LOG_WEIGHT_CAP) -> Bundle:
    lw = float(seed.log_weight(x))
    if lw > cap:
        raise Overflow(f"log_weight={lw:.6g} at x={x} exceeds cap {cap}")
    return Bundle(
        float(seed.f(x)), float(seed.f_prime(x)), float(seed.v1(x)), float(seed.v2(x)), lw
    )
