"""Finite-difference eigenvalues of -d2/dx2 + V on a Dirichlet box."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import DomainTooSmall
from .family import build_context, potential_member

WALL_TOL = 1e-6
DEFAULT_POINTS = 4000


@dataclass(frozen=True)
class SpectralProblem:
    potential: Callable
    domain: tuple[float, float]
    n_points: int = DEFAULT_POINTS

    def __post_init__(self):
        a, b = self.domain
        if not a < b:
            raise ValueError(f"domain must satisfy a < b, got [{a}, {b}]")
        if self.n_points < 200:
            raise ValueError(f"n_points must be >= 200, got {self.n_points}")

    @property
    def x(self) -> np.ndarray:
        """Interior nodes; the walls sit one spacing beyond each end."""
        a, b = self.domain
        return np.linspace(a, b, self.n_points + 2)[1:-1]


@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray
    vectors: Optional[np.ndarray] = None
    x: Optional[np.ndarray] = None


def eigen_lowest(p: SpectralProblem, k: int, vectors: bool = False) -> EigenResult:
    """Lowest ``k`` levels of the second-order central-difference Hamiltonian.

    Eigenvalues come from bisection on the tridiagonal matrix and vectors
    from inverse iteration (LAPACK stebz/stein).

    Raises:
        DomainTooSmall: a returned eigenvector has relative amplitude above
            1e-6 at the first or last interior node.
    """
    if k < 1 or k >= p.n_points // 4:
        raise ValueError(f"need 1 <= k << n_points, got k={k}, n_points={p.n_points}")
    x = p.x
    h = x[1] - x[0]
    v = np.asarray(p.potential(x), dtype=float)
    if v.shape != x.shape or not np.all(np.isfinite(v)):
        raise ValueError("potential must be finite on the box")
    diag = 2.0 / h**2 + v
    off = np.full(x.size - 1, -1.0 / h**2)
    w, vec = eigh_tridiagonal(diag, off, select="i", select_range=(0, k - 1),
                              lapack_driver="stebz")
    peak = np.max(np.abs(vec), axis=0)
    wall = np.maximum(np.abs(vec[0]), np.abs(vec[-1])) / peak
    if np.any(wall > WALL_TOL):
        n = int(np.argmax(wall))
        raise DomainTooSmall(
            f"level {n} has wall amplitude {wall[n]:.2e} on [{p.domain[0]}, {p.domain[1]}]"
        )
    if vectors:
        # fix the sign so each vector starts positive
        sgn = np.sign(vec[np.argmax(np.abs(vec) > 1e-8 * peak, axis=0), np.arange(k)])
        return EigenResult(w, vec * sgn / np.sqrt(h), x)
    return EigenResult(w)


def count_nodes(vec: np.ndarray, rel: float = 1e-8) -> int:
    """Sign changes of a sampled eigenvector, ignoring the numerically zero tails."""
    v = vec[np.abs(vec) > rel * np.max(np.abs(vec))]
    return int(np.sum(np.signbit(v[1:]) != np.signbit(v[:-1])))


@dataclass(frozen=True)
class IsospectralReport:
    offset: int
    rows: list[tuple[float, float, float]]

    @property
    def max_delta(self) -> float:
        return max(abs(d) for _, _, d in self.rows)


def isospectral_report(
    v_a: Callable,
    v_b: Callable,
    domain: tuple[float, float],
    n_points: int = DEFAULT_POINTS,
    k: int = 4,
    offsets: tuple[int, ...] = (-1, 0, 1),
) -> IsospectralReport:
    """Align the lowest ``k`` levels of two potentials and report the differences.

    ``offset = 1`` pairs E_a[i] with E_b[i + 1] (b has an extra ground
    level); ``offset = -1`` is the reverse. The offset with the smallest
    maximum difference wins; ties go to the smaller |offset|.
    """
    ea = eigen_lowest(SpectralProblem(v_a, domain, n_points), k + 1).values
    eb = eigen_lowest(SpectralProblem(v_b, domain, n_points), k + 1).values
    best = None
    for off in sorted(offsets, key=abs):
        if off >= 0:
            pairs = list(zip(ea[:k], eb[off:off + k]))
        else:
            pairs = list(zip(ea[-off:-off + k], eb[:k]))
        rows = [(float(a), float(b), float(a - b)) for a, b in pairs]
        rep = IsospectralReport(off, rows)
        if best is None or rep.max_delta < best.max_delta:
            best = rep
    return best


def family_box(seed, gamma: float, n_nodes: int = 4001):
    """V1, V2 and V1_gamma as callables on the seed's spectral box.

    gamma(x) is re-tabulated on the box, which is wider than the working
    domain on the side where the zero mode decays slowly.
    """
    domain = seed.spectral_domain
    ctx = build_context(seed, domain=(min(domain[0], -0.5), max(domain[1], 0.5)),
                        n_nodes=n_nodes)
    ctx.check_gamma(gamma)
    return seed.v1, seed.v2, (lambda x: potential_member(ctx, gamma, x)), domain
