"""Second-order population shift of an accelerated detector.

Two independent routes to the same number:

* ``delta_p_closed`` combines two values of the response kernel J.
* ``delta_p_quadrature`` integrates the Lorentzian-switched double integral
  over proper times directly, with the Wightman function written as its
  image sum and a finite regulator epsilon that is extrapolated to zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, NonConvergence
from .specfun import DEFAULT_SERIES, SeriesConfig, j_kernel


@dataclass(frozen=True)
class ResponseArgs:
    """Inputs of one isochoric stroke.

    ``omega = 0`` is accepted and means the zero-gap limit a -> 0.  ``n`` may
    be ``math.inf``.
    """

    p: float
    n: float
    omega: float
    alpha: float
    v: float
    g: float = 1.0

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise DomainError(f"population must lie in [0, 1], got {self.p}")
        if not (self.n == math.inf or (int(self.n) == self.n and self.n >= 1)):
            raise DomainError(f"degeneracy must be a positive integer or inf, got {self.n}")
        if not (self.omega >= 0 and math.isfinite(self.omega)):
            raise DomainError(f"energy gap must be >= 0, got {self.omega}")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise DomainError(f"acceleration must be positive, got {self.alpha}")
        if not 0 < self.v < 1:
            raise DomainError(f"speed must lie in (0, 1), got {self.v}")
        if not self.g > 0:
            raise DomainError(f"coupling must be positive, got {self.g}")

    @property
    def a(self):
        return self.omega / self.alpha

    @property
    def y(self):
        return 2 * math.atanh(self.v)

    @property
    def tau_half(self):
        return math.atanh(self.v) / self.alpha


@dataclass(frozen=True)
class QuadratureConfig:
    """Settings for the brute-force oracle.

    ``epsilon_schedule`` lists regulator values in units of tau_H (so the
    default 1e-2 means epsilon = 0.01 tau_H).  ``grid`` is the number of
    Gauss-Legendre nodes per panel on each axis.  The error estimate must
    fall below ``rel_tol * max(|delta_p|, 0.01 g**2)``; refinement doubles
    ``grid`` up to ``max_refine`` times before giving up.
    """

    epsilon_schedule: tuple = (1e-2, 5e-3, 2.5e-3)
    image_terms: int = 64
    domain_factor: float = 40.0
    grid: int = 32
    extrapolate: bool = True
    rel_tol: float = 1e-4
    max_refine: int = 2

    def __post_init__(self):
        eps = tuple(float(e) for e in self.epsilon_schedule)
        if not eps or any(e <= 0 for e in eps) or any(b >= a for a, b in zip(eps, eps[1:])):
            raise DomainError(f"epsilon_schedule must be positive and strictly decreasing: {eps}")
        object.__setattr__(self, "epsilon_schedule", eps)
        if self.image_terms < 1:
            raise DomainError("image_terms must be >= 1")
        if not self.domain_factor > 1:
            raise DomainError("domain_factor must exceed 1")
        if self.grid < 16:
            raise DomainError("grid must be >= 16")
        if not 0 < self.rel_tol < 1:
            raise DomainError("rel_tol must lie in (0, 1)")
        if self.max_refine < 1:
            raise DomainError("max_refine must be >= 1")


def switching(tau, tau_half):
    """Lorentzian window ``tau_half**2 / (tau**2 + tau_half**2)``."""
    if not tau_half > 0:
        raise DomainError(f"tau_half must be positive, got {tau_half}")
    return tau_half**2 / (np.square(tau) + tau_half**2)


def wightman(alpha, dtau, epsilon, K=64):
    """Vacuum Wightman function along a Rindler worldline, as an image sum.

    Sums k = -K..K of ``-1 / (4 pi^2 (dtau - i eps - 2 pi i k / alpha)^2)``.
    For K >= 1 the images beyond |k| = K are added through their midpoint
    integral, which leaves an O(K^-3) error instead of the O(1/K) truncation
    error.  K = 0 gives the inertial (Minkowski) correlator alone.
    """
    if not alpha > 0:
        raise DomainError(f"acceleration must be positive, got {alpha}")
    if not epsilon > 0:
        raise DomainError(f"regulator must be positive, got {epsilon}")
    if K < 0:
        raise DomainError(f"image truncation must be >= 0, got {K}")
    beta = 2 * math.pi / alpha
    w = np.asarray(dtau, dtype=float) - 1j * epsilon
    k = np.arange(-K, K + 1)
    total = np.sum(1.0 / (w[..., None] - 1j * beta * k) ** 2, axis=-1)
    if K >= 1:
        c = K + 0.5
        total = total - 2 * c / (w**2 + (beta * c) ** 2)
    return -total / (4 * math.pi**2)


def delta_p_closed(args: ResponseArgs, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    """Population shift ``g^2 [(1-p) J(-a, y) - (p/n) J(a, y)]``."""
    a, y = args.a, args.y
    val = (1 - args.p) * j_kernel(-a, y, cfg)
    if args.p > 0 and args.n != math.inf:
        val -= args.p / args.n * j_kernel(a, y, cfg)
    return args.g**2 * val


def delta_p_limit_n_inf(args: ResponseArgs, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    """Infinite-degeneracy limit; an upper bound of ``delta_p_closed`` over n."""
    return args.g**2 * (1 - args.p) * j_kernel(-args.a, args.y, cfg)


@lru_cache(maxsize=16)
def _legendre(m):
    x, w = np.polynomial.legendre.leggauss(m)
    return x, w


@lru_cache(maxsize=16)
def _unit_composite(m, panels):
    # Gauss-Legendre nodes and weights on [0, 1] split into equal panels
    x, w = _legendre(m)
    t = ((np.arange(panels)[:, None] + (x + 1) / 2) / panels).ravel()
    return t, np.tile(w / (2 * panels), panels)


def _window_overlap(u, tau_half, half_width, m):
    """Overlap of two truncated windows separated by u.

    Integrates xi(tau) xi(tau - u) over the square's slice.  By symmetry
    about tau = u/2 it is twice the integral over [|u|/2, L].  Substituting
    tau - |u| = tau_H tan(phi) absorbs the second window into the measure.
    """
    au = np.abs(u)[:, None]
    lo = np.arctan(-au / (2 * tau_half))
    hi = np.arctan((half_width - au) / tau_half)
    t, wt = _unit_composite(m, 4)
    phi = lo + (hi - lo) * t
    tau = au + tau_half * np.tan(phi)
    vals = tau_half * switching(tau, tau_half)
    return 2 * (hi[:, 0] - lo[:, 0]) * (vals @ wt)


def _outer_rule(eps, tau_half, half_width, m):
    # panels graded geometrically from the regulator scale up to tau_H,
    # then of width tau_H out to the edge of the difference domain
    edges = [0.0, eps]
    while edges[-1] * 2 < tau_half:
        edges.append(edges[-1] * 2)
    top = 2 * half_width
    edges.extend(np.arange(edges[-1] + tau_half, top, tau_half).tolist())
    edges.append(top)
    edges = np.asarray(edges)
    x, w = _legendre(m)
    mid = (edges[1:] + edges[:-1]) / 2
    half = (edges[1:] - edges[:-1]) / 2
    pos = (mid[:, None] + half[:, None] * x).ravel()
    wpos = (half[:, None] * w).ravel()
    return np.concatenate([-pos[::-1], pos]), np.concatenate([wpos[::-1], wpos])


def regulated_integral(args: ResponseArgs, epsilon, image_terms=64, domain_factor=40.0, grid=32):
    """Double proper-time integral at finite regulator ``epsilon``.

    Returns the complex value of g^2 times the windowed integral over the
    square [-L, L]^2, L = domain_factor * tau_H.  ``epsilon`` is in
    proper-time units.
    """
    tau_half = args.tau_half
    half_width = domain_factor * tau_half
    u, wu = _outer_rule(epsilon, tau_half, half_width, grid)
    overlap = _window_overlap(u, tau_half, half_width, grid)
    phase = np.exp(-1j * args.omega * u)
    weight = (1 - args.p) * phase
    if args.n != math.inf:
        weight = weight - args.p / args.n * np.conj(phase)
    G = wightman(args.alpha, u, epsilon, image_terms)
    return args.g**2 * np.sum(wu * overlap * weight * G)


def _neville_at_zero(xs, ys):
    p = list(ys)
    n = len(xs)
    for m in range(1, n):
        for i in range(n - m):
            p[i] = (xs[i + m] * p[i] - xs[i] * p[i + 1]) / (xs[i + m] - xs[i])
    return p[0]


def _eps_extrapolated(args, qcfg, grid, domain_factor, image_terms):
    eps = [f * args.tau_half for f in qcfg.epsilon_schedule]
    vals = [regulated_integral(args, e, image_terms, domain_factor, grid) for e in eps]
    if len(vals) == 1:
        return vals[0], 0.0
    if qcfg.extrapolate:
        best = _neville_at_zero(eps, vals)
        lower = _neville_at_zero(eps[1:], vals[1:])
        return best, abs(best - lower)
    return vals[-1], abs(vals[-1] - vals[-2])


def delta_p_quadrature(args: ResponseArgs, qcfg: QuadratureConfig = QuadratureConfig()):
    """Brute-force oracle for the population shift.

    Returns ``(estimate, error_estimate)``.  The error estimate adds the
    grid-refinement, epsilon-extrapolation, image-truncation (K vs K/2) and
    domain-truncation (L vs 2L) residuals.

    Raises
    ------
    NonConvergence
        If the error estimate stays above the ``qcfg.rel_tol`` target after
        ``qcfg.max_refine`` grid doublings, or if the imaginary part does
        not vanish within the error estimate.
    """
    K, D = qcfg.image_terms, qcfg.domain_factor
    grid = qcfg.grid
    prev, _ = _eps_extrapolated(args, qcfg, grid, D, K)
    dom, _ = _eps_extrapolated(args, qcfg, grid, 2 * D, K)
    img, _ = _eps_extrapolated(args, qcfg, grid, D, max(1, K // 2))
    fixed_err = abs(dom - prev) + abs(img - prev)
    for _ in range(qcfg.max_refine):
        grid *= 2
        cur, eps_err = _eps_extrapolated(args, qcfg, grid, D, K)
        err = abs(cur - prev) + eps_err + fixed_err
        target = qcfg.rel_tol * max(abs(cur), 1e-2 * args.g**2)
        if err <= target:
            break
        prev = cur
    else:
        raise NonConvergence(
            f"quadrature error estimate {err:.3g} exceeds {target:.3g} at grid={grid}",
            estimate=cur.real, error=err)
    if abs(cur.imag) > err + 1e-12 * args.g**2:
        raise NonConvergence(f"imaginary part {cur.imag:.3g} exceeds error estimate {err:.3g}",
                             estimate=cur.real, error=err)
    return float(cur.real), float(err)
