"""Lerch transcendent and the detector response kernel J(x, y).

Both functions are real-argument only.  ``lerch_phi`` sums the defining
series directly when ``z`` is comfortably below one and switches to an
Euler-Maclaurin tail once the geometric decay is too slow to be useful.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, NonConvergence, PoleProximity

# Euler-Maclaurin coefficients B_{2j}/(2j)! for j = 1..5
_EM_COEFFS = (1 / 12, -1 / 720, 1 / 30240, -1 / 1209600, 1 / 47900160)

# Below this decay rate -ln(z) the direct sum needs thousands of terms.
_DIRECT_MIN_RATE = 0.02
_CHUNK = 256


@dataclass(frozen=True)
class SeriesConfig:
    rel_tol: float = 1e-10
    max_terms: int = 10**6
    pole_guard: float = 1e-6

    def __post_init__(self):
        if not 0 < self.rel_tol < 1:
            raise DomainError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms}")
        if not self.pole_guard > 0:
            raise DomainError(f"pole_guard must be positive, got {self.pole_guard}")


DEFAULT_SERIES = SeriesConfig()


def _check_lerch_pole(a, guard):
    # nearest non-positive integer
    m = min(0, round(a))
    if abs(a - m) < guard:
        raise PoleProximity(f"Lerch third argument a={a!r} is within {guard} of pole {m}")


def _exp_integral(s, x):
    """Generalised exponential integral E_s(x) for real s >= 1, x > 0."""
    if float(s).is_integer():
        return float(special.expn(int(s), x))
    nu = s - math.floor(s)
    e = x ** (nu - 1) * special.gamma(1 - nu) * special.gammaincc(1 - nu, x)
    for k in range(int(math.floor(s))):
        e = (math.exp(-x) - x * e) / (nu + k)
    return e


def _tail_integral(lam, s, a, n):
    """Integral of exp(-lam t) (t + a)^-s over [n, inf)."""
    base = n + a
    if lam == 0.0:
        return base ** (1 - s) / (s - 1)
    return math.exp(lam * a) * base ** (1 - s) * _exp_integral(s, lam * base)


def _term_derivatives(lam, s, a, t, order):
    """f, f', ..., f^(order) of f(t) = exp(-lam t) (t + a)^-s."""
    u = t + a
    # derivatives of log f
    g = [0.0, -lam - s / u]
    for j in range(2, order + 1):
        g.append(s * (-1) ** j * math.factorial(j - 1) / u**j)
    f = [math.exp(-lam * t) * u ** (-s)]
    for m in range(1, order + 1):
        f.append(sum(math.comb(m - 1, j) * g[j + 1] * f[m - 1 - j] for j in range(m)))
    return f


def _head_sum(z, s, a, start, stop):
    k = np.arange(start, stop, dtype=float)
    return float(np.sum(z**k / (k + a) ** s))


def _direct(z, s, a, cfg):
    total = 0.0
    n = 0
    while n < cfg.max_terms:
        stop = min(n + _CHUNK * max(1, n // _CHUNK), cfg.max_terms)
        total += _head_sum(z, s, a, n, stop)
        n = stop
        if n + a > 0:
            bound = z**n / ((n + a) ** s * (1 - z))
            # tenfold margin: the bound is tight for slowly decaying z
            if bound <= 0.1 * cfg.rel_tol * abs(total):
                return total
    raise NonConvergence(f"lerch_phi({z}, {s}, {a}) did not converge in {cfg.max_terms} terms",
                         estimate=total)


def _euler_maclaurin(z, s, a, cfg):
    lam = -math.log(z) if z < 1 else 0.0
    n = max(16, math.ceil(8 - a))
    while n <= cfg.max_terms:
        head = _head_sum(z, s, a, 0, n)
        f = _term_derivatives(lam, s, a, n, 2 * len(_EM_COEFFS) - 1)
        tail = _tail_integral(lam, s, a, n) + f[0] / 2
        last = 0.0
        for j, c in enumerate(_EM_COEFFS):
            last = -c * f[2 * j + 1]
            tail += last
        total = head + tail
        if abs(last) <= cfg.rel_tol * abs(total):
            return total
        n *= 2
    raise NonConvergence(f"lerch_phi({z}, {s}, {a}) tail correction did not settle "
                         f"within {cfg.max_terms} terms")


def lerch_phi(z, s, a, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    """Lerch transcendent ``sum_{k>=0} z**k / (k + a)**s`` for real arguments.

    Parameters
    ----------
    z : float in [0, 1]
    s : float >= 1
    a : float, not near 0, -1, -2, ...; must exceed ``cfg.pole_guard`` when z == 1

    Raises
    ------
    DomainError
        Arguments outside the supported real domain, including (z, s) = (1, 1).
    PoleProximity
        ``a`` within ``cfg.pole_guard`` of a non-positive integer.
    NonConvergence
        Tolerance not reached within ``cfg.max_terms`` terms.
    """
    z, s, a = float(z), float(s), float(a)
    if not (0.0 <= z <= 1.0) or not math.isfinite(a) or not s >= 1.0:
        raise DomainError(f"lerch_phi needs z in [0,1], s >= 1, finite a; got ({z}, {s}, {a})")
    if z == 1.0 and s == 1.0:
        raise DomainError("lerch_phi(1, 1, a) is the divergent harmonic series")
    _check_lerch_pole(a, cfg.pole_guard)
    if z == 1.0 and a <= cfg.pole_guard:
        raise DomainError(f"Hurwitz case z=1 needs a > pole_guard, got a={a}")
    if a < 0 and not s.is_integer():
        raise DomainError("negative a with non-integer s gives complex terms")
    if z == 0.0:
        return a ** (-s)
    if z < 1.0 and -math.log(z) >= _DIRECT_MIN_RATE:
        return _direct(z, s, a, cfg)
    return _euler_maclaurin(z, s, a, cfg)


def _lerch_shifted(z, s, a, cfg):
    # peel leading terms so the Hurwitz case (z=1) is evaluated at a > 1
    if z == 1.0 and a <= 1.0:
        _check_lerch_pole(a, cfg.pole_guard)
        m = math.ceil(1.0 - a) + 1
        head = sum(1.0 / (k + a) ** s for k in range(m))
        return head + lerch_phi(z, s, a + m, cfg)
    return lerch_phi(z, s, a, cfg)


@dataclass(frozen=True)
class KernelArgs:
    """Signed gap-to-acceleration ratio ``x`` and dimensionless duration ``y``."""

    x: float
    y: float

    def validate(self, cfg: SeriesConfig = DEFAULT_SERIES):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise DomainError(f"non-finite kernel arguments {self}")
        if not self.y > 0:
            raise DomainError(f"y must be positive, got {self.y}")
        k = max(1, round(self.y / (2 * math.pi)))
        if abs(self.y - 2 * math.pi * k) < cfg.pole_guard:
            raise PoleProximity(f"y={self.y} is within {cfg.pole_guard} of 2*pi*{k}")


def _csc2_minus_inv2(t):
    """csc(t)**2 - 1/t**2 by its Laurent tail, accurate for |t| < 1."""
    return float(np.polyval(_CSC2_COEFFS[::-1], t * t))


def _expm1_minus_linear(w):
    """(exp(w) - 1 - w) / w**2 without cancellation at small w."""
    if abs(w) < 0.5:
        return float(np.polyval(_EXP2_COEFFS[::-1], w))
    return (math.expm1(w) - w) / w**2


def _pole_bracket(c, t):
    # exp(c t)/sin(t)^2 - 1/t^2 - c/t, finite as t -> 0 (value c^2/2 + 1/3)
    return c * c * _expm1_minus_linear(c * t) + math.exp(c * t) * _csc2_minus_inv2(t)


def _bernoulli_csc2(terms):
    bern = special.bernoulli(2 * terms)
    return np.array([(2 * k - 1) * 4**k * abs(bern[2 * k]) / math.factorial(2 * k)
                     for k in range(1, terms + 1)])


_CSC2_COEFFS = _bernoulli_csc2(18)
_EXP2_COEFFS = np.array([1 / math.factorial(k + 2) for k in range(20)])
# within this distance of y/2pi = m the singular terms are grouped analytically
_POLE_ZONE = 0.25


def _minus_side(z, s, m, b, cfg):
    # sum over k != m-1 of z^k / (k + 1 - b)^s; the k = m-1 term is singular
    head = sum(z**k / (k + 1 - b) ** s for k in range(m - 1))
    return head + z**m * _lerch_shifted(z, s, 1 + (m - b), cfg)


def j_kernel(x, y, cfg: SeriesConfig = DEFAULT_SERIES) -> float:
    """Response kernel J(x, y).

    ``x`` is the signed ratio of energy gap to acceleration (negative for
    excitation, positive for de-excitation) and ``y = 2 alpha tau_H`` the
    dimensionless interaction time.  The step function uses theta(0) = 0.

    Near ``y = 2 pi m`` the 1/sin^2 term and the singular Lerch terms cancel;
    they are combined in closed form there so accuracy holds right up to
    ``cfg.pole_guard``, inside which evaluation is refused.
    """
    KernelArgs(float(x), float(y)).validate(cfg)
    x, y = float(x), float(y)
    ax = abs(x)
    z = math.exp(-2 * math.pi * ax)
    b = y / (2 * math.pi)
    m = round(b)
    near = m >= 1 and abs(m - b) < _POLE_ZONE
    # z rounds to 1 only when the ax-weighted term is far below rounding
    with_s1 = ax > 0 and z < 1.0

    val = ax * y / 8 if x > 0 else 0.0
    if near:
        lower2 = _minus_side(z, 2, m, b, cfg)
        lower1 = _minus_side(z, 1, m, b, cfg) if with_s1 else 0.0
        val += y**2 * math.exp(-2 * math.pi * m * ax) / 64 * _pole_bracket(2 * ax, math.pi * (m - b))
    else:
        lower2 = _lerch_shifted(z, 2, 1 - b, cfg)
        lower1 = lerch_phi(z, 1, 1 - b, cfg) if with_s1 else 0.0
        val += (y / 2) ** 2 * math.exp(-ax * y) / (16 * math.sin(y / 2) ** 2)
    val += y**2 * z / (64 * math.pi**2) * (_lerch_shifted(z, 2, 1 + b, cfg) - lower2)
    if with_s1:
        val += ax * y**2 * z / (32 * math.pi) * (lerch_phi(z, 1, 1 + b, cfg) - lower1)
    return val
