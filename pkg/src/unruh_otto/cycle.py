"""Four-stroke Unruh Otto cycle.

Sign convention: energy absorbed by the working substance is positive, so
the extracted work is ``-W_total``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .detector import DetectorSpec
from .errors import ConstraintUnsatisfiable, DomainError
from .response import ResponseArgs, delta_p_closed
from .specfun import DEFAULT_SERIES, SeriesConfig, j_kernel

PERTURBATIVE_THRESHOLD = 0.1


@dataclass(frozen=True)
class CycleParams:
    spec: DetectorSpec
    v: float
    alpha_H: float
    alpha_C: float

    def __post_init__(self):
        if not 0 < self.v < 1:
            raise DomainError(f"speed must lie in (0, 1), got {self.v}")
        if not self.alpha_H > self.alpha_C > 0:
            raise DomainError(f"need alpha_H > alpha_C > 0, got {self.alpha_H}, {self.alpha_C}")

    @property
    def a_H(self):
        return self.spec.omega2 / self.alpha_H

    @property
    def a_C(self):
        return self.spec.omega1 / self.alpha_C

    def hot_stroke(self, p):
        s = self.spec
        return ResponseArgs(p, s.n, s.omega2, self.alpha_H, self.v, s.g)

    def cold_stroke(self, p):
        s = self.spec
        return ResponseArgs(p, s.n, s.omega1, self.alpha_C, self.v, s.g)


@dataclass
class CycleReport:
    W1: float
    Q2: float
    W3: float
    Q4: float
    Q_total: float
    W_total: float
    eta: float
    delta_pH: float
    delta_pC: float
    p_used: float
    validity_margin: float
    flags: dict = field(default_factory=dict)

    def to_dict(self):
        return asdict(self)


def _check_gaps(omega1, omega2):
    if not 0 < omega1 < omega2:
        raise DomainError(f"need 0 < omega1 < omega2, got {omega1}, {omega2}")


def _check_p(p):
    if not 0 <= p <= 1:
        raise DomainError(f"population must lie in [0, 1], got {p}")


def step1_work(p, omega1, omega2):
    """Work absorbed while the gap expands omega1 -> omega2."""
    _check_p(p)
    _check_gaps(omega1, omega2)
    return p * (omega2 - omega1)


def step2_heat(omega2, delta_pH):
    if not omega2 > 0:
        raise DomainError(f"omega2 must be positive, got {omega2}")
    return omega2 * delta_pH


def step3_work(p, delta_pH, omega1, omega2):
    """Work absorbed while the gap contracts omega2 -> omega1."""
    _check_p(p)
    _check_gaps(omega1, omega2)
    return (p + delta_pH) * (omega1 - omega2)


def step4_heat(omega1, delta_pC):
    if not omega1 > 0:
        raise DomainError(f"omega1 must be positive, got {omega1}")
    return omega1 * delta_pC


def efficiency(omega1, omega2):
    _check_gaps(omega1, omega2)
    return 1 - omega1 / omega2


def cal_P(a_H, a_C, v, cfg: SeriesConfig = DEFAULT_SERIES):
    """Ratio of excitation kernels to the de-excitation asymmetry.

    Fixes the closed-cycle population through ``p = n P / ((n+1) P + 1)``.
    """
    if not (a_H > 0 and a_C > 0):
        raise DomainError(f"a_H and a_C must be positive, got {a_H}, {a_C}")
    if not 0 < v < 1:
        raise DomainError(f"speed must lie in (0, 1), got {v}")
    r = math.atanh(v)
    y = 2 * r
    return 4 * (j_kernel(-a_H, y, cfg) + j_kernel(-a_C, y, cfg)) / ((a_H + a_C) * r)


def solve_initial_population(params: CycleParams, cfg: SeriesConfig = DEFAULT_SERIES):
    """Initial excited population that makes the cycle close (delta_pH + delta_pC = 0)."""
    P = cal_P(params.a_H, params.a_C, params.v, cfg)
    if not P > 0:
        raise ConstraintUnsatisfiable(f"closure needs P > 0, got {P}")
    n = params.spec.n
    return n * P / ((n + 1) * P + 1)


def kieu_condition(params: CycleParams):
    """Whether T_H > (omega2/omega1) T_C, i.e. alpha_H omega1 > alpha_C omega2."""
    s = params.spec
    return params.alpha_H * s.omega1 > params.alpha_C * s.omega2


def run_cycle(params: CycleParams, p, cfg: SeriesConfig = DEFAULT_SERIES,
              perturbative_threshold=PERTURBATIVE_THRESHOLD) -> CycleReport:
    """Evaluate every stroke of the cycle at initial excited population ``p``.

    ``Q4`` is the heat of the cold stroke as actually computed.  ``Q_total``
    is the closed-cycle heat, where the cold stroke exactly undoes the hot
    one, so ``Q_total + W_total`` vanishes for any input;
    ``flags['closed_cycle_ok']`` reports whether the supplied ``p`` really
    closes the cycle.
    """
    _check_p(p)
    s = params.spec
    dH = delta_p_closed(params.hot_stroke(p), cfg)
    dC = delta_p_closed(params.cold_stroke(p), cfg)

    W1 = step1_work(p, s.omega1, s.omega2)
    Q2 = step2_heat(s.omega2, dH)
    W3 = step3_work(p, dH, s.omega1, s.omega2)
    Q4 = step4_heat(s.omega1, dC)
    W_total = W1 + W3
    Q_total = Q2 + step4_heat(s.omega1, -dH)

    margin = s.g**2 * params.a_H * math.atanh(params.v)
    flags = {
        "closed_cycle_ok": abs(dH + dC) < 1e-8 * max(abs(dH), s.g**2),
        "perturbative_ok": margin < perturbative_threshold,
        "positive_work": -W_total > 0 and dH > 0,
        "kieu_condition": kieu_condition(params),
    }
    return CycleReport(
        W1=W1, Q2=Q2, W3=W3, Q4=Q4, Q_total=Q_total, W_total=W_total,
        eta=efficiency(s.omega1, s.omega2), delta_pH=dH, delta_pC=dC, p_used=p,
        validity_margin=margin, flags=flags,
    )
