"""Uniformly accelerated worldlines in natural units (c = hbar = k_B = 1)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


def _check_alpha(alpha):
    if not (np.isfinite(alpha) and alpha > 0):
        raise DomainError(f"acceleration must be positive and finite, got {alpha}")


def _check_speed(v):
    if not 0 < v < 1:
        raise DomainError(f"speed must lie in (0, 1), got {v}")


@dataclass(frozen=True)
class Trajectory:
    """Rindler worldline with proper acceleration ``alpha``."""

    alpha: float

    def __post_init__(self):
        _check_alpha(self.alpha)

    def event(self, tau):
        return rindler_event(self.alpha, tau)

    def velocity(self, tau):
        return velocity(self.alpha, tau)


def rindler_event(alpha, tau):
    """Coordinate time and position ``(sinh(alpha tau), cosh(alpha tau)) / alpha``.

    Works elementwise on arrays of ``tau``.
    """
    _check_alpha(alpha)
    return np.sinh(alpha * tau) / alpha, np.cosh(alpha * tau) / alpha


def velocity(alpha, tau):
    _check_alpha(alpha)
    return np.tanh(alpha * tau)


def half_interaction_time(v, alpha):
    """Proper time to go from rest to speed ``v``: ``arctanh(v) / alpha``."""
    _check_speed(v)
    _check_alpha(alpha)
    return math.atanh(v) / alpha


def interaction_time(v, alpha):
    """Proper duration of a stroke that reverses velocity ``-v -> v``."""
    return 2 * half_interaction_time(v, alpha)


def unruh_temperature(alpha):
    _check_alpha(alpha)
    return alpha / (2 * math.pi)
