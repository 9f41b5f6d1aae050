"""Operators on the (n+1)-level working substance.

Basis ordering is ``|e_1>, ..., |e_n>, |g>``: excited levels first, ground
state last.  Everything here is real symmetric.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainError


@dataclass(frozen=True)
class DetectorSpec:
    """Excited-level degeneracy ``n``, gaps ``omega1 < omega2`` and coupling ``g``."""

    n: int
    omega1: float
    omega2: float
    g: float = 1.0

    def __post_init__(self):
        _check_n(self.n)
        if not 0 < self.omega1 < self.omega2:
            raise DomainError(f"need 0 < omega1 < omega2, got {self.omega1}, {self.omega2}")
        if not self.g > 0:
            raise DomainError(f"coupling g must be positive, got {self.g}")


def _check_n(n):
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"degeneracy must be a positive integer, got {n!r}")


def hamiltonian(n, omega):
    _check_n(n)
    if not omega > 0:
        raise DomainError(f"energy gap must be positive, got {omega}")
    return np.diag([float(omega)] * n + [0.0])


def monopole(n):
    """Monopole coupling: ground state <-> uniform superposition of excited levels."""
    _check_n(n)
    m = np.zeros((n + 1, n + 1))
    m[:n, n] = m[n, :n] = 1 / math.sqrt(n)
    return m


def initial_state(n, p):
    _check_n(n)
    if not 0 <= p <= 1:
        raise DomainError(f"population must lie in [0, 1], got {p}")
    return np.diag([p / n] * n + [1 - p])


def shift_matrix(n, delta_p):
    """Second-order population shift: uniform 1/n excited block, -1 on the ground state."""
    _check_n(n)
    d = np.zeros((n + 1, n + 1))
    d[:n, :n] = 1 / n
    d[n, n] = -1.0
    return delta_p * d


def energy(rho, H):
    """Energy expectation ``Tr(rho H)``."""
    rho, H = np.asarray(rho), np.asarray(H)
    if rho.ndim != 2 or rho.shape != H.shape or rho.shape[0] != rho.shape[1]:
        raise DimensionMismatch(f"shapes {rho.shape} and {H.shape} do not match")
    return float(np.einsum("ij,ji->", rho, H))


def is_valid_state(rho, atol=1e-12):
    """Unit trace, symmetric, and eigenvalues no lower than ``-atol``."""
    rho = np.asarray(rho)
    if not np.allclose(rho, rho.T, atol=atol) or abs(np.trace(rho) - 1) > atol:
        return False
    return bool(np.linalg.eigvalsh(rho).min() >= -atol)
