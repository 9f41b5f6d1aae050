import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from unruh_otto import (
    DomainError,
    KernelArgs,
    NonConvergence,
    PoleProximity,
    SeriesConfig,
    j_kernel,
    lerch_phi,
)

Y99 = 2 * math.atanh(0.99)

# 50-digit partial sums with explicit geometric tail bounds (scripts/derive_oracles.py)
LERCH_03_2_07 = 2.1594030237557741521
J_PLUS_1_2 = 0.26187442592295239335
J_MINUS_1_2 = 0.011874425922952393354
J_NEAR_2PI = 0.056147677087440454122    # J(-0.3, 2 pi - 1e-5)
J_NEAR_4PI = 0.56289696445680312818     # J(0.3, 4 pi + 1e-4)


def brute_lerch(z, s, a, rel=1e-16):
    """Plain partial sum until the geometric tail bound is negligible."""
    terms, k = [], 0
    while True:
        terms.append(z**k / (k + a) ** s)
        k += 1
        if k % 64 == 0 and z**k / ((k + a) ** s * (1 - z)) < rel * abs(math.fsum(terms)):
            return math.fsum(terms)


@pytest.mark.parametrize("z, s, a, expected", [
    (0.0, 2, 2, 0.25),
    (1.0, 2, 1, math.pi**2 / 6),
    (0.5, 1, 1, 2 * math.log(2)),
    (0.3, 2, 0.7, LERCH_03_2_07),
])
def test_lerch_examples(z, s, a, expected):
    assert lerch_phi(z, s, a) == pytest.approx(expected, rel=1e-10)


def test_lerch_rejects_harmonic_series():
    with pytest.raises(DomainError):
        lerch_phi(1, 1, 0.5)


@pytest.mark.parametrize("a", [0.0, 1e-8, -1 + 1e-8, -3.0])
def test_lerch_pole_proximity(a):
    with pytest.raises(PoleProximity):
        lerch_phi(0.5, 2, a)


@pytest.mark.parametrize("z, s, a", [(1.0, 2, -0.5), (1.2, 2, 1), (-0.1, 2, 1), (0.5, 0.5, 1),
                                     (0.5, 1.5, -0.5)])
def test_lerch_domain(z, s, a):
    with pytest.raises(DomainError):
        lerch_phi(z, s, a)


def test_lerch_nonconvergence_is_reported():
    with pytest.raises(NonConvergence):
        lerch_phi(0.9, 1, 1, SeriesConfig(max_terms=10))
    with pytest.raises(NonConvergence):
        lerch_phi(0.9999, 1, 1, SeriesConfig(max_terms=10))


@pytest.mark.parametrize("kwargs", [dict(rel_tol=0), dict(rel_tol=1), dict(max_terms=0),
                                    dict(pole_guard=0)])
def test_series_config_invariants(kwargs):
    with pytest.raises(DomainError):
        SeriesConfig(**kwargs)


def test_lerch_cross_check_random():
    rng = np.random.default_rng(20240611)
    for z, s, a in zip(rng.uniform(0, 0.95, 100), rng.uniform(1, 3, 100), rng.uniform(0.2, 5, 100)):
        assert lerch_phi(z, s, a) == pytest.approx(brute_lerch(z, s, a), rel=1e-10)


@pytest.mark.parametrize("z", [0.99, 0.999, 0.9995])
@pytest.mark.parametrize("s, a", [(1, 0.3), (2, 1.5), (2.5, 0.8), (1, -0.4), (2, -1.6)])
def test_lerch_accelerated_tail_near_one(z, s, a):
    assert lerch_phi(z, s, a) == pytest.approx(brute_lerch(z, s, a), rel=1e-10)


@pytest.mark.parametrize("s", [1.5, 2, 3, 4.2])
@pytest.mark.parametrize("a", [0.3, 1, 2.7])
def test_lerch_hurwitz_case_matches_scipy_zeta(s, a):
    assert lerch_phi(1.0, s, a) == pytest.approx(special.zeta(s, a), rel=1e-10)


def test_j_kernel_zero_gap_coefficient():
    assert j_kernel(0, Y99) == pytest.approx(0.126, abs=0.002)


def test_j_kernel_asymmetry_example():
    assert j_kernel(0.5, 2.0) - j_kernel(-0.5, 2.0) == pytest.approx(0.125, rel=1e-12)


def test_j_kernel_derived_values():
    assert j_kernel(1.0, 2.0) == pytest.approx(J_PLUS_1_2, rel=1e-10)
    assert j_kernel(-1.0, 2.0) == pytest.approx(J_MINUS_1_2, rel=1e-10)


def test_j_kernel_accurate_next_to_removable_poles():
    assert j_kernel(-0.3, 2 * math.pi - 1e-5) == pytest.approx(J_NEAR_2PI, rel=1e-10)
    assert j_kernel(0.3, 4 * math.pi + 1e-4) == pytest.approx(J_NEAR_4PI, rel=1e-10)
    # continuous across the guarded point
    left, right = j_kernel(0, 2 * math.pi - 1e-5), j_kernel(0, 2 * math.pi + 1e-5)
    assert left == pytest.approx(right, rel=1e-5)


@pytest.mark.parametrize("y", [2 * math.pi, 2 * math.pi + 5e-7, 4 * math.pi - 1e-7])
def test_j_kernel_refuses_within_pole_guard(y):
    with pytest.raises(PoleProximity):
        j_kernel(-0.2, y)


@pytest.mark.parametrize("y", [0.0, -1.0, math.nan])
def test_j_kernel_domain(y):
    with pytest.raises(DomainError):
        j_kernel(0.1, y)


def test_kernel_args_validate():
    KernelArgs(-0.5, 2.0).validate()
    with pytest.raises(PoleProximity):
        KernelArgs(0.0, 2 * math.pi).validate()


def test_heaviside_convention_at_zero():
    # theta(0) = 0, and the |x| prefactor makes the branch value-irrelevant
    assert j_kernel(0.0, 2.0) == j_kernel(-0.0, 2.0)
    assert j_kernel(1e-12, 2.0) == pytest.approx(j_kernel(0.0, 2.0), rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(a=st.floats(1e-6, 3.0), y=st.floats(0.1, 6.0))
def test_asymmetry_identity(a, y):
    diff = j_kernel(a, y) - j_kernel(-a, y)
    assert diff == pytest.approx(a * y / 8, rel=1e-9)


YS = np.concatenate([np.linspace(0.05, 6.2, 40), [6.26, 2 * math.pi - 1e-4]])
AS = np.linspace(0, 3, 61)


def test_excitation_kernel_positive_and_decaying():
    for y in YS:
        vals = np.array([j_kernel(-a, y) for a in AS])
        assert (vals > 0).all(), y
        assert (np.diff(vals) <= 0).all(), y
