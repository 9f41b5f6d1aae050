"""Arbitrary-precision reference values frozen into the test-suite.

Each Lerch sum is a plain partial sum at 50 digits, continued until the
geometric tail bound z**N / ((N + a)**s (1 - z)) drops below 1e-40, so the
printed values are enclosed in [partial, partial + bound].  Run once:

    python scripts/derive_oracles.py
"""
from mpmath import mp, mpf, exp, pi, sin, atanh

mp.dps = 50
TAIL = mpf("1e-40")


def lerch_partial(z, s, a):
    z, s, a = mpf(z), mpf(s), mpf(a)
    total, k = mpf(0), 0
    while True:
        total += z**k / (k + a) ** s
        k += 1
        if k + a > 0 and z**k / ((k + a) ** s * (1 - z)) < TAIL:
            return total


def J(x, y):
    x, y = mpf(x), mpf(y)
    ax = abs(x)
    z = exp(-2 * pi * ax)
    b = y / (2 * pi)
    val = (y / 2) ** 2 * exp(-ax * y) / (16 * sin(y / 2) ** 2)
    if x > 0:
        val += ax * y / 8
    val += y**2 * z / (64 * pi**2) * (lerch_partial(z, 2, 1 + b) - lerch_partial(z, 2, 1 - b))
    val += ax * y**2 * z / (32 * pi) * (lerch_partial(z, 1, 1 + b) - lerch_partial(z, 1, 1 - b))
    return val


def cal_P(a_H, a_C, v):
    r = atanh(mpf(v))
    return 4 * (J(-mpf(a_H), 2 * r) + J(-mpf(a_C), 2 * r)) / ((mpf(a_H) + mpf(a_C)) * r)


if __name__ == "__main__":
    print("lerch_phi(0.3, 2, 0.7) =", mp.nstr(lerch_partial("0.3", 2, "0.7"), 20))
    print("J(1, 2)                =", mp.nstr(J(1, 2), 20))
    print("J(-1, 2)               =", mp.nstr(J(-1, 2), 20))
    print("cal_P(0.3, 0.5, 0.9)   =", mp.nstr(cal_P("0.3", "0.5", "0.9"), 20))
    # next to the removable singularities at y = 2 pi m
    print("J(-0.3, 2pi - 1e-5)    =", mp.nstr(J("-0.3", 2 * pi - mpf("1e-5")), 20))
    print("J(0.3, 4pi + 1e-4)     =", mp.nstr(J("0.3", 4 * pi + mpf("1e-4")), 20))
