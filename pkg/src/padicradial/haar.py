"""Exact Haar-measure integrals over balls and spheres in Q_p.

Everything here rests on the stratification of Q_p into spheres
S_k = {|x|_p = p^k}: an integrand that depends only on |x|_p is constant
on each stratum, so ball and sphere integrals collapse to geometric
series in p^k.  Measure conventions: the ball B_n = {|x|_p <= p^n} has
measure p^n and the sphere S_n has measure (1 - 1/p) p^n.

For a fixed point a with |a|_p = p^n, the sphere S_n further splits by
the distance |x - a|_p into strata {x in S_n : |x - a|_p = p^j} of
measure (1 - 1/p) p^j for j < n and p^n (1 - 2/p) for j = n (empty when
p = 2).  These stratum masses sum to the sphere volume and drive the
shifted integrals below.

Each closed form has a truncated-series oracle (suffix ``_oracle``) that
sums the strata directly, with default depth 200.  The neglected part of
every oracle is a geometric tail: after T strata the remainder is at
most ``first_neglected_term / (1 - p**(-rate))`` for the stated decay
rate, which is below 1e-60 at the default depth for every admissible
argument; the oracles therefore serve as independent cross-checks for
the closed forms at full double precision.
"""

from __future__ import annotations

import math

from .errors import DivergenceError, DomainError, MagnitudeError

# |exponent * ln p| above this would leave the double range; hard error
# rather than a silent inf/0.
OVERFLOW_GUARD = 700.0

DEFAULT_DEPTH = 200


class Prime(int):
    """A verified prime base; behaves as a plain ``int`` everywhere else."""

    def __new__(cls, value):
        value = int(value)
        if value < 2:
            raise DomainError(f"prime base must be >= 2, got {value}")
        d = 2
        while d * d <= value:
            if value % d == 0:
                raise DomainError(f"base must be prime, got {value} = {d} * {value // d}")
            d += 1
        return super().__new__(cls, value)


def p_pow(base: float, exponent: float) -> float:
    """``base**exponent`` for positive base, guarded against overflow.

    Exceeding the guard upward is a hard error rather than an infinity.
    Underflow (exponent * ln base far below -700) is benign and rounds to
    subnormals or zero, so deep strata of the series oracles vanish
    instead of erroring out.
    """
    t = exponent * math.log(base)
    if t > OVERFLOW_GUARD:
        raise MagnitudeError(
            f"power {base}**{exponent} exceeds the overflow guard "
            f"(exponent * ln base = {t:.1f} > {OVERFLOW_GUARD})"
        )
    if t < -745.0:
        return 0.0
    return math.exp(t)


def haar_volume(p: int, n: int, region: str = "ball") -> float:
    """Measure of the ball B_n (``p^n``) or the sphere S_n (``(1-1/p) p^n``)."""
    p = Prime(p)
    if region == "ball":
        return p_pow(p, n)
    if region == "sphere":
        return (1.0 - 1.0 / p) * p_pow(p, n)
    raise DomainError(f"region must be 'ball' or 'sphere', got {region!r}")


def ball_power_integral(p: int, a: float, n: int) -> float:
    """Integral of |x|_p^(a-1) over the ball B_n.

    Equals (1 - 1/p) / (1 - p^-a) * p^(a n); the sphere strata contribute
    the geometric series sum_{k<=n} (1 - 1/p) p^(a k), which converges
    exactly when a > 0.
    """
    p = Prime(p)
    if a <= 0:
        raise DivergenceError(
            f"ball power integral diverges: requires exponent a > 0, got a = {a}"
        )
    return (1.0 - 1.0 / p) / (1.0 - p_pow(p, -a)) * p_pow(p, a * n)


def ball_power_integral_oracle(p: int, a: float, n: int, depth: int = DEFAULT_DEPTH) -> float:
    """Truncated stratum sum for :func:`ball_power_integral` (``depth + 1`` spheres)."""
    p = Prime(p)
    if a <= 0:
        raise DivergenceError(
            f"ball power integral diverges: requires exponent a > 0, got a = {a}"
        )
    frac = 1.0 - 1.0 / p
    return sum(frac * p_pow(p, a * k) for k in range(n - depth, n + 1))


def sphere_power_integral(p: int, a: float, n: int) -> float:
    """Integral of |x|_p^(a-1) over the sphere S_n: ``(1 - 1/p) p^(a n)``."""
    p = Prime(p)
    return (1.0 - 1.0 / p) * p_pow(p, a * n)


def sphere_shifted_power_integral(p: int, a: float, n: int) -> float:
    """Integral of |x - a0|_p^(a-1) over S_n, for a shift with |a0|_p = p^n.

    The distance strata give sum_{j<n} (1-1/p) p^j p^((a-1)j) plus the
    equal-distance stratum p^n (1-2/p) p^((a-1)n); in closed form
    (p - 2 + p^-a) / (p (1 - p^-a)) * p^(a n), finite exactly when a > 0.
    """
    p = Prime(p)
    if a <= 0:
        raise DivergenceError(
            f"shifted sphere power integral diverges: requires exponent a > 0, got a = {a}"
        )
    return (p - 2.0 + p_pow(p, -a)) / (p * (1.0 - p_pow(p, -a))) * p_pow(p, a * n)


def sphere_shifted_power_integral_oracle(
    p: int, a: float, n: int, depth: int = DEFAULT_DEPTH
) -> float:
    """Truncated distance-stratum sum for :func:`sphere_shifted_power_integral`."""
    p = Prime(p)
    if a <= 0:
        raise DivergenceError(
            f"shifted sphere power integral diverges: requires exponent a > 0, got a = {a}"
        )
    frac = 1.0 - 1.0 / p
    total = sum(frac * p_pow(p, a * j) for j in range(n - depth, n))
    total += p_pow(p, n) * (1.0 - 2.0 / p) * p_pow(p, (a - 1.0) * n)
    return total


def ball_log_integral(p: int, n: int) -> float:
    """Integral of log |x|_p over the ball B_n: ``(n - 1/(p-1)) p^n ln p``."""
    p = Prime(p)
    return (n - 1.0 / (p - 1.0)) * p_pow(p, n) * math.log(p)


def ball_log_integral_oracle(p: int, n: int, depth: int = DEFAULT_DEPTH) -> float:
    """Truncated stratum sum for :func:`ball_log_integral`."""
    p = Prime(p)
    frac = 1.0 - 1.0 / p
    lp = math.log(p)
    return sum(frac * p_pow(p, k) * k * lp for k in range(n - depth, n + 1))


def sphere_log_integral(p: int, n: int) -> float:
    """Integral of log |x|_p over the sphere S_n: ``n ln p (1 - 1/p) p^n``."""
    p = Prime(p)
    return n * math.log(p) * (1.0 - 1.0 / p) * p_pow(p, n)


def sphere_shifted_log_integral(p: int, n: int) -> float:
    """Integral of log |x - a0|_p over S_n, for a shift with |a0|_p = p^n.

    Stratum-wise summation gives p^n [(1 - 1/p) n ln p - ln p / (p - 1)].
    A variant of this formula without the leading p^n factor circulates in
    the literature; it cannot be reconciled with the stratum decomposition
    for n != 0 (the sphere measure scales like p^n, and the integral must
    scale with it), so the scaled form is used here.
    """
    p = Prime(p)
    lp = math.log(p)
    return p_pow(p, n) * ((1.0 - 1.0 / p) * n * lp - lp / (p - 1.0))


def sphere_shifted_log_integral_oracle(p: int, n: int, depth: int = DEFAULT_DEPTH) -> float:
    """Truncated distance-stratum sum for :func:`sphere_shifted_log_integral`."""
    p = Prime(p)
    frac = 1.0 - 1.0 / p
    lp = math.log(p)
    total = sum(frac * p_pow(p, j) * j * lp for j in range(n - depth, n))
    total += p_pow(p, n) * (1.0 - 2.0 / p) * n * lp
    return total
