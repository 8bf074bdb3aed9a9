import pytest
from hypothesis import given, settings, strategies as st

from padicradial.errors import DivergenceError
from padicradial.haar import ball_power_integral
from padicradial.radial import RadialFunction, TailModel
from padicradial.vladimirov import DalphaCoefficients, apply_dalpha, apply_dalpha_oracle

PRIMES = (2, 3, 5)
ALPHAS = (0.5, 1.0, 2.0)


def family(p):
    """Indicator, shifted indicator, and mixed power-law tails."""
    return [
        RadialFunction.indicator_unit_ball(p),
        RadialFunction(p, 0, 0, (1.5,), TailModel.constant(1.5),
                       TailModel.constant(2.5), 1.5),
        RadialFunction.split_power(p, 0.0, -0.5),
        RadialFunction.split_power(p, 0.5, -1.0),
    ]


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("alpha", ALPHAS)
def test_coefficient_signs(p, alpha):
    coeffs = DalphaCoefficients.create(p, alpha)
    assert coeffs.d_alpha < 0
    assert coeffs.diag_coef > 0


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("n", (-6, -1, 0, 3))
def test_constants_annihilated(p, alpha, n):
    u = RadialFunction.constant(p, 7.3)
    assert apply_dalpha(u, alpha, n) == 0.0
    assert apply_dalpha_oracle(u, alpha, n, depth=50) == 0.0


def test_indicator_spot_values():
    omega = RadialFunction.indicator_unit_ball(2)
    # closed form d_alpha p^(-(alpha+1) n) at n = 1
    assert apply_dalpha(omega, 1.0, 1) == pytest.approx(-1.0 / 3.0, rel=1e-13)
    assert apply_dalpha_oracle(omega, 1.0, 1, depth=100) == pytest.approx(-1.0 / 3.0, rel=1e-12)
    # cross-check against the transform-side value at n = 0:
    # integral of |xi|_p over the unit ball
    want = ball_power_integral(2, 2.0, 0)
    assert apply_dalpha(omega, 1.0, 0) == pytest.approx(want, rel=1e-13)
    assert want == pytest.approx(2.0 / 3.0, rel=1e-13)


def test_oracle_spot_p3():
    omega = RadialFunction.indicator_unit_ball(3)
    a = apply_dalpha(omega, 0.5, 2)
    b = apply_dalpha_oracle(omega, 0.5, 2, depth=100)
    assert abs(a - b) <= 1e-12 * (1 + abs(a))


@pytest.mark.parametrize("p", PRIMES)
@pytest.mark.parametrize("alpha", ALPHAS)
def test_oracle_equivalence_family(p, alpha):
    for u in family(p):
        for n in range(-8, 9):
            a = apply_dalpha(u, alpha, n)
            b = apply_dalpha_oracle(u, alpha, n, depth=200)
            assert abs(a - b) <= 1e-10 * (1 + abs(a)), (u, n)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_linearity(alpha):
    # functions sharing tail exponents combine into a representable function
    p = 2
    tails = dict(left_tail=TailModel.power_law(1.0, 0.5),
                 right_tail=TailModel.power_law(1.0, -1.0))
    u = RadialFunction(p, -1, 1, (0.5, 1.0, 0.25), **tails)
    v = RadialFunction(p, -1, 1, (-1.0, 2.0, 0.5), **tails)
    a, b = 2.0, -0.75
    w = RadialFunction(
        p, -1, 1, tuple(a * x + b * y for x, y in zip(u.values, v.values)),
        left_tail=TailModel.power_law(a + b, 0.5),
        right_tail=TailModel.power_law(a + b, -1.0),
    )
    for n in range(-5, 6):
        want = a * apply_dalpha(u, alpha, n) + b * apply_dalpha(v, alpha, n)
        assert apply_dalpha(w, alpha, n) == pytest.approx(want, rel=1e-12, abs=1e-12)


def test_divergent_right_tail_is_reported():
    alpha = 1.5
    u = RadialFunction(2, 0, 0, (1.0,), right_tail=TailModel.power_law(1.0, alpha + 0.5))
    with pytest.raises(DivergenceError, match="e \\+ rho < 0"):
        apply_dalpha(u, alpha, 0)


def test_divergent_left_tail_is_reported():
    u = RadialFunction(2, 0, 0, (1.0,), left_tail=TailModel.power_law(1.0, -1.5))
    with pytest.raises(DivergenceError, match="e \\+ rho > 0"):
        apply_dalpha(u, 1.0, 0)


def test_oracle_depth_validation():
    u = RadialFunction.indicator_unit_ball(2)
    with pytest.raises(DivergenceError):
        apply_dalpha_oracle(u, 1.0, 0, depth=0)


@settings(max_examples=60, deadline=None)
@given(
    p=st.sampled_from(PRIMES),
    alpha=st.floats(0.3, 2.5),
    n=st.integers(-6, 6),
    c=st.floats(-4.0, 4.0),
)
def test_adding_constants_changes_nothing(p, alpha, n, c):
    base = RadialFunction.indicator_unit_ball(p)
    shifted = RadialFunction(
        p, 0, 0, (1.0 + c,),
        left_tail=TailModel.constant(1.0 + c),
        right_tail=TailModel.constant(c),
        value_at_zero=1.0 + c,
    )
    a = apply_dalpha(base, alpha, n)
    b = apply_dalpha(shifted, alpha, n)
    assert b == pytest.approx(a, rel=1e-11, abs=1e-11)
