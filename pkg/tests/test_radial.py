import dataclasses

import pytest
from hypothesis import given, settings, strategies as st

from padicradial.errors import DivergenceError, DomainError
from padicradial.haar import p_pow
from padicradial.radial import (
    RadialFunction,
    TailModel,
    check_summability,
    dump_radial,
    level_weighted_sum_left,
    level_weighted_sum_right,
    load_radial,
    radial_eval,
    weighted_sum_left,
    weighted_sum_right,
)


def three_values(p=2):
    return RadialFunction(
        p, -1, 1, (1.0, 2.0, 3.0),
        left_tail=TailModel.constant(1.0),
        right_tail=TailModel.power_law(3.0, -1.0),
        value_at_zero=1.0,
    )


def test_eval_window_and_tails():
    u = three_values()
    assert radial_eval(u, 0) == 2.0
    assert radial_eval(u, -5) == 1.0
    assert radial_eval(u, 3) == pytest.approx(3.0 * 2 ** -3, rel=1e-13)


def test_power_tail_with_zero_coefficient_normalizes():
    assert TailModel.power_law(0.0, 2.0).kind == "zero"


def test_tail_token_round_trip():
    for tail in (TailModel.zero(), TailModel.constant(-2.5), TailModel.power_law(1.5, -0.75)):
        assert TailModel.from_token(tail.to_token()) == tail
    with pytest.raises(DomainError):
        TailModel.from_token("power:1")


def test_window_validation():
    with pytest.raises(DomainError):
        RadialFunction(2, 1, 0, (1.0, 2.0))
    with pytest.raises(DomainError):
        RadialFunction(2, 0, 1, (1.0,))
    with pytest.raises(DomainError):
        RadialFunction(2, 0, 0, (float("nan"),))
    with pytest.raises(DomainError):
        RadialFunction(4, 0, 0, (1.0,))


def test_immutable():
    u = three_values()
    with pytest.raises(dataclasses.FrozenInstanceError):
        u.k_min = 0


def test_weighted_sum_left_constant_one():
    u = RadialFunction.constant(2, 1.0)
    assert weighted_sum_left(u, 0, 1.0) == pytest.approx(2.0, rel=1e-13)


def test_weighted_sum_left_divergent_constant():
    u = RadialFunction.constant(2, 1.0)
    with pytest.raises(DivergenceError, match="e > 0"):
        weighted_sum_left(u, 0, 0.0)


def test_weighted_sum_left_indicator():
    u = RadialFunction.indicator_unit_ball(3)
    assert weighted_sum_left(u, 5, 1.0) == pytest.approx(1.5, rel=1e-13)


def test_weighted_sum_right_constant():
    u = RadialFunction.constant(2, 1.0)
    assert weighted_sum_right(u, 1, -1.0) == pytest.approx(1.0, rel=1e-13)
    with pytest.raises(DivergenceError, match="e < 0"):
        weighted_sum_right(u, 1, 0.0)


def test_weighted_sum_right_indicator_vanishes():
    u = RadialFunction.indicator_unit_ball(5)
    assert weighted_sum_right(u, 1, -1.0) == 0.0


def test_zero_tails_reduce_to_finite_sums():
    u = RadialFunction(2, -2, 2, (1.0, -2.0, 0.5, 4.0, -1.0))
    for e in (-1.5, 0.0, 2.0):
        want_left = sum(p_pow(2, e * k) * u.value_at(k) for k in range(-2, 2))
        assert weighted_sum_left(u, 1, e) == pytest.approx(want_left, rel=1e-13)
        want_right = sum(p_pow(2, e * k) * u.value_at(k) for k in range(-1, 3))
        assert weighted_sum_right(u, -1, e) == pytest.approx(want_right, rel=1e-13)


def test_level_weighted_sums():
    u = RadialFunction.constant(2, 1.0)
    # sum_{k<=0} k 2^k = -2; sum_{l>=1} l 2^(-l) = 2
    assert level_weighted_sum_left(u, 0, 1.0) == pytest.approx(-2.0, rel=1e-12)
    assert level_weighted_sum_right(u, 1, -1.0) == pytest.approx(2.0, rel=1e-12)


@settings(max_examples=80, deadline=None)
@given(
    p=st.sampled_from((2, 3, 5)),
    e=st.floats(0.2, 2.5),
    m=st.integers(-6, 6),
    values=st.lists(st.floats(-5, 5), min_size=3, max_size=3),
)
def test_left_sum_telescopes(p, e, m, values):
    u = RadialFunction(p, -1, 1, tuple(values),
                       left_tail=TailModel.constant(values[0]),
                       right_tail=TailModel.power_law(values[-1], -1.0),
                       value_at_zero=values[0])
    total = weighted_sum_left(u, m, e) + p_pow(p, e * (m + 1)) * u.value_at(m + 1)
    target = weighted_sum_left(u, m + 1, e)
    assert total == pytest.approx(target, rel=1e-12, abs=1e-12)


def test_summability_constant_one():
    rep = check_summability(RadialFunction.constant(2, 1.0), 0.5, 0)
    assert rep.cond_3_1.holds and rep.cond_3_1.bound == pytest.approx(2.0, rel=1e-12)
    assert rep.cond_3_1_prime.holds
    assert rep.cond_2_7 is not None and rep.cond_2_7.holds
    assert rep.cond_2_8 is None and rep.cond_3_3 is None
    assert not rep.cond_3_2.holds  # sum over l >= m of a constant diverges


def test_summability_indicator_alpha2():
    rep = check_summability(RadialFunction.indicator_unit_ball(3), 2.0, 0)
    assert rep.all_applicable_hold()


def test_summability_boundary_power_tail():
    alpha = 1.5
    u = RadialFunction(2, 0, 0, (1.0,),
                       left_tail=TailModel.constant(1.0),
                       right_tail=TailModel.power_law(1.0, alpha))
    rep = check_summability(u, alpha, 0)
    assert not rep.cond_3_1_prime.holds


def test_summability_alpha_one_populates_log_conditions():
    rep = check_summability(RadialFunction.indicator_unit_ball(2), 1.0, 0)
    assert rep.cond_2_7 is None and rep.cond_3_2 is None
    assert rep.cond_2_8.holds and rep.cond_3_3.holds


@settings(max_examples=40, deadline=None)
@given(rho=st.floats(-3.0, -0.05), shrink=st.floats(0.01, 0.9))
def test_summability_monotone_toward_boundary(rho, shrink):
    # moving a convergent right-tail exponent toward the boundary never
    # turns a failing condition into a passing one
    alpha = 1.5

    def holds(r):
        u = RadialFunction(2, 0, 0, (1.0,), right_tail=TailModel.power_law(1.0, r))
        rep = check_summability(u, alpha, 0)
        return (rep.cond_3_1_prime.holds, rep.cond_3_2.holds)

    near = tuple(rho * shrink for _ in range(1))[0]
    far = holds(rho)
    close = holds(near)
    for got_far, got_close in zip(far, close):
        if got_close:
            assert got_far


def test_serialization_round_trip():
    u = three_values()
    text = dump_radial(u)
    v = load_radial(text)
    assert v == u


def test_load_errors_are_line_addressed():
    with pytest.raises(DomainError, match="line 1"):
        load_radial("2 0 0 1.0 zero\n0 1\n")
    with pytest.raises(DomainError, match="line 2"):
        load_radial("2 0 0 1.0 zero zero\n0 one\n")
    with pytest.raises(DomainError, match="missing"):
        load_radial("2 0 1 1.0 zero zero\n0 1\n")
