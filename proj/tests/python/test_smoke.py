import math

import pytest

import inbl


def test_signals_are_exact():
    ref = inbl.ReferenceSystem(32, 7)
    g = inbl.product_string_sample(ref, 2, 1)
    assert abs(g.numerator) == 2
    assert g.scale == 32
    assert g.magnitude_exponent() == 31
    assert abs(float(g)) == 2.0**-31

    u = inbl.universe_sample(ref, 5)
    assert u.numerator % 2 == 1
    assert abs(u.numerator) <= 3**32
    assert inbl.log_distort(inbl.DyadicSample(3**32, 32), 32) == pytest.approx(32 * math.log(3))


def test_big_numerators_cross_the_boundary():
    ref = inbl.ReferenceSystem(64, 1)
    u = inbl.universe_sample(ref, 3)
    assert isinstance(u.numerator, int)
    assert u == inbl.DyadicSample(u.numerator, 64)
    assert (u - u).is_zero()


def test_universe_matches_oracle():
    ref = inbl.ReferenceSystem(6, 3)
    for t in range(20):
        assert inbl.universe_sample(ref, t) == inbl.universe_sum_oracle(ref, t)
    with pytest.raises(inbl.ArgumentError):
        inbl.universe_sum_oracle(inbl.ReferenceSystem(17, 0), 0)


def test_op_counter():
    ops = inbl.OpCounter()
    inbl.universe_sample(inbl.ReferenceSystem(32, 0), 1, ops)
    assert ops.arithmetic() == 63
    assert inbl.op_count_report(64).universe_ops() == 127


def test_single_draw_protocol():
    ref = inbl.ReferenceSystem(3, 9)
    hat1, hat2 = inbl.setup_hats(ref)
    hat2 = inbl.draw_number(hat2, 5)
    d = inbl.decide_single_draw(ref, hat1, hat2)
    assert d.deficient_hat == inbl.HatId.Hat2
    assert d.clocks_used == 1
    assert d.witness.magnitude_exponent() == 1

    with pytest.raises(inbl.ProtocolError):
        inbl.decide_single_draw(ref, hat1, hat1)
    with pytest.raises(inbl.ProtocolError):
        hat2.draw(5)


def test_callable_streams():
    ref = inbl.ReferenceSystem(8, 4)
    hat1 = inbl.HatState(ref).draw(200)
    full = inbl.HatState(ref)
    d = inbl.decide_single_draw(ref, lambda t: hat1.sample(t), lambda t: full.sample(t))
    assert d.deficient_hat == inbl.HatId.Hat1


def test_double_draw_protocol():
    ref = inbl.ReferenceSystem(32, 11)
    hat1, hat2 = inbl.setup_hats(ref)
    out = inbl.decide_double_draw(ref, 3, 1, hat1.draw(1), hat2.draw(3))
    assert isinstance(out, inbl.DoubleDecision)
    assert (out.hat1_missing, out.hat2_missing, out.clocks_used) == (1, 3, 1)
    with pytest.raises(inbl.ArgumentError):
        inbl.decide_double_draw(ref, 3, 3, hat1, hat2)


def test_experiments():
    stats = inbl.run_single_trials(32, 200, base_seed=1)
    assert stats.correct == 200
    assert stats.clocks_used == {1: 200}

    h = inbl.decision_time_histogram(32, 2, 1, 5000, base_seed=2)
    assert sum(h.buckets.values()) + h.undecided_count == 5000
    assert h.incorrect_count == 0
    assert abs(h.mean() - 2.0) < 0.1

    assert inbl.match_probability(32, 3, 1, 1, 100).guarded
    assert inbl.oracle_equivalence(4, 20, 0, [7]).passed
