import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wsansim.compensator import (
    CommandHistory,
    PredictorParams,
    actuator_step,
    predict_command,
    push_command,
)
from wsansim.pid import PidParams, pid_reset, pid_step

PRED = PredictorParams(0.3, 0.2, 0.5, 3)
PID = PidParams(120.0, 1000.0, 5.0, 0.02)


def hist(*vals):
    return CommandHistory(tuple(float(v) for v in vals))


def test_zero_history_predicts_zero():
    assert predict_command(PRED, CommandHistory.zeros(3)) == 0.0
    assert predict_command(PredictorParams(7.0, -3.0, 11.0, 5), CommandHistory.zeros(5)) == 0.0


def test_constant_history():
    assert abs(predict_command(PRED, hist(2, 2, 2)) - 1.0) <= 1e-12


def test_hand_evaluated_history():
    # 0.3*9 + 0.2*(3+6+9)/3 + 0.5*(9-6)
    assert abs(predict_command(PRED, hist(3, 6, 9)) - 5.4) <= 1e-12


def test_history_length_must_match_m():
    with pytest.raises(ValueError):
        predict_command(PRED, hist(1, 2))


@pytest.mark.parametrize("m", [0, 1, 2.5, True])
def test_window_must_be_integer_at_least_two(m):
    with pytest.raises(ValueError):
        PredictorParams(0.3, 0.2, 0.5, m)


def test_push_fifo():
    assert push_command(CommandHistory.zeros(3), 5).buf == (0.0, 0.0, 5.0)
    assert push_command(hist(3, 6, 9), 12).buf == (6.0, 9.0, 12.0)
    h = CommandHistory.zeros(4)
    for v in (1, 2, 3, 4):
        h = push_command(h, v)
    assert h.buf == (1.0, 2.0, 3.0, 4.0)


@pytest.mark.parametrize("u", [math.nan, math.inf])
def test_push_rejects_non_finite(u):
    with pytest.raises(ValueError):
        push_command(CommandHistory.zeros(3), u)


def test_actuator_delivered_zero_error():
    u, predicted, ps, h = actuator_step(PID, pid_reset(), PRED, CommandHistory.zeros(3), True, 1.0, 1.0)
    assert u == 0.0 and predicted is False
    assert h.buf == (0.0, 0.0, 0.0)


def test_actuator_lost_zero_history():
    ps0 = pid_reset()
    u, predicted, ps, h = actuator_step(PID, ps0, PRED, CommandHistory.zeros(3), False, 1.0, None)
    assert u == 0.0 and predicted is True
    assert ps == ps0


def test_actuator_lost_predicts_and_pushes():
    u, predicted, ps, h = actuator_step(PID, pid_reset(), PRED, hist(3, 6, 9), False, 1.0, None)
    assert abs(u - 5.4) <= 1e-12 and predicted
    assert h.buf[:2] == (6.0, 9.0) and abs(h.buf[2] - 5.4) <= 1e-12


def test_actuator_delivered_requires_measurement():
    with pytest.raises(ValueError):
        actuator_step(PID, pid_reset(), PRED, CommandHistory.zeros(3), True, 1.0, None)


reals = st.floats(-1e4, 1e4, allow_nan=False)


@given(st.lists(reals, min_size=3, max_size=3), reals, reals)
def test_delivered_equals_pid_then_push(vals, r, y):
    h0 = hist(*vals)
    ps0 = pid_reset()
    u, predicted, ps, h = actuator_step(PID, ps0, PRED, h0, True, r, y)
    u_ref, ps_ref = pid_step(PID, ps0, r, y)
    assert u == u_ref and ps == ps_ref and not predicted
    assert h == push_command(h0, u_ref)


@given(st.lists(reals, min_size=3, max_size=3), st.floats(-100, 100))
def test_homogeneity(vals, alpha):
    base = predict_command(PRED, hist(*vals))
    scaled = predict_command(PRED, hist(*(alpha * v for v in vals)))
    assert scaled == pytest.approx(alpha * base, rel=1e-9, abs=1e-6)


@given(st.lists(reals, min_size=3, max_size=3), st.lists(reals, min_size=3, max_size=3))
def test_additivity(a, b):
    lhs = predict_command(PRED, hist(*(x + y for x, y in zip(a, b))))
    rhs = predict_command(PRED, hist(*a)) + predict_command(PRED, hist(*b))
    assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-8)


def test_total_loss_from_rest_stays_at_zero():
    h = CommandHistory.zeros(3)
    ps = pid_reset()
    for _ in range(500):
        u, _, ps, h = actuator_step(PID, ps, PRED, h, False, 1.0, None)
        assert u == 0.0


def test_history_storage_is_bounded():
    h = CommandHistory.zeros(3)
    for k in range(1000):
        h = push_command(h, float(k))
    assert len(h) == 3
    assert h.buf == (997.0, 998.0, 999.0)
