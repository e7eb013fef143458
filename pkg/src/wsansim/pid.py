"""Discrete PID law run on the actuator node.

Trapezoidal integral, backward-difference derivative. No filtering,
anti-windup or output clamping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PidParams:
    kp: float
    ki: float
    kd: float
    h: float

    def __post_init__(self):
        if not (self.h > 0 and math.isfinite(self.h)):
            raise ValueError(f"PID sampling period must be positive, got {self.h}")
        for name in ("kp", "ki", "kd"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"PID gain {name} must be finite")


@dataclass(frozen=True)
class PidState:
    e_prev: float = 0.0
    i_prev: float = 0.0


def pid_reset() -> PidState:
    return PidState(0.0, 0.0)


def pid_step(params: PidParams, state: PidState, r: float, y: float) -> tuple[float, PidState]:
    """One controller update. Returns ``(u, new_state)``.

    e = r - y
    P = kp e
    I = I_prev + ki h (e + e_prev) / 2
    D = kd (e - e_prev) / h
    u = P + I + D
    """
    if not (math.isfinite(r) and math.isfinite(y)):
        raise ValueError(f"PID inputs must be finite, got r={r}, y={y}")
    if not (math.isfinite(state.e_prev) and math.isfinite(state.i_prev)):
        raise ValueError(f"PID state is not finite: {state}")
    e = r - y
    p_term = params.kp * e
    i_term = state.i_prev + params.ki * params.h * (e + state.e_prev) / 2.0
    d_term = params.kd * (e - state.e_prev) / params.h
    return p_term + i_term + d_term, PidState(e_prev=e, i_prev=i_term)
