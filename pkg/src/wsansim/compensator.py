"""Actuator-side command prediction for lost sensor packets.

When a sensor packet is missing, the actuator estimates the command from
its own recent output history with a PID-shaped recursion::

    u_hat(k) = kp_t * u(k-1)
             + ki_t * mean(u(k-m) .. u(k-1))
             + kd_t * (u(k-1) - u(k-2))

Whatever command is applied, computed or predicted, goes back into the
history, which always holds exactly ``m`` values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .pid import PidParams, PidState, pid_step


@dataclass(frozen=True)
class PredictorParams:
    kp_t: float = 0.3
    ki_t: float = 0.2
    kd_t: float = 0.5
    m: int = 3

    def __post_init__(self):
        if isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 2:
            raise ValueError(f"predictor window m must be an integer >= 2, got {self.m!r}")
        for name in ("kp_t", "ki_t", "kd_t"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"predictor gain {name} must be finite")


@dataclass(frozen=True)
class CommandHistory:
    """Last ``m`` applied commands, oldest first."""

    buf: tuple[float, ...]

    @classmethod
    def zeros(cls, m: int) -> "CommandHistory":
        return cls(buf=(0.0,) * m)

    def __len__(self) -> int:
        return len(self.buf)


def predict_command(params: PredictorParams, hist: CommandHistory) -> float:
    if len(hist) != params.m:
        raise ValueError(f"history holds {len(hist)} commands, predictor expects m={params.m}")
    u1 = hist.buf[-1]
    u2 = hist.buf[-2]
    mean = math.fsum(hist.buf) / params.m
    return params.kp_t * u1 + params.ki_t * mean + params.kd_t * (u1 - u2)


def push_command(hist: CommandHistory, u: float) -> CommandHistory:
    if not math.isfinite(u):
        raise ValueError(f"cannot store non-finite command {u}")
    return CommandHistory(buf=hist.buf[1:] + (float(u),))


def actuator_step(
    pid: PidParams,
    pstate: PidState,
    pred: PredictorParams,
    hist: CommandHistory,
    delivered: bool,
    r: float,
    y_opt: float | None,
) -> tuple[float, bool, PidState, CommandHistory]:
    """Actuator work-flow for one sampling period.

    Returns ``(u_applied, predicted, pid_state, history)``. On loss the PID
    state is left untouched; the controller never saw this sample.
    """
    if delivered:
        if y_opt is None:
            raise ValueError("delivered packet must carry a measurement")
        u, pstate = pid_step(pid, pstate, r, y_opt)
        predicted = False
    else:
        if y_opt is not None:
            raise ValueError("lost packet cannot carry a measurement")
        u = predict_command(pred, hist)
        predicted = True
    return u, predicted, pstate, push_command(hist, u)
