"""Independent reference computations used to freeze expected values."""

import numpy as np


def rk4_simulate(A, B, C, u_seq, h, dt=1e-5):
    """Integrate x' = Ax + Bu with fine-step RK4, u held constant over each
    period ``h``. Returns y sampled at the end of every period."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(B, dtype=float).reshape(-1)
    c = np.asarray(C, dtype=float).reshape(-1)
    n_sub = int(round(h / dt))
    x = np.zeros(A.shape[0])
    ys = []
    for u in u_seq:
        bu = b * u
        for _ in range(n_sub):
            k1 = A @ x + bu
            k2 = A @ (x + 0.5 * dt * k1) + bu
            k3 = A @ (x + 0.5 * dt * k2) + bu
            k4 = A @ (x + dt * k3) + bu
            x = x + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        ys.append(c @ x)
    return np.array(ys)


def pid_reference(kp, ki, kd, h, errors):
    """Closed-form PID outputs for a recorded error sequence, summing the
    trapezoid integral directly instead of recursively."""
    out = []
    prev = 0.0
    for n, e in enumerate(errors):
        pairs = [(errors[i] + (errors[i - 1] if i else 0.0)) / 2 for i in range(n + 1)]
        integral = ki * h * sum(pairs)
        out.append(kp * e + integral + kd * (e - prev) / h)
        prev = e
    return out
