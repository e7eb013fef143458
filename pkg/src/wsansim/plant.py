"""SISO LTI plant: transfer function, canonical realization, exact ZOH discretization."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm


def _trim_leading_zeros(coeffs):
    coeffs = [float(c) for c in coeffs]
    while len(coeffs) > 1 and coeffs[0] == 0.0:
        coeffs.pop(0)
    return coeffs


@dataclass(frozen=True)
class ContinuousTransferFunction:
    """G(s) = num(s) / den(s), coefficients highest degree first.

    The denominator is normalized to monic on construction.
    """

    num: tuple[float, ...]
    den: tuple[float, ...]

    def __post_init__(self):
        if len(self.den) == 0:
            raise ValueError("denominator must be non-empty")
        num = _trim_leading_zeros(self.num) if len(self.num) else [0.0]
        den = _trim_leading_zeros(self.den)
        if not all(np.isfinite(num)) or not all(np.isfinite(den)):
            raise ValueError("transfer function coefficients must be finite")
        if den[0] == 0.0:
            raise ValueError("denominator leading coefficient must be nonzero")
        if len(num) >= len(den) and any(num):
            raise ValueError(
                f"improper transfer function: degree(num)={len(num) - 1} "
                f">= degree(den)={len(den) - 1}"
            )
        lead = den[0]
        object.__setattr__(self, "num", tuple(c / lead for c in num))
        object.__setattr__(self, "den", tuple(c / lead for c in den))

    @property
    def order(self) -> int:
        return len(self.den) - 1

    def evaluate(self, s: complex) -> complex:
        return complex(np.polyval(self.num, s) / np.polyval(self.den, s))


@dataclass(frozen=True)
class ContinuousStateSpace:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: float = 0.0

    def __post_init__(self):
        n = self.A.shape[0]
        if n < 1 or self.A.shape != (n, n):
            raise ValueError(f"A must be square with n >= 1, got {self.A.shape}")
        if self.B.shape != (n, 1) or self.C.shape != (1, n):
            raise ValueError(
                f"inconsistent dimensions: A {self.A.shape}, B {self.B.shape}, C {self.C.shape}"
            )

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def frequency_response(self, s: complex) -> complex:
        n = self.n
        x = np.linalg.solve(s * np.eye(n) - self.A, self.B)
        return complex((self.C @ x)[0, 0] + self.D)


@dataclass(frozen=True)
class DiscretePlant:
    Ad: np.ndarray
    Bd: np.ndarray
    C: np.ndarray
    D: float
    h: float

    @property
    def n(self) -> int:
        return self.Ad.shape[0]


@dataclass(frozen=True)
class PlantState:
    x: np.ndarray = field(repr=False)
    y: float = 0.0


def tf_to_state_space(tf: ContinuousTransferFunction) -> ContinuousStateSpace:
    """Controllable canonical realization of a strictly proper ``tf``.

    For monic den = s^n + a1 s^(n-1) + ... + an, the companion matrix has
    ones on the superdiagonal and bottom row [-an, ..., -a1]; B = e_n and
    C holds the numerator coefficients lowest degree first.
    """
    n = tf.order
    if n < 1:
        raise ValueError("transfer function must have at least one pole")
    den = np.asarray(tf.den)
    num = np.zeros(n)
    num[n - len(tf.num):] = tf.num  # pad to n coefficients, highest degree first

    A = np.zeros((n, n))
    A[:-1, 1:] = np.eye(n - 1)
    A[-1, :] = -den[1:][::-1]
    B = np.zeros((n, 1))
    B[-1, 0] = 1.0
    C = num[::-1].reshape(1, n).copy()
    return ContinuousStateSpace(A=A, B=B, C=C, D=0.0)


def discretize_zoh(css: ContinuousStateSpace, h: float) -> DiscretePlant:
    """Zero-order-hold discretization at period ``h``.

    exp([[A, B], [0, 0]] h) = [[Ad, Bd], [0, 1]]
    """
    if not h > 0 or not np.isfinite(h):
        raise ValueError(f"sampling period must be positive and finite, got {h}")
    if not (np.all(np.isfinite(css.A)) and np.all(np.isfinite(css.B))):
        raise ValueError("state-space matrices contain non-finite entries")
    n = css.n
    M = np.zeros((n + 1, n + 1))
    M[:n, :n] = css.A
    M[:n, n:] = css.B
    E = expm(M * h)
    Ad = E[:n, :n].copy()
    Bd = E[:n, n:].copy()
    if not (np.all(np.isfinite(Ad)) and np.all(np.isfinite(Bd))):
        raise ValueError("discretization produced non-finite entries")
    return DiscretePlant(Ad=Ad, Bd=Bd, C=css.C.copy(), D=float(css.D), h=float(h))


def plant_reset(plant: DiscretePlant) -> PlantState:
    return PlantState(x=np.zeros(plant.n), y=0.0)


def plant_step(plant: DiscretePlant, state: PlantState, u: float) -> PlantState:
    x = np.asarray(state.x)
    if x.shape != (plant.n,):
        raise ValueError(f"state has shape {x.shape}, plant expects ({plant.n},)")
    x_next = plant.Ad @ x + plant.Bd[:, 0] * u
    y_next = float(plant.C[0] @ x_next + plant.D * u)
    return PlantState(x=x_next, y=y_next)


def build_plant(tf: ContinuousTransferFunction, h: float) -> DiscretePlant:
    return discretize_zoh(tf_to_state_space(tf), h)
