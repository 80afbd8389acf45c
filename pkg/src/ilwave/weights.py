"""Cutoff weights and time-rescaling schedules for the monitored functionals.

Weight variants:

* ``class_ac(C)`` -- smooth ramp weight with even derivative equal to 1 on
  [-C, C], derivative supported in [-C-1, C+1], vanishing at -C-1, and a
  cube-root companion: phi' is exactly the cube of a same-class ramp, built
  that way by construction.
* ``left_step`` -- 1 for s <= -1, 0 for s >= 0, nonincreasing.
* ``tilde`` -- 0 for s <= -3/4, 1 for s >= -1/4, nondecreasing.
* ``corollary_step`` -- 0 for s <= 0, 1 for s >= 1, nondecreasing.

Schedules (defined for t >= 10 only):

* ``thm1(a, C)``      lambda = t**b/log t with b = 1-a, mu = t**a * log^2 t
* ``farfield(eps)``   lambda = mu = t * log^(1+eps) t
* ``corollary(eps)``  lambda = t * log^(1+eps) t, mu = t
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline


def _bump(s):
    out = np.zeros_like(s)
    pos = s > 0
    with np.errstate(divide="ignore", over="ignore", under="ignore"):
        out[pos] = np.exp(-1.0 / s[pos])
    return out


def smooth_step(s):
    """C-infinity transition: 0 for s <= 0, 1 for s >= 1, increasing between."""
    s = np.asarray(s, dtype=float)
    b = _bump(s)
    c = _bump(1.0 - s)
    out = np.where(s >= 1.0, 1.0, 0.0)
    mid = (s > 0.0) & (s < 1.0)
    out[mid] = b[mid] / (b[mid] + c[mid])
    return out


def smooth_step_prime(s):
    """Derivative of smooth_step (compactly supported in (0, 1))."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    mid = (s > 0.0) & (s < 1.0)
    sm = s[mid]
    b = np.exp(-1.0 / sm)
    c = np.exp(-1.0 / (1.0 - sm))
    db = b / (sm * sm)
    dc = c / ((1.0 - sm) ** 2)
    out[mid] = (db * c + b * dc) / (b + c) ** 2
    return out


# cumulative integral of smooth_step(s)**3 on [0, 1]; the ramp is fixed so a
# dense Simpson table + cubic spline reproduces it to ~1e-12
_RAMP_S = np.linspace(0.0, 1.0, 4097)
_RAMP3_CUM = cumulative_simpson(smooth_step(_RAMP_S) ** 3, x=_RAMP_S, initial=0.0)
_RAMP3_SPLINE = CubicSpline(_RAMP_S, _RAMP3_CUM)
RAMP3_AREA = float(_RAMP3_CUM[-1])


def _ramp3_integral(s):
    s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)
    return _RAMP3_SPLINE(s)


class Weight:
    """A cutoff profile with consistent derivatives, evaluated anywhere."""

    def __init__(self, variant: str, capital_c: float | None = None):
        if variant not in ("class_ac", "left_step", "tilde", "corollary_step"):
            raise ValueError(f"unknown weight variant {variant!r}")
        if variant == "class_ac":
            if capital_c is None or capital_c <= 0:
                raise ValueError("class_ac weight needs capital_c > 0")
        self.variant = variant
        self.capital_c = capital_c

    @classmethod
    def class_ac(cls, capital_c: float) -> "Weight":
        return cls("class_ac", float(capital_c))

    @classmethod
    def left_step(cls) -> "Weight":
        return cls("left_step")

    @classmethod
    def tilde(cls) -> "Weight":
        return cls("tilde")

    @classmethod
    def corollary_step(cls) -> "Weight":
        return cls("corollary_step")

    def phi0_prime(self, s):
        """Cube-root companion ramp (class_ac only): even, 1 on [-C, C]."""
        if self.variant != "class_ac":
            raise ValueError("cube-root companion exists for class_ac only")
        c = self.capital_c
        sa = np.abs(np.asarray(s, dtype=float))
        return smooth_step(c + 1.0 - sa)

    def phi_prime(self, s):
        s = np.asarray(s, dtype=float)
        if self.variant == "class_ac":
            return self.phi0_prime(s) ** 3
        if self.variant == "left_step":
            return -smooth_step_prime(s + 1.0)
        if self.variant == "tilde":
            return 2.0 * smooth_step_prime(2.0 * (s + 0.75))
        return smooth_step_prime(s)

    def phi(self, s):
        s = np.asarray(s, dtype=float)
        if self.variant == "class_ac":
            c = self.capital_c
            area = RAMP3_AREA
            out = np.empty_like(s)
            out[s <= -c - 1.0] = 0.0
            rise = (s > -c - 1.0) & (s < -c)
            out[rise] = _ramp3_integral(s[rise] + c + 1.0)
            mid = (s >= -c) & (s <= c)
            out[mid] = area + (s[mid] + c)
            fall = (s > c) & (s < c + 1.0)
            out[fall] = 2.0 * area + 2.0 * c - _ramp3_integral(c + 1.0 - s[fall])
            out[s >= c + 1.0] = 2.0 * area + 2.0 * c
            return out
        if self.variant == "left_step":
            return 1.0 - smooth_step(s + 1.0)
        if self.variant == "tilde":
            return smooth_step(2.0 * (s + 0.75))
        return smooth_step(s)

    def phi_double_prime(self, s):
        """Second derivative; implemented for class_ac (3 psi^2 psi')."""
        if self.variant != "class_ac":
            raise ValueError("phi'' is provided for class_ac weights only")
        c = self.capital_c
        s = np.asarray(s, dtype=float)
        sa = np.abs(s)
        arg = c + 1.0 - sa
        val = 3.0 * smooth_step(arg) ** 2 * smooth_step_prime(arg)
        return -np.sign(s) * val


@dataclass(frozen=True)
class WeightSchedule:
    """Pair (lambda(t), mu(t)) selecting one monitored-functional regime."""

    regime: str
    a: float = 0.0
    capital_c: float = 1.0
    epsilon: float = 0.1

    def __post_init__(self):
        if self.regime not in ("thm1", "farfield", "corollary"):
            raise ValueError(f"unknown schedule regime {self.regime!r}")
        if self.regime == "thm1":
            if not (0.0 <= self.a < 0.5):
                raise ValueError(f"exponent a must lie in [0, 1/2), got {self.a}")
            if self.capital_c <= 0:
                raise ValueError("capital_c must be positive")
        elif self.epsilon <= 0:
            raise ValueError("epsilon must be positive")

    @property
    def b(self) -> float:
        return 1.0 - self.a

    @staticmethod
    def _check_t(t: float) -> float:
        t = float(t)
        if t < 10.0:
            raise ValueError(f"schedules are defined for t >= 10 only, got {t}")
        return t

    def lam(self, t: float) -> float:
        t = self._check_t(t)
        lt = np.log(t)
        if self.regime == "thm1":
            return t**self.b / lt
        return t * lt ** (1.0 + self.epsilon)

    def mu(self, t: float) -> float:
        t = self._check_t(t)
        lt = np.log(t)
        if self.regime == "thm1":
            return t**self.a * lt * lt
        if self.regime == "farfield":
            return t * lt ** (1.0 + self.epsilon)
        return t

    def lam_prime(self, t: float) -> float:
        t = self._check_t(t)
        lt = np.log(t)
        if self.regime == "thm1":
            return t ** (self.b - 1.0) * (self.b * lt - 1.0) / (lt * lt)
        return lt**self.epsilon * (lt + 1.0 + self.epsilon)

    def mu_prime(self, t: float) -> float:
        t = self._check_t(t)
        lt = np.log(t)
        if self.regime == "thm1":
            return t ** (self.a - 1.0) * lt * (self.a * lt + 2.0)
        if self.regime == "farfield":
            return lt**self.epsilon * (lt + 1.0 + self.epsilon)
        return 1.0

    def window_radius(self, t: float) -> float:
        """Half-width C * lambda(t) of the central decay window (thm1)."""
        if self.regime != "thm1":
            raise ValueError("the central decay window belongs to the thm1 regime")
        return self.capital_c * self.lam(t)


def thm1_schedule(a: float, capital_c: float) -> WeightSchedule:
    return WeightSchedule("thm1", a=a, capital_c=capital_c)


def farfield_schedule(epsilon: float) -> WeightSchedule:
    return WeightSchedule("farfield", epsilon=epsilon)


def corollary_schedule(epsilon: float) -> WeightSchedule:
    return WeightSchedule("corollary", epsilon=epsilon)
