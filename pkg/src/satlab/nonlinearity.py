"""Saturated focussing nonlinearities and their derived quantities.

Two families are supported, both functions of the intensity s = |u|^2:

    type 1:  beta(s) = s^(p/2) / (1 + s^((p-q)/2))
    type 2:  beta(s) = s / (1 + s)^((2-q)/2)

Both interpolate between a steep (supercritical) small-amplitude power and a
flatter large-amplitude power.  The module also provides the analytic
derivative beta'(s) and the antiderivative G(t) = int_0^t beta(s) ds entering
the energy functional.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import integrate

from .errors import DomainError


class Kind(Enum):
    TYPE1 = "type1"
    TYPE2 = "type2"


@dataclass(frozen=True)
class NonlinearitySpec:
    """Parameter set for a saturated nonlinearity in dimension d.

    Structural bounds are always enforced (they make the formulas and the
    small-amplitude supercriticality meaningful).  The large-amplitude
    mass-subcriticality bound q < 4/d is only enforced with ``strict=True``:
    the reference soliton-curve parameter sets (p=4, q=2 in 3d) violate it.
    """

    kind: Kind
    q: float
    p: float | None = None
    d: int = 3
    strict: bool = False

    def __post_init__(self):
        if self.d != 3:
            raise DomainError("only d=3 is supported")
        if not self.q > 0:
            raise DomainError(f"q must be positive, got {self.q}")
        if self.kind is Kind.TYPE1:
            if self.p is None:
                raise DomainError("type 1 requires the exponent p")
            if not self.p > 2 + 4 / self.d:
                raise DomainError(
                    f"type 1 requires p > 2 + 4/d = {2 + 4 / self.d:.4f}, got p={self.p}"
                )
            if not self.q < self.p:
                raise DomainError(f"type 1 requires q < p, got q={self.q}, p={self.p}")
        else:
            if self.p is not None:
                raise DomainError("type 2 takes no exponent p")
            if not self.q <= 2:
                raise DomainError(f"type 2 requires q <= 2, got q={self.q}")
            if not self.d > 2:
                raise DomainError("type 2 requires d > 2")
        if self.strict and not self.q < 4 / self.d:
            raise DomainError(
                f"strict mode: q < 4/d = {4 / self.d:.4f} required, got q={self.q}"
            )

    @property
    def alpha(self) -> float:
        """Saturation exponent (p-q)/2 of the type-1 denominator."""
        if self.kind is not Kind.TYPE1:
            raise DomainError("alpha is defined for type 1 only")
        return 0.5 * (self.p - self.q)


def _check_nonnegative(s, name: str):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError(f"{name} must be nonnegative")
    return s


def _softplus(x):
    # log(1 + e^x) without overflow
    return np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x)))


def beta(spec: NonlinearitySpec, s):
    """Evaluate beta(s), s = |u|^2 >= 0.  Vectorized; stable for extreme s."""
    s = _check_nonnegative(s, "s")
    scalar = s.ndim == 0
    s = np.atleast_1d(s)
    out = np.zeros_like(s)
    pos = s > 0
    if spec.kind is Kind.TYPE1:
        # beta = exp((p/2) log s - log(1 + s^alpha)), evaluated in log space
        # so that s^alpha never overflows for s far outside [1e-12, 1e12].
        t = np.log(s[pos])
        out[pos] = np.exp(0.5 * spec.p * t - _softplus(spec.alpha * t))
    else:
        g = 0.5 * (2.0 - spec.q)
        out[pos] = s[pos] * np.exp(-g * np.log1p(s[pos]))
    return out[0] if scalar else out


def beta_prime(spec: NonlinearitySpec, s):
    """Analytic derivative of beta; continuous at s = 0."""
    s = _check_nonnegative(s, "s")
    scalar = s.ndim == 0
    s = np.atleast_1d(s)
    out = np.zeros_like(s)
    pos = s > 0
    if spec.kind is Kind.TYPE1:
        # beta' = s^(p/2-1) [p/2 + (q/2) s^alpha] / (1 + s^alpha)^2; the
        # bracket is evaluated relative to the dominant power to avoid
        # overflow: for s^alpha large, beta' ~ (q/2) s^(q/2-1).
        t = np.log(s[pos])
        a = spec.alpha * t
        # log of numerator bracket: log(p/2 + (q/2) e^a) = max(a,0) + log(...)
        m = np.maximum(a, 0.0)
        bracket = m + np.log(0.5 * spec.p * np.exp(-m) + 0.5 * spec.q * np.exp(a - m))
        out[pos] = np.exp((0.5 * spec.p - 1.0) * t + bracket - 2.0 * _softplus(a))
        if spec.p == 2:
            # not reachable (p > 2 + 4/d) but keep the limit honest
            out[~pos] = 1.0
    else:
        g = 0.5 * (2.0 - spec.q)
        sp = s[pos]
        out[pos] = np.exp(-(g + 1.0) * np.log1p(sp)) * (1.0 + sp - g * sp)
        out[~pos] = 1.0  # beta ~ s near 0 for type 2
    return out[0] if scalar else out


def _type1_closed_form_G(spec: NonlinearitySpec, t: float) -> float | None:
    """Closed form of G for type 1 when alpha = 1 and p/2 is a positive integer.

    Then beta(s) = s^m/(1+s) with m = p/2, and polynomial division gives
    s^m/(1+s) = sum_{j=1..m} (-1)^(m-j) s^(j-1) + (-1)^m / (1+s).
    """
    m = 0.5 * spec.p
    if spec.alpha != 1.0 or m != round(m):
        return None
    m = int(round(m))
    total = 0.0
    for j in range(1, m + 1):
        total += (-1) ** (m - j) * t**j / j
    total += (-1) ** m * np.log1p(t)
    return total


def g_antiderivative(spec: NonlinearitySpec, t):
    """G(t) = int_0^t beta(s) ds.

    Uses a closed form where the exponents admit one (type 2 with q = 2,
    type 1 with (p-q)/2 = 1 and integer p/2), adaptive quadrature otherwise.
    """
    t_arr = _check_nonnegative(t, "t")
    scalar = t_arr.ndim == 0

    def one(tv: float) -> float:
        if tv == 0.0:
            return 0.0
        if spec.kind is Kind.TYPE2 and spec.q == 2.0:
            return 0.5 * tv * tv
        if spec.kind is Kind.TYPE1:
            cf = _type1_closed_form_G(spec, tv)
            if cf is not None:
                return cf
        val, _ = integrate.quad(lambda s: beta(spec, s), 0.0, tv,
                                epsabs=1e-12, epsrel=1e-12, limit=200)
        return val

    out = np.array([one(float(tv)) for tv in np.atleast_1d(t_arr)])
    return float(out[0]) if scalar else out
