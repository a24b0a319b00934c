"""Sharp exponents, optimal constants, envelopes, and the contraction iteration.

For lambda*sigma < 1 the system forces power-law envelopes: f is bounded by
coeff * T^gamma1 on (0, T) with

    gamma1 = (beta + alpha*sigma) * lambda / (1 - lambda*sigma),
    gamma2 = (alpha + beta*lambda) * sigma / (1 - lambda*sigma),

and the optimal coefficients are Gamma-function ratios M1, M2.  The pair

    F(t) = M1^(ls/(1-ls)) t^gamma1,   G(t) = M2^(ls/(1-ls)) t^gamma2

(times the K-factors) satisfies the system with equality, which is the
fixed point that the delta-iteration of the a-priori argument converges to.

All Gamma ratios are assembled in log space; the exponents diverge as
lambda*sigma -> 1, so instances within 1e-6 of the boundary are refused
and a proximity warning is emitted within 1e-3.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special as sp

from fracheat.errors import DomainError
from fracheat.params import ProblemParams
from fracheat.profiles import Constant1, Separable, TimeProfile

__all__ = [
    "SharpConstants",
    "exponents",
    "constants",
    "sharp_constants",
    "Envelopes",
    "envelopes",
    "delta_iteration",
    "exact_pair_profiles",
]

LAMBDA_SIGMA_REFUSE = 1.0 - 1e-6
LAMBDA_SIGMA_WARN = 1.0 - 1e-3


def _guard_lambda_sigma(lam: float, sigma: float) -> float:
    ls = lam * sigma
    if ls >= LAMBDA_SIGMA_REFUSE:
        raise DomainError(
            f"lambda*sigma = {ls} is too close to 1; Gamma arguments overflow "
            f"double precision beyond {LAMBDA_SIGMA_REFUSE}"
        )
    if ls > LAMBDA_SIGMA_WARN:
        warnings.warn(
            f"lambda*sigma = {ls} is within 1e-3 of the boundary; "
            "constants are extreme and accuracy degrades",
            RuntimeWarning,
            stacklevel=3,
        )
    return ls


def exponents(lam: float, sigma: float, alpha: float, beta: float) -> tuple[float, float]:
    """The envelope exponents (gamma1, gamma2); requires lambda*sigma < 1."""
    ls = _guard_lambda_sigma(lam, sigma)
    gamma1 = (beta + alpha * sigma) * lam / (1.0 - ls)
    gamma2 = (alpha + beta * lam) * sigma / (1.0 - ls)
    return gamma1, gamma2


def constants(lam: float, sigma: float, alpha: float, beta: float) -> tuple[float, float, float]:
    """The optimal constants (M1, M2) and the a-priori constant B, in log space."""
    _guard_lambda_sigma(lam, sigma)
    gamma1, gamma2 = exponents(lam, sigma, alpha, beta)
    lg = sp.gammaln
    log_m1 = (
        lg(gamma1 + 1.0)
        - lg(alpha + gamma1 + 1.0)
        + (lg(gamma2 + 1.0) - lg(beta + gamma2 + 1.0)) / sigma
    )
    log_m2 = (
        lg(gamma2 + 1.0)
        - lg(beta + gamma2 + 1.0)
        + (lg(gamma1 + 1.0) - lg(alpha + gamma1 + 1.0)) / lam
    )
    log_b = lg(alpha * sigma + 1.0) - sigma * lg(alpha + 1.0) - lg(beta + alpha * sigma + 1.0)
    return math.exp(log_m1), math.exp(log_m2), math.exp(log_b)


@dataclass(frozen=True)
class SharpConstants:
    gamma1: float
    gamma2: float
    M1: float
    M2: float
    B: float
    # envelope coefficients with the K-factors folded in
    f_coeff: float
    g_coeff: float
    u_coeff: float
    v_coeff: float

    @property
    def u_exponent(self) -> float:
        return self.gamma2  # of T, for J_alpha f on (0, T): coeff * T^(gamma2/sigma)

    def to_dict(self) -> dict:
        return {
            "gamma1": self.gamma1,
            "gamma2": self.gamma2,
            "M1": self.M1,
            "M2": self.M2,
            "B": self.B,
            "f_coeff": self.f_coeff,
            "g_coeff": self.g_coeff,
            "u_coeff": self.u_coeff,
            "v_coeff": self.v_coeff,
        }


def sharp_constants(params: ProblemParams) -> SharpConstants:
    """All sharp-bound data for one instance (requires lambda*sigma < 1)."""
    lam, sigma, alpha, beta = params.lam, params.sigma, params.alpha, params.beta
    ls = _guard_lambda_sigma(lam, sigma)
    gamma1, gamma2 = exponents(lam, sigma, alpha, beta)
    m1, m2, b = constants(lam, sigma, alpha, beta)
    one = 1.0 - ls
    log_k_f = (math.log(params.K1) + lam * math.log(params.K2)) / one
    log_k_g = (math.log(params.K2) + sigma * math.log(params.K1)) / one
    f_coeff = math.exp(log_k_f + (ls / one) * math.log(m1))
    g_coeff = math.exp(log_k_g + (ls / one) * math.log(m2))
    u_coeff = math.exp(log_k_f + (lam / one) * math.log(m2))
    v_coeff = math.exp(log_k_g + (sigma / one) * math.log(m1))
    return SharpConstants(
        gamma1=gamma1,
        gamma2=gamma2,
        M1=m1,
        M2=m2,
        B=b,
        f_coeff=f_coeff,
        g_coeff=g_coeff,
        u_coeff=u_coeff,
        v_coeff=v_coeff,
    )


@dataclass(frozen=True)
class Envelopes:
    """The four sup-norm envelopes on (0, T) as functions of the horizon T."""

    sc: SharpConstants
    lam: float
    sigma: float

    def f(self, T):
        return self.sc.f_coeff * np.asarray(T, dtype=float) ** self.sc.gamma1

    def g(self, T):
        return self.sc.g_coeff * np.asarray(T, dtype=float) ** self.sc.gamma2

    def u(self, T):
        return self.sc.u_coeff * np.asarray(T, dtype=float) ** (self.sc.gamma2 / self.sigma)

    def v(self, T):
        return self.sc.v_coeff * np.asarray(T, dtype=float) ** (self.sc.gamma1 / self.lam)


def envelopes(params: ProblemParams) -> Envelopes:
    return Envelopes(sharp_constants(params), params.lam, params.sigma)


def delta_iteration(params: ProblemParams, steps: int) -> np.ndarray:
    """The a-priori coefficient iteration delta_{j+1} = K1 K2^lam (delta_j M1)^(lam sig).

    Starts at delta_1 = K1 K2^lam B^(lam/(1-lam sig)) and converges
    geometrically (rate lambda*sigma) to the f-envelope coefficient.
    """
    if steps < 1:
        raise DomainError("delta_iteration needs at least one step")
    lam, sigma = params.lam, params.sigma
    ls = _guard_lambda_sigma(lam, sigma)
    _m1, _m2, b = constants(lam, sigma, params.alpha, params.beta)
    kk = params.K1 * params.K2**lam
    seq = np.empty(steps)
    seq[0] = kk * b ** (lam / (1.0 - ls))
    for j in range(1, steps):
        seq[j] = kk * (seq[j - 1] * _m1) ** ls
    limit = sharp_constants(params).f_coeff
    if steps >= 40 and abs(seq[-1] - limit) > 1e-9 * max(limit, 1.0):
        raise AssertionError("delta iteration failed to reach its fixed point")
    return seq


def exact_pair_profiles(params: ProblemParams) -> tuple[Separable, Separable]:
    """The spatially constant pair satisfying the system with equality.

    f(t) = (K1 K2^lam)^(1/(1-ls)) M1^(ls/(1-ls)) t^gamma1 and the g
    counterpart; with K1 = K2 = 1 these are the classical exact pair.
    """
    sc = sharp_constants(params)
    f = Separable(Constant1(), TimeProfile.power(sc.f_coeff, sc.gamma1))
    g = Separable(Constant1(), TimeProfile.power(sc.g_coeff, sc.gamma2))
    return f, g
