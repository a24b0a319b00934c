"""Builders for the explicit solution families of the sharpness and blow-up results.

Four families, each returned with the analytic data that certifies it:

  * mollified pairs: smooth, compactly supported in time, attaining the
    optimal envelope rate with any target constants below the sharp ones;
  * paraboloid pairs: global-in-time pairs comparable to the envelopes on
    the self-similar region {|x|^2 < t};
  * small-time blow-up families: power laws on shrinking paraboloid windows
    whose local L^r norms diverge along t_j -> 0 while global L^p norms stay
    finite;
  * large-time families: the same on expanding windows with t_j -> infinity,
    at the threshold exponent pair where the certified ratios become exactly
    scale-free.

"Taking a subsequence" steps are constructive here: window start times are
chosen so every certified inequality holds with margin 1/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import special as sp

from fracheat.bounds import exponents, constants as sharp_m_constants, sharp_constants
from fracheat.errors import DomainError, InfeasibleConstructionError, UnsupportedShapeError
from fracheat.kernel import ball_volume
from fracheat.params import ProblemParams, blowup_exponents, critical_point, mu
from fracheat.potential import (
    _jacobi_rule,
    _power_segment_exact,
    paraboloid_c_n,
    reversed_paraboloid_c_n,
)
from fracheat.profiles import (
    Constant1,
    ExpPhi,
    Paraboloid,
    PowerPiece,
    ReversedParaboloid,
    Separable,
    SmoothCutoff,
    SpaceTimeFunction,
    SumFunction,
    TimeProfile,
    function_from_dict,
    function_to_dict,
)
from fracheat.special import gaussian_ball_mass

__all__ = [
    "SolutionPair",
    "MollifiedPairSpec",
    "rescale",
    "exact_pair",
    "mollified_pair",
    "paraboloid_pair",
    "pick_P1",
    "blowup_small_time",
    "intersection_P4",
    "blowup_large_time",
    "lp_norm_finite",
]


@dataclass(frozen=True)
class SolutionPair:
    f: SpaceTimeFunction
    g: SpaceTimeFunction
    provenance: str
    scale_factors: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "provenance": self.provenance,
            "f": function_to_dict(self.f),
            "g": function_to_dict(self.g),
            "scale_factors": dict(self.scale_factors),
            "meta": dict(self.meta),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SolutionPair":
        return cls(
            f=function_from_dict(data["f"]),
            g=function_from_dict(data["g"]),
            provenance=data.get("provenance", "unknown"),
            scale_factors=dict(data.get("scale_factors", {})),
            meta=dict(data.get("meta", {})),
        )


def _amp_factors(params: ProblemParams, T: float) -> tuple[float, float]:
    """The amplitude factors of the parabolic rescaling to horizon T."""
    lam, sigma = params.lam, params.sigma
    one = 1.0 - lam * sigma
    gamma1, gamma2 = _exponents_any(params)
    amp_f = math.exp((math.log(params.K1) + lam * math.log(params.K2)) / one + gamma1 * math.log(T))
    amp_g = math.exp((math.log(params.K2) + sigma * math.log(params.K1)) / one + gamma2 * math.log(T))
    return amp_f, amp_g


def _exponents_any(params: ProblemParams) -> tuple[float, float]:
    """gamma1, gamma2 by the defining formulas, valid for lambda*sigma != 1."""
    lam, sigma = params.lam, params.sigma
    one = 1.0 - lam * sigma
    if one == 0.0:
        raise DomainError("rescaling is degenerate at lambda*sigma = 1")
    return (
        (params.beta + params.alpha * sigma) * lam / one,
        (params.alpha + params.beta * lam) * sigma / one,
    )


def rescale(pair: SolutionPair, T: float, params: ProblemParams) -> SolutionPair:
    """Parabolic rescaling x -> sqrt(T) x, t -> T t with the K-amplitude factors.

    Maps solutions of the normalized (K = 1, horizon 1) system to solutions
    of the K-weighted system on horizon T.
    """
    if T <= 0.0:
        raise DomainError("rescale requires T > 0")
    amp_f, amp_g = _amp_factors(params, T)
    return SolutionPair(
        f=pair.f.scaled(amp_f, T),
        g=pair.g.scaled(amp_g, T),
        provenance=pair.provenance,
        scale_factors={
            **pair.scale_factors,
            "T": T,
            "amp_f": amp_f,
            "amp_g": amp_g,
        },
        meta=pair.meta,
    )


def exact_pair(params: ProblemParams) -> SolutionPair:
    """The spatially constant pair saturating both inequalities identically."""
    sc = sharp_constants(params)
    f = Separable(Constant1(), TimeProfile.power(sc.f_coeff, sc.gamma1))
    g = Separable(Constant1(), TimeProfile.power(sc.g_coeff, sc.gamma2))
    return SolutionPair(
        f=f,
        g=g,
        provenance="exact_pair",
        meta={"gamma1": sc.gamma1, "gamma2": sc.gamma2, "M1": sc.M1, "M2": sc.M2},
    )


@dataclass(frozen=True)
class MollifiedPairSpec:
    N1: float
    N2: float
    m: float
    a1: float
    a2: float
    delta: float
    gamma_trunc: float
    epsilon: float
    margin_g: float  # certified lower bound for (J_alpha f)^sigma / g, > 1
    margin_f: float  # certified lower bound for (J_beta g)^lambda / f, > 1

    def __post_init__(self) -> None:
        lamless = 0.0 < self.m < self.a1 < 1.0
        if not lamless:
            raise AssertionError("mollified spec violates 0 < m < a1 < 1")

    def to_dict(self) -> dict:
        return {
            "N1": self.N1,
            "N2": self.N2,
            "m": self.m,
            "a1": self.a1,
            "a2": self.a2,
            "delta": self.delta,
            "gamma_trunc": self.gamma_trunc,
            "epsilon": self.epsilon,
            "margin_g": self.margin_g,
            "margin_f": self.margin_f,
        }


def mollified_pair(
    params: ProblemParams,
    N1: float,
    N2: float,
    T: float = 1.0,
    cutoff_order: int = 3,
) -> tuple[SolutionPair, MollifiedPairSpec]:
    """Smooth pair attaining rate t^gamma1 at x = 0 with constant N1 < M1.

    Builds the exponentially localized, time-truncated modification of the
    exact pair; the cutoff width delta, spatial truncation gamma, and decay
    rate epsilon are chosen in closed form so that the inequality system is
    certified with an explicit margin, then the pair is rescaled to horizon
    T.  The returned pair satisfies at x = 0, for 0 < t < T, exactly

        f(0, t) = (K1 K2^lam)^(1/(1-ls)) N1^(ls/(1-ls)) t^gamma1

    and the g-counterpart.  Feasible whenever the target amplitude pair
    keeps both cross ratios above the construction's internal slack; raises
    InfeasibleConstructionError otherwise (possible for lopsided targets
    when lambda > 1 or sigma > 1).
    """
    lam, sigma, alpha, beta = params.lam, params.sigma, params.alpha, params.beta
    n = params.n
    ls = lam * sigma
    if ls >= 1.0:
        raise DomainError("mollified_pair requires lambda*sigma < 1")
    m1, m2, _b = sharp_m_constants(lam, sigma, alpha, beta)
    if not (0.0 < N1 < m1) or not (0.0 < N2 < m2):
        raise DomainError(f"targets must satisfy 0 < N1 < M1={m1}, 0 < N2 < M2={m2}")
    gamma1, gamma2 = exponents(lam, sigma, alpha, beta)
    kappa = ls / (1.0 - ls)

    log_r1 = math.log(N1 / m1)
    log_r2 = math.log(N2 / m2)
    m = math.exp(max(lam * kappa * log_r2, kappa * log_r1))
    a1 = 0.5 * (m + 1.0)
    a2 = a1 ** (0.5 * (sigma + 1.0 / lam))
    abar1 = math.exp(kappa * log_r1)
    abar2 = math.exp(kappa * log_r2)

    # log-margins of the two inequalities for the target amplitudes, after
    # discounting the construction's own (a1, a2) slack
    L1 = sigma * math.log(abar1) - math.log(abar2) - 0.5 * (sigma * math.log(a1) - math.log(a2))
    L2 = lam * math.log(abar2) - math.log(abar1) - 0.5 * (lam * math.log(a2) - math.log(a1))
    if L1 <= 0.0 or L2 <= 0.0:
        raise InfeasibleConstructionError(
            "equality targets are outside this construction family: need "
            f"N1^sigma-vs-N2 and N2^lambda-vs-N1 slack, got log-margins ({L1}, {L2})"
        )

    # cutoff width from the analytic mollification-loss bound
    d1 = math.exp(kappa * math.log(m1) + gamma1 * math.log(2.0) - sp.gammaln(alpha + 1.0) - (kappa / sigma) * math.log(m2))
    d2 = math.exp(kappa * math.log(m2) + gamma2 * math.log(2.0) - sp.gammaln(beta + 1.0) - (kappa / lam) * math.log(m1))
    delta = min(
        ((1.0 - math.exp(-L1 / (4.0 * sigma))) / d1) ** (1.0 / alpha),
        ((1.0 - math.exp(-L2 / (4.0 * lam))) / d2) ** (1.0 / beta),
        0.9,
    )

    # spatial truncation radius: ball mass within e^(-budget) of full
    need = math.exp(-min(L1 / (4.0 * sigma), L2 / (4.0 * lam)))
    gamma_trunc = 1.0
    while gaussian_ball_mass(gamma_trunc / 2.0, n) < need:
        gamma_trunc *= 2.0
        if gamma_trunc > 1e6:
            raise InfeasibleConstructionError("spatial truncation search diverged")
    lo, hi = gamma_trunc / 2.0, gamma_trunc
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if gaussian_ball_mass(mid / 2.0, n) < need:
            lo = mid
        else:
            hi = mid
    gamma_trunc = hi

    epsilon = min(
        L1 / (4.0 * sigma * gamma_trunc * math.sqrt(2.0)),
        L2 / (4.0 * lam * sigma * gamma_trunc * math.sqrt(2.0)),
        0.9,
    )

    # certified margins of the final (target-amplitude) pair
    ball = gaussian_ball_mass(gamma_trunc / 2.0, n)
    loss1 = (1.0 - d1 * delta**alpha) ** sigma * ball**sigma * math.exp(-sigma * epsilon * gamma_trunc * math.sqrt(2.0))
    loss2 = (1.0 - d2 * delta**beta) ** lam * ball**lam * math.exp(-lam * sigma * epsilon * gamma_trunc * math.sqrt(2.0))
    margin_g = (abar1**sigma / abar2) * (a1**sigma / a2) ** (-0.5) * loss1
    margin_f = (abar2**lam / abar1) * (a2**lam / a1) ** (-0.5) * loss2
    if margin_g <= 1.0 or margin_f <= 1.0:
        raise InfeasibleConstructionError(
            f"certified margins did not exceed 1: ({margin_g}, {margin_f})"
        )

    cut = SmoothCutoff(1.0, delta, cutoff_order)
    f_unit = Separable(
        ExpPhi(rate=epsilon, power=1.0),
        TimeProfile.power(abar1 * m1**kappa, gamma1, lo=0.0, hi=1.0 + delta, cutoff=cut),
    )
    g_unit = Separable(
        ExpPhi(rate=epsilon, power=sigma),
        TimeProfile.power(abar2 * m2**kappa, gamma2, lo=0.0, hi=1.0 + delta, cutoff=cut),
    )
    spec = MollifiedPairSpec(
        N1=N1,
        N2=N2,
        m=m,
        a1=a1,
        a2=a2,
        delta=delta,
        gamma_trunc=gamma_trunc,
        epsilon=epsilon,
        margin_g=margin_g,
        margin_f=margin_f,
    )
    unit = SolutionPair(
        f=f_unit,
        g=g_unit,
        provenance="mollified_pair",
        meta={"spec": spec.to_dict(), "gamma1": gamma1, "gamma2": gamma2},
    )
    return rescale(unit, T, params), spec


def _middle_window_integral(alpha: float, g_exp: float) -> float:
    """int_{1/4}^{3/4} (1-u)^(alpha-1) u^g du / Gamma(alpha), any real g."""
    if g_exp > -1.0:
        return _power_segment_exact(1.0, g_exp, 0.25, 0.75, 1.0, alpha)
    x, w = _jacobi_rule(200, 0.0, 0.0)
    u = 0.5 + 0.25 * x
    return 0.25 * float(np.dot(w, (1.0 - u) ** (alpha - 1.0) * u**g_exp)) * math.exp(
        -sp.gammaln(alpha)
    )


def _unit_window_integral(alpha: float, xi: float) -> float:
    """int_0^1 v^(alpha-1) (1+v)^(-xi) dv / Gamma(alpha)."""
    x, w = _jacobi_rule(120, 0.0, alpha - 1.0)
    v = 0.5 * (1.0 + x)
    vals = (1.0 + v) ** (-xi)
    return (0.5**alpha) * float(np.dot(w, vals)) * math.exp(-sp.gammaln(alpha))


def paraboloid_pair(params: ProblemParams) -> tuple[SolutionPair, float, float, float]:
    """Global-in-time pair supported on {|x|^2 < t} with envelope-rate growth.

    Returns (pair, L1, L2, N): the amplitudes L1, L2 solve the two certified
    scalar inequalities with equality, and N > 0 is the largest constant
    with f >= N t^gamma1, g >= N t^gamma2 and the potential counterparts on
    the support.
    """
    lam, sigma, alpha, beta = params.lam, params.sigma, params.alpha, params.beta
    n = params.n
    ls = lam * sigma
    if ls >= 1.0:
        raise DomainError("paraboloid_pair requires lambda*sigma < 1")
    gamma1, gamma2 = exponents(lam, sigma, alpha, beta)
    m1, m2, _ = sharp_m_constants(lam, sigma, alpha, beta)
    kappa = ls / (1.0 - ls)
    c_n = paraboloid_c_n(n)

    # certified comparison constants: J_alpha fbar >= C_alpha gbar^(1/sigma)
    c_alpha = c_n * _middle_window_integral(alpha, gamma1) * math.exp(
        kappa * math.log(m1) - (kappa / sigma) * math.log(m2)
    )
    c_beta = c_n * _middle_window_integral(beta, gamma2) * math.exp(
        kappa * math.log(m2) - (kappa / lam) * math.log(m1)
    )
    log_l1 = (
        math.log(params.K1) + lam * math.log(params.K2) + lam * math.log(c_beta) + ls * math.log(c_alpha)
    ) / (1.0 - ls)
    l1 = math.exp(log_l1)
    l2 = params.K2 * (l1 * c_alpha) ** sigma

    f = Separable(Paraboloid(), TimeProfile.power(l1 * m1**kappa, gamma1))
    g = Separable(Paraboloid(), TimeProfile.power(l2 * m2**kappa, gamma2))
    big_n = min(
        l1 * m1**kappa,
        l2 * m2**kappa,
        l1 * c_alpha * m2 ** (kappa / sigma),
        l2 * c_beta * m1 ** (kappa / lam),
    )
    pair = SolutionPair(
        f=f,
        g=g,
        provenance="paraboloid_pair",
        meta={
            "L1": l1,
            "L2": l2,
            "N": big_n,
            "C_alpha": c_alpha,
            "C_beta": c_beta,
            "paraboloid_constant": c_n,
            "gamma1": gamma1,
            "gamma2": gamma2,
        },
    )
    return pair, l1, l2, big_n


def pick_P1(params: ProblemParams, epsilon_margin: float = 0.5) -> tuple[float, float, float, float]:
    """Pick an exponent pair strictly inside the blow-up wedge near its corner.

    Returns (xi1, eta1, r, s) with r in (p, p + margin) and s in
    (s0, s0 + margin), where s0 = max(q, q sigma0 / sigma).  Requires
    sigma > mu(lambda); the wedge has empty interior otherwise.
    """
    if epsilon_margin <= 0.0:
        raise DomainError("epsilon_margin must be > 0")
    n, p, q = params.n, params.p, params.q
    alpha, beta, lam, sigma = params.alpha, params.beta, params.lam, params.sigma
    mu_l = mu(lam, n, p, alpha, beta)
    if sigma <= mu_l:
        raise InfeasibleConstructionError(
            f"sigma = {sigma} <= mu(lambda) = {mu_l}: the blow-up wedge is empty"
        )
    _, sigma0 = critical_point(n, p, q, alpha, beta)
    s0 = max(q, q * sigma0 / sigma)
    xi0 = (n + 2.0) / (2.0 * p)
    eta3 = (xi0 - alpha) * sigma
    eta0 = eta3 if sigma < sigma0 else (n + 2.0) / (2.0 * q)

    xi_floor = (n + 2.0) / (2.0 * (p + epsilon_margin))
    eta_floor = (n + 2.0) / (2.0 * (s0 + epsilon_margin))
    h = 0.25
    for _ in range(60):
        xi1 = xi0 * (1.0 - h)
        if xi1 > xi_floor:
            lo = max(beta + xi1 / lam, eta_floor)
            hi = min((xi1 - alpha) * sigma, eta0)
            if hi > lo:
                eta1 = 0.5 * (lo + hi)
                r = (n + 2.0) / (2.0 * xi1)
                s = (n + 2.0) / (2.0 * eta1)
                return xi1, eta1, r, s
        h *= 0.5
    raise InfeasibleConstructionError("could not place an exponent pair inside the wedge")


def _power_sum_constant(exp_power: float) -> float:
    """Smallest D with a^e + b^e <= D (a+b)^e for a, b >= 0."""
    return 1.0 if exp_power >= 1.0 else 2.0 ** (1.0 - exp_power)


def _scale_to_system(
    params: ProblemParams, c_f_hat: float, c_g_hat: float
) -> tuple[float, float]:
    """Amplitudes (theta_f, theta_g) turning certified comparisons into the system.

    Given f <= C_f (J_beta g)^lam and g <= C_g (J_alpha f)^sigma, solves the
    log-linear system so that theta_f f <= K1 (J_beta theta_g g)^lam and the
    companion hold with equality of the certified bounds.
    """
    lam, sigma = params.lam, params.sigma
    det = 1.0 - lam * sigma
    if det == 0.0:
        raise DomainError("amplitude solve degenerate at lambda*sigma = 1")
    rf = math.log(params.K1 / c_f_hat)
    rg = math.log(params.K2 / c_g_hat)
    x = (rf + lam * rg) / det
    y = (rg + sigma * rf) / det
    return math.exp(x), math.exp(y)


def blowup_small_time(
    params: ProblemParams,
    r: float,
    s: float,
    terms: int = 8,
) -> tuple[SolutionPair, np.ndarray]:
    """Pair with infinite local L^r/L^s norms along a sequence t_j -> 0.

    The base component lives on the truncated paraboloid {|x|^2 < t < 1};
    each window component lives on a shrinking reversed paraboloid ending at
    T_j, with T_{j+1} < T_j / 4 and t_j = T_j / 2 chosen so that all
    certified comparison ratios hold with margin 1/2.  A final amplitude
    pair scales the sum into the K-weighted system.
    """
    n, p, q = params.n, params.p, params.q
    alpha, beta, lam, sigma = params.alpha, params.beta, params.lam, params.sigma
    if terms < 1:
        raise DomainError("terms must be >= 1")
    xi1 = (n + 2.0) / (2.0 * r)
    eta1 = (n + 2.0) / (2.0 * s)
    e1 = (eta1 - beta) * lam - xi1
    e2 = (xi1 - alpha) * sigma - eta1
    if r <= p or s <= q or e1 <= 0.0 or e2 <= 0.0:
        raise InfeasibleConstructionError(
            f"(r, s) = ({r}, {s}) is outside the admissible wedge: "
            f"need r > p, s > q and strict wedge inequalities, got ({e1}, {e2})"
        )

    c_n = paraboloid_c_n(n)
    c_rev = reversed_paraboloid_c_n(n)
    c_f0 = c_n * _middle_window_integral(alpha, -xi1)
    c_g0 = c_n * _middle_window_integral(beta, -eta1)
    c_fj = c_rev * _unit_window_integral(alpha, xi1)
    c_gj = c_rev * _unit_window_integral(beta, eta1)

    # window-start thresholds: every certified sup-ratio at margin 1/2
    log_t_max = min(
        (lam * math.log(c_g0) - math.log(2.0)) / e1,
        (sigma * math.log(c_f0) - math.log(2.0)) / e2,
        math.log(4.0) + (lam * math.log(c_gj) - math.log(2.0)) / e1,
        math.log(4.0) + (sigma * math.log(c_fj) - math.log(2.0)) / e2,
        math.log(2.0)
        + (lam * math.log(c_g0) - 2.0 * math.log(2.0) - ((eta1 - beta) * lam + xi1) * math.log(2.0)) / e1,
        math.log(2.0)
        + (sigma * math.log(c_f0) - 2.0 * math.log(2.0) - ((xi1 - alpha) * sigma + eta1) * math.log(2.0)) / e2,
        math.log(0.49),
    )
    if log_t_max < math.log(1e-200):
        raise InfeasibleConstructionError(
            "window thresholds underflow; pick (r, s) further inside the wedge"
        )
    t_start = math.exp(log_t_max)
    big_t = t_start * 4.1 ** (-np.arange(terms, dtype=float))
    t_j = big_t / 2.0

    f_terms = [Separable(Paraboloid(), TimeProfile.power(1.0, -xi1, lo=0.0, hi=1.0))]
    g_terms = [Separable(Paraboloid(), TimeProfile.power(1.0, -eta1, lo=0.0, hi=1.0))]
    for T_win, t_win in zip(big_t, t_j):
        f_terms.append(
            Separable(
                ReversedParaboloid(T_win),
                TimeProfile.power(1.0, -xi1, lo=t_win, hi=T_win, pivot=T_win, sign=-1),
            )
        )
        g_terms.append(
            Separable(
                ReversedParaboloid(T_win),
                TimeProfile.power(1.0, -eta1, lo=t_win, hi=T_win, pivot=T_win, sign=-1),
            )
        )

    # per-region certified constants for the summed pair
    d_lam = _power_sum_constant(lam)
    d_sig = _power_sum_constant(sigma)
    c_f_hat = max(c_g0**-lam, 0.5 * d_lam, 0.5)
    c_g_hat = max(c_f0**-sigma, 0.5 * d_sig, 0.5)
    theta_f, theta_g = _scale_to_system(params, c_f_hat, c_g_hat)

    f = SumFunction(tuple(t.scaled(theta_f, 1.0) for t in f_terms))
    g = SumFunction(tuple(t.scaled(theta_g, 1.0) for t in g_terms))

    gamma_p = (n + 2.0) / (2.0 * p) - xi1
    gamma_q = (n + 2.0) / (2.0 * q) - eta1
    pair = SolutionPair(
        f=f,
        g=g,
        provenance="blowup_small_time",
        scale_factors={"theta_f": theta_f, "theta_g": theta_g},
        meta={
            "xi1": xi1,
            "eta1": eta1,
            "r": r,
            "s": s,
            "times": [float(v) for v in t_j],
            "window_ends": [float(v) for v in big_t],
            "lp_exponent_f": gamma_p,
            "lp_exponent_g": gamma_q,
            "certified_constants": {
                "C_f0": c_f0,
                "C_g0": c_g0,
                "C_fj": c_fj,
                "C_gj": c_gj,
                "C_f_hat": c_f_hat,
                "C_g_hat": c_g_hat,
            },
        },
    )
    return pair, t_j


def intersection_P4(params: ProblemParams) -> tuple[float, float]:
    """The intersection of the wedge boundary lines xi = (eta - beta) lam and
    eta = (xi - alpha) sigma; requires lambda*sigma > 1."""
    lam, sigma, alpha, beta = params.lam, params.sigma, params.alpha, params.beta
    ls = lam * sigma
    if ls == 1.0:
        raise DomainError("the wedge boundary lines are parallel at lambda*sigma = 1")
    if ls < 1.0:
        raise DomainError("intersection lies outside the positive quadrant for lambda*sigma < 1")
    xi4 = (beta + alpha * sigma) * lam / (ls - 1.0)
    eta4 = (alpha + beta * lam) * sigma / (ls - 1.0)
    n2 = params.n + 2.0
    if not (0.0 < xi4 < n2 / (2.0 * params.p) and 0.0 < eta4 < n2 / (2.0 * params.q)):
        raise InfeasibleConstructionError(
            f"intersection ({xi4}, {eta4}) escapes the admissible box; "
            "check sigma > mu(lambda) and normalization"
        )
    r0, s0_large, _ = blowup_exponents(params)
    if abs(n2 / (2.0 * xi4) - r0) > 1e-12 * max(r0, 1.0) or abs(
        n2 / (2.0 * eta4) - s0_large
    ) > 1e-12 * max(s0_large, 1.0):
        raise AssertionError("intersection disagrees with the blow-up thresholds")
    return xi4, eta4


def blowup_large_time(
    params: ProblemParams,
    r: Optional[float] = None,
    s: Optional[float] = None,
    terms: int = 8,
    first_window: float = 4.0,
) -> tuple[SolutionPair, np.ndarray]:
    """Pair with infinite local norms along t_j -> infinity, at the threshold pair.

    Components carry the intersection exponents, for which the certified
    comparison ratios are exactly scale-free, so no window thinning is
    needed: T_{j+1} > 4 T_j with T_j = 2 t_j, starting in (2, infinity).
    """
    n, p, q = params.n, params.p, params.q
    lam, sigma, alpha, beta = params.lam, params.sigma, params.alpha, params.beta
    if terms < 1:
        raise DomainError("terms must be >= 1")
    if first_window <= 2.0:
        raise DomainError("windows must start inside (2, infinity)")
    xi4, eta4 = intersection_P4(params)
    r0, s0_large, _ = blowup_exponents(params)
    r = r0 if r is None else r
    s = s0_large if s is None else s
    if r < r0 or s < s0_large:
        raise InfeasibleConstructionError(
            f"need r >= r0 = {r0} and s >= s0 = {s0_large}, got ({r}, {s})"
        )

    c_n = paraboloid_c_n(n)
    c_rev = reversed_paraboloid_c_n(n)
    c_f0 = c_n * _middle_window_integral(alpha, -xi4)
    c_g0 = c_n * _middle_window_integral(beta, -eta4)
    c_fj = c_rev * _unit_window_integral(alpha, xi4)
    c_gj = c_rev * _unit_window_integral(beta, eta4)

    big_t = first_window * 4.1 ** np.arange(terms, dtype=float)
    t_j = big_t / 2.0

    f_terms = [Separable(Paraboloid(), TimeProfile.power(1.0, -xi4))]
    g_terms = [Separable(Paraboloid(), TimeProfile.power(1.0, -eta4))]
    for T_win, t_win in zip(big_t, t_j):
        f_terms.append(
            Separable(
                ReversedParaboloid(T_win),
                TimeProfile.power(1.0, -xi4, lo=t_win, hi=T_win, pivot=T_win, sign=-1),
            )
        )
        g_terms.append(
            Separable(
                ReversedParaboloid(T_win),
                TimeProfile.power(1.0, -eta4, lo=t_win, hi=T_win, pivot=T_win, sign=-1),
            )
        )

    d_lam = _power_sum_constant(lam)
    d_sig = _power_sum_constant(sigma)
    ratio_f0 = c_g0**-lam
    ratio_g0 = c_f0**-sigma
    c_f_hat = max(d_lam * max(ratio_f0, c_gj**-lam), (1.0 + 3.0**xi4) * ratio_f0)
    c_g_hat = max(d_sig * max(ratio_g0, c_fj**-sigma), (1.0 + 3.0**eta4) * ratio_g0)
    theta_f, theta_g = _scale_to_system(params, c_f_hat, c_g_hat)

    f = SumFunction(tuple(t.scaled(theta_f, 1.0) for t in f_terms))
    g = SumFunction(tuple(t.scaled(theta_g, 1.0) for t in g_terms))
    pair = SolutionPair(
        f=f,
        g=g,
        provenance="blowup_large_time",
        scale_factors={"theta_f": theta_f, "theta_g": theta_g},
        meta={
            "xi4": xi4,
            "eta4": eta4,
            "r0": r0,
            "s0": s0_large,
            "r": r,
            "s": s,
            "times": [float(v) for v in t_j],
            "window_ends": [float(v) for v in big_t],
            "lp_exponent_f": (n + 2.0) / (2.0 * p) - xi4,
            "lp_exponent_g": (n + 2.0) / (2.0 * q) - eta4,
            "certified_constants": {
                "C_f0": c_f0,
                "C_g0": c_g0,
                "C_fj": c_fj,
                "C_gj": c_gj,
                "C_f_hat": c_f_hat,
                "C_g_hat": c_g_hat,
            },
        },
    )
    return pair, t_j


def lp_norm_finite(fn: SpaceTimeFunction, p: float, n: int, t_max: Optional[float] = None) -> dict:
    """Analytic L^p finiteness test for the power-on-paraboloid families.

    For f = c * (t - pivot or pivot - t)^(-xi) on a (possibly reversed)
    paraboloid in dimension n, finiteness is decided by the sign of
    gamma = (n+2)/(2p) - xi; when finite the exact value of ||f||_p^p is
    omega_n c^p span^(gamma p) / (gamma p), where span is the time extent
    (capped at t_max for uncapped paraboloids).  Returns a dict with keys
    finite, gamma, value, norm.
    """
    if p < 1.0 or n < 1:
        raise DomainError("lp_norm_finite requires p >= 1 and n >= 1")
    if not isinstance(fn, Separable) or len(fn.temporal.pieces) != 1 or fn.temporal.cutoff:
        raise UnsupportedShapeError("lp_norm_finite accepts single-piece paraboloid shapes")
    piece = fn.temporal.pieces[0]
    spatial = fn.spatial
    omega = ball_volume(n)
    xi = -piece.exponent
    gamma = (n + 2.0) / (2.0 * p) - xi

    if isinstance(spatial, Paraboloid):
        if piece.sign != 1 or piece.pivot != 0.0:
            raise UnsupportedShapeError("paraboloid shapes must be powers of t")
        span = min(piece.hi, t_max if t_max is not None else piece.hi)
        if not math.isfinite(span):
            return {"finite": False, "gamma": gamma, "value": None, "norm": None,
                    "reason": "unbounded time support; supply t_max"}
        if gamma <= 0.0:
            return {"finite": False, "gamma": gamma, "value": None, "norm": None}
        value = omega * piece.coeff**p * span ** (gamma * p) / (gamma * p)
        return {"finite": True, "gamma": gamma, "value": value, "norm": value ** (1.0 / p)}

    if isinstance(spatial, ReversedParaboloid):
        if piece.sign != -1 or piece.pivot != spatial.t_end:
            raise UnsupportedShapeError("reversed shapes must be powers of (T - t)")
        span = spatial.t_end - piece.lo
        if gamma <= 0.0:
            return {"finite": False, "gamma": gamma, "value": None, "norm": None}
        value = omega * piece.coeff**p * span ** (gamma * p) / (gamma * p)
        return {"finite": True, "gamma": gamma, "value": value, "norm": value ** (1.0 / p)}

    raise UnsupportedShapeError(f"unsupported spatial profile {spatial!r}")
