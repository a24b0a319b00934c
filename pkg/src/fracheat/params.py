"""Problem parameters, the symmetry swap, and the (lambda, sigma) regime map.

The plane splits along three curves: the hyperbola sigma = 1/lambda, the
decreasing curve sigma = mu(lambda), and the line sigma = nu(lambda)
through the origin; mu and nu cross at (lambda0, sigma0).  Region labels:

    B  sigma < 1/lambda                      -> sharp pointwise bounds
    A  1/lambda <= sigma < mu(lambda)        -> only the trivial solution
    E  sigma = mu(lambda), lambda >= lambda0 -> no result known
    C  mu(lambda) < sigma <= sigma0          -> no bounds (blow-up)
    D  sigma0 < sigma <= nu(lambda)          -> no bounds (blow-up)

plus CriticalCase when 2*p*alpha >= n+2 (decided by lambda*sigma vs 1) and
OffDomain for un-normalized input with sigma > nu(lambda).

Boundary ties are resolved with exact rational arithmetic: floats are
rationals, so all curve comparisons can be decided exactly; an absolute
tolerance (default 1e-12) additionally snaps near-misses onto the
measure-zero boundaries so users can hit region E deliberately.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Optional

from fracheat.errors import DomainError

__all__ = [
    "ProblemParams",
    "Region",
    "Outcome",
    "ValidityClass",
    "RegimeReport",
    "normalize",
    "validity_class",
    "satisfies_operator_domain",
    "mu",
    "nu",
    "critical_point",
    "classify_region",
    "blowup_exponents",
]

DEFAULT_BOUNDARY_TOL = 1e-12

# float comparisons this far from a boundary skip the exact-rational path
_FAST_PATH_MARGIN = 1e-9


class Region(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    CRITICAL_CASE = "CriticalCase"
    OFF_DOMAIN = "OffDomain"


class Outcome(str, Enum):
    ONLY_TRIVIAL = "OnlyTrivial"
    SHARP_BOUNDS = "SharpBounds"
    NO_BOUNDS = "NoBounds"
    NO_RESULT = "NoResult"


class ValidityClass(str, Enum):
    ADMISSIBLE = "Admissible"
    CRITICAL = "Critical"
    SUPERCRITICAL = "Supercritical"
    INVALID = "Invalid"


@dataclass(frozen=True)
class ProblemParams:
    """One instance of the inequality system.

    n is the spatial dimension; p, q the integrability exponents of f and g;
    alpha, beta the fractional orders; lam, sigma the nonlinearity powers;
    K1, K2 the inequality constants.
    """

    n: int
    p: float
    q: float
    alpha: float
    beta: float
    lam: float
    sigma: float
    K1: float = 1.0
    K2: float = 1.0

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n}")
        if self.p < 1.0 or self.q < 1.0:
            raise DomainError(f"p, q must be >= 1, got p={self.p}, q={self.q}")
        for name in ("alpha", "beta", "lam", "sigma", "K1", "K2"):
            value = getattr(self, name)
            if not value > 0.0:
                raise DomainError(f"{name} must be > 0, got {value}")

    @property
    def lambda_sigma(self) -> float:
        return self.lam * self.sigma

    @property
    def p_alpha_class(self) -> ValidityClass:
        return validity_class(self.p, self.alpha, self.n)

    @property
    def q_beta_class(self) -> ValidityClass:
        return validity_class(self.q, self.beta, self.n)

    @property
    def operator_domain_ok(self) -> bool:
        """Both (p, alpha) and (q, beta) admit the fractional heat operator."""
        return satisfies_operator_domain(self.p, self.alpha, self.n) and (
            satisfies_operator_domain(self.q, self.beta, self.n)
        )

    def swapped(self) -> "ProblemParams":
        """Exchange the roles of the two unknowns: (lam, alpha, p, K1) <-> (sigma, beta, q, K2)."""
        return replace(
            self,
            p=self.q,
            q=self.p,
            alpha=self.beta,
            beta=self.alpha,
            lam=self.sigma,
            sigma=self.lam,
            K1=self.K2,
            K2=self.K1,
        )

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "q": self.q,
            "alpha": self.alpha,
            "beta": self.beta,
            "lambda": self.lam,
            "sigma": self.sigma,
            "K1": self.K1,
            "K2": self.K2,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ProblemParams":
        data = dict(data)
        if "lambda" in data:
            data["lam"] = data.pop("lambda")
        return cls(**data)


@dataclass(frozen=True)
class RegimeReport:
    region: Region
    outcome: Outcome
    swapped: bool
    params: ProblemParams  # normalized parameters the labels refer to
    mu_at_lambda: Optional[float] = None
    nu_at_lambda: Optional[float] = None
    lambda0: Optional[float] = None
    sigma0: Optional[float] = None
    r0: Optional[float] = None
    s0_large_time: Optional[float] = None
    s0_small_time: Optional[float] = None
    notes: tuple = ()

    def to_dict(self) -> dict:
        return {
            "region": self.region.value,
            "outcome": self.outcome.value,
            "swapped": self.swapped,
            "params": self.params.to_dict(),
            "mu_at_lambda": self.mu_at_lambda,
            "nu_at_lambda": self.nu_at_lambda,
            "lambda0": self.lambda0,
            "sigma0": self.sigma0,
            "r0": self.r0,
            "s0_large_time": self.s0_large_time,
            "s0_small_time": self.s0_small_time,
            "notes": list(self.notes),
        }


def _frac(x: float) -> Fraction:
    return Fraction(x) if not isinstance(x, Fraction) else x


def _cmp(a: Fraction, b: Fraction, tol: Fraction) -> int:
    """-1, 0, +1 comparison treating |a - b| <= tol as a tie."""
    d = a - b
    if abs(d) <= tol:
        return 0
    return -1 if d < 0 else 1


def satisfies_operator_domain(p: float, alpha: float, n: int) -> bool:
    """Whether (p, alpha) is in the domain where the operator is defined.

    p > 1 requires 2*p*alpha < n+2 strictly; p = 1 allows equality.
    """
    cls = validity_class(p, alpha, n)
    if cls is ValidityClass.ADMISSIBLE:
        return True
    return cls is ValidityClass.CRITICAL and p == 1.0


def validity_class(p: float, alpha: float, n: int) -> ValidityClass:
    """Classify (p, alpha) against the critical threshold 2*p*alpha = n+2."""
    if p < 1.0 or alpha <= 0.0 or n < 1:
        return ValidityClass.INVALID
    lhs = 2 * _frac(p) * _frac(alpha)
    rhs = Fraction(n + 2)
    if lhs < rhs:
        return ValidityClass.ADMISSIBLE
    if lhs == rhs:
        return ValidityClass.CRITICAL
    return ValidityClass.SUPERCRITICAL


def _norm_sides(params: ProblemParams, exact: bool):
    """Both sides of the normalization inequality (lhs <= rhs iff normalized)."""
    if exact:
        n2 = Fraction(params.n + 2)
        lhs = (n2 - 2 * _frac(params.p) * _frac(params.alpha)) * _frac(params.q) ** 2 * _frac(params.sigma)
        rhs = (n2 - 2 * _frac(params.q) * _frac(params.beta)) * _frac(params.p) ** 2 * _frac(params.lam)
    else:
        n2 = params.n + 2.0
        lhs = (n2 - 2.0 * params.p * params.alpha) * params.q**2 * params.sigma
        rhs = (n2 - 2.0 * params.q * params.beta) * params.p**2 * params.lam
    return lhs, rhs


def normalize(params: ProblemParams) -> tuple[ProblemParams, bool]:
    """Apply the symmetry swap so the normalization inequality holds.

    Returns (params, swapped).  Idempotent: the equality case never swaps,
    so normalizing twice equals normalizing once.
    """
    lhs, rhs = _norm_sides(params, exact=False)
    if abs(lhs - rhs) <= _FAST_PATH_MARGIN * max(abs(lhs), abs(rhs), 1.0):
        lhs, rhs = _norm_sides(params, exact=True)
    if lhs <= rhs:
        return params, False
    return params.swapped(), True


def mu(lam: float, n: int, p: float, alpha: float, beta: float) -> float:
    """The decreasing regime curve mu(lambda); requires 2*p*alpha < n+2."""
    den = (n + 2.0) - 2.0 * p * alpha
    if den <= 0.0:
        raise DomainError("mu is undefined for 2*p*alpha >= n+2")
    if lam <= 0.0:
        raise DomainError("mu requires lambda > 0")
    return 2.0 * p * beta / den + (n + 2.0) / (den * lam)


def nu(lam: float, n: int, p: float, q: float, alpha: float, beta: float) -> float:
    """The normalization boundary line nu(lambda); requires 2*p*alpha < n+2."""
    den = (n + 2.0) - 2.0 * p * alpha
    if den <= 0.0:
        raise DomainError("nu is undefined for 2*p*alpha >= n+2")
    return ((n + 2.0) - 2.0 * q * beta) * p**2 / (den * q**2) * lam


def critical_point(n: int, p: float, q: float, alpha: float, beta: float) -> tuple[float, float]:
    """The intersection (lambda0, sigma0) of the mu and nu curves."""
    dp = (n + 2.0) - 2.0 * p * alpha
    dq = (n + 2.0) - 2.0 * q * beta
    if dp <= 0.0 or dq <= 0.0:
        raise DomainError("critical_point requires 2*p*alpha < n+2 and 2*q*beta < n+2")
    lam0 = (n + 2.0) * q / (dq * p)
    sig0 = (n + 2.0) * p / (dp * q)
    # consistency: both curves pass through the point
    mu0 = mu(lam0, n, p, alpha, beta)
    nu0 = nu(lam0, n, p, q, alpha, beta)
    if abs(mu0 - sig0) > 1e-9 * abs(sig0) or abs(nu0 - sig0) > 1e-9 * abs(sig0):
        raise AssertionError("mu/nu intersection consistency check failed")
    return lam0, sig0


def _mu_frac(lam: Fraction, n: int, p: Fraction, alpha: Fraction, beta: Fraction) -> Fraction:
    den = Fraction(n + 2) - 2 * p * alpha
    return 2 * p * beta / den + Fraction(n + 2) / (den * lam)


def _nu_frac(lam: Fraction, n: int, p: Fraction, q: Fraction, alpha: Fraction, beta: Fraction) -> Fraction:
    den = Fraction(n + 2) - 2 * p * alpha
    return (Fraction(n + 2) - 2 * q * beta) * p**2 / (den * q**2) * lam


def _region_exact(params: ProblemParams, tol: float) -> tuple[Region, list]:
    """Decide the region with exact rational arithmetic plus a snap tolerance."""
    ftol = _frac(tol)
    n = params.n
    p, q = _frac(params.p), _frac(params.q)
    alpha, beta = _frac(params.alpha), _frac(params.beta)
    lam, sigma = _frac(params.lam), _frac(params.sigma)
    notes: list = []

    nu_l = _nu_frac(lam, n, p, q, alpha, beta)
    mu_l = _mu_frac(lam, n, p, alpha, beta)
    lam0 = Fraction(n + 2) * q / ((Fraction(n + 2) - 2 * q * beta) * p)
    sig0 = Fraction(n + 2) * p / ((Fraction(n + 2) - 2 * p * alpha) * q)

    c_nu = _cmp(sigma, nu_l, ftol)
    if c_nu > 0:
        return Region.OFF_DOMAIN, ["sigma > nu(lambda): input is not normalized"]
    if c_nu == 0:
        notes.append("sigma = nu(lambda): boundary kept inside the closed region")

    c_inv = _cmp(sigma, 1 / lam, ftol)
    if c_inv < 0:
        return Region.B, notes
    if c_inv == 0:
        notes.append("sigma = 1/lambda: assigned to A (A contains its lower boundary)")

    c_mu = _cmp(sigma, mu_l, ftol)
    if c_mu < 0:
        return Region.A, notes
    if c_mu == 0:
        if _cmp(lam, lam0, ftol) >= 0:
            notes.append("sigma = mu(lambda) with lambda >= lambda0: region E")
            return Region.E, notes
        notes.append("sigma = mu(lambda) with lambda < lambda0: boundary belongs to A")
        return Region.A, notes

    c_s0 = _cmp(sigma, sig0, ftol)
    if c_s0 <= 0:
        if c_s0 == 0:
            notes.append("sigma = sigma0: assigned to C (C contains its upper boundary)")
        return Region.C, notes
    return Region.D, notes


def _region_fast(params: ProblemParams) -> Optional[Region]:
    """Float-only region decision; None when any boundary is too close to call."""
    n, p, q = params.n, params.p, params.q
    alpha, beta, lam, sigma = params.alpha, params.beta, params.lam, params.sigma
    nu_l = nu(lam, n, p, q, alpha, beta)
    mu_l = mu(lam, n, p, alpha, beta)
    lam0, sig0 = critical_point(n, p, q, alpha, beta)

    def far(a: float, b: float) -> bool:
        return abs(a - b) > _FAST_PATH_MARGIN * max(abs(a), abs(b), 1.0)

    if not (far(sigma, nu_l) and far(sigma, 1.0 / lam) and far(sigma, mu_l) and far(sigma, sig0)):
        return None
    if sigma > nu_l:
        return Region.OFF_DOMAIN
    if sigma < 1.0 / lam:
        return Region.B
    if sigma < mu_l:
        return Region.A
    if sigma < sig0:
        return Region.C
    return Region.D


_OUTCOME_BY_REGION = {
    Region.A: Outcome.ONLY_TRIVIAL,
    Region.B: Outcome.SHARP_BOUNDS,
    Region.C: Outcome.NO_BOUNDS,
    Region.D: Outcome.NO_BOUNDS,
    Region.E: Outcome.NO_RESULT,
}


def classify_region(
    params: ProblemParams,
    boundary_tol: float = DEFAULT_BOUNDARY_TOL,
    normalize_first: bool = True,
) -> RegimeReport:
    """Classify an instance into its qualitative regime.

    With normalize_first the symmetry swap is applied before classifying
    (recorded in the report), so OffDomain can only appear when the caller
    disables normalization and supplies sigma > nu(lambda).
    """
    swapped = False
    if normalize_first:
        params, swapped = normalize(params)

    notes: list = []
    # critical/supercritical order: the whole mu/nu geometry degenerates
    pa_class = validity_class(params.p, params.alpha, params.n)
    if pa_class in (ValidityClass.CRITICAL, ValidityClass.SUPERCRITICAL):
        ls = _frac(params.lam) * _frac(params.sigma)
        if _cmp(ls, Fraction(1), _frac(boundary_tol)) >= 0:
            outcome = Outcome.ONLY_TRIVIAL
            notes.append("critical case with lambda*sigma >= 1: only the trivial solution")
        else:
            outcome = Outcome.SHARP_BOUNDS
            notes.append("critical case with lambda*sigma < 1: sharp bounds hold")
        return RegimeReport(
            region=Region.CRITICAL_CASE,
            outcome=outcome,
            swapped=swapped,
            params=params,
            notes=tuple(notes),
        )

    # subcritical (p, alpha) from here on; a critical (q, beta) pair makes
    # nu(lambda) <= 0 < sigma, which is only reachable without normalization
    qb_class = validity_class(params.q, params.beta, params.n)
    if qb_class in (ValidityClass.CRITICAL, ValidityClass.SUPERCRITICAL):
        return RegimeReport(
            region=Region.OFF_DOMAIN,
            outcome=_classify_off_domain_outcome(params),
            swapped=swapped,
            params=params,
            mu_at_lambda=mu(params.lam, params.n, params.p, params.alpha, params.beta),
            nu_at_lambda=nu(params.lam, params.n, params.p, params.q, params.alpha, params.beta),
            notes=("sigma > nu(lambda) <= 0: input is not normalized",),
        )

    region = _region_fast(params)
    if region is None:
        region, notes = _region_exact(params, boundary_tol)

    if region is Region.OFF_DOMAIN:
        outcome = _classify_off_domain_outcome(params)
        notes = notes or ["sigma > nu(lambda): input is not normalized"]
    else:
        outcome = _OUTCOME_BY_REGION[region]

    lam0, sig0 = critical_point(params.n, params.p, params.q, params.alpha, params.beta)
    r0 = s0_large = s0_small = None
    if region in (Region.C, Region.D) and params.lambda_sigma > 1.0:
        r0, s0_large, s0_small = blowup_exponents(params)
    return RegimeReport(
        region=region,
        outcome=outcome,
        swapped=swapped,
        params=params,
        mu_at_lambda=mu(params.lam, params.n, params.p, params.alpha, params.beta),
        nu_at_lambda=nu(params.lam, params.n, params.p, params.q, params.alpha, params.beta),
        lambda0=lam0,
        sigma0=sig0,
        r0=r0,
        s0_large_time=s0_large,
        s0_small_time=s0_small,
        notes=tuple(notes),
    )


def _classify_off_domain_outcome(params: ProblemParams) -> Outcome:
    """Outcome for un-normalized input: classify the swapped instance."""
    report = classify_region(params.swapped(), normalize_first=False)
    return report.outcome


def blowup_exponents(params: ProblemParams) -> tuple[float, float, float]:
    """The blow-up integrability thresholds (r0, s0_large_time, s0_small_time).

    r0 and s0_large_time are the large-time thresholds
    (n+2)(lambda*sigma - 1) / (2 (beta + alpha*sigma) lambda)  and the
    lambda <-> sigma mirrored form; s0_small_time = max(q, q*sigma0/sigma).
    Requires lambda*sigma > 1.
    """
    lam, sigma = params.lam, params.sigma
    if lam * sigma <= 1.0:
        raise DomainError("blowup exponents require lambda*sigma > 1")
    n2 = params.n + 2.0
    r0 = n2 * (lam * sigma - 1.0) / (2.0 * (params.beta + params.alpha * sigma) * lam)
    s0_large = n2 * (lam * sigma - 1.0) / (2.0 * (params.alpha + params.beta * lam) * sigma)
    _, sig0 = critical_point(params.n, params.p, params.q, params.alpha, params.beta)
    s0_small = max(params.q, params.q * sig0 / sigma)

    # above the mu curve (normalized, subcritical) the thresholds must beat p, q
    try:
        mu_l = mu(params.lam, params.n, params.p, params.alpha, params.beta)
    except DomainError:
        mu_l = None
    if mu_l is not None and sigma > mu_l:
        lhs, rhs = _norm_sides(params, exact=False)
        if lhs <= rhs and not (r0 > params.p and s0_large > params.q):
            raise AssertionError(
                f"blow-up exponent sanity failed: r0={r0} vs p={params.p}, "
                f"s0={s0_large} vs q={params.q}"
            )
    return r0, s0_large, s0_small
