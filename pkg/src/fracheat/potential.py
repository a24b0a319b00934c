"""Evaluation of the space-time potential J_alpha.

J_alpha f(x, t) convolves f against the fractional heat kernel over the
past.  For the function shapes in :mod:`fracheat.profiles` the time
integral carries the weakly singular weight (t - tau)^(alpha-1), so it is
computed by product integration: per-segment Gauss-Jacobi rules whose
weights absorb the kernel singularity at tau = t, the power-law branch of
the time profile at its pivot, and the radius^n vanishing of paraboloid
masses at a shrinking tip.  Gaussian boundary layers of indicator masses
near tau = t are resolved by geometric subdivision toward the endpoint.

Positions are radial throughout: x enters via |x| only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy import optimize
from scipy import special as sp

from fracheat.errors import DomainError, QuadratureFailure, UnsupportedShapeError
from fracheat.kernel import truncated_mass_over_ball_volume, truncated_spatial_mass
from fracheat.profiles import (
    Constant1,
    ExpPhi,
    GridFunction,
    Paraboloid,
    PowerPiece,
    ReversedParaboloid,
    Separable,
    SmoothCutoff,
    SpaceTimeFunction,
    SumFunction,
    TimeProfile,
)

__all__ = [
    "QuadratureConfig",
    "rl_power",
    "rl_integral",
    "j_alpha",
    "j_alpha_lower_paraboloid",
    "paraboloid_c_n",
    "reversed_paraboloid_c_n",
    "sup_bound_check",
]


@dataclass(frozen=True)
class QuadratureConfig:
    """Tuning of the product-integration rules.

    time_nodes is the Gauss rule size per time segment; singularity_split
    enables the exponent-weighted (Jacobi) treatment of endpoint powers
    (disable only to observe the accuracy loss of a plain rule);
    spatial_truncation is the Gaussian truncation radius in standard
    deviations; target_rel_tol is checked by comparing against a coarser
    rule, escalating the node count before reporting failure.
    """

    time_nodes: int = 32
    singularity_split: bool = True
    spatial_truncation: float = 8.0
    target_rel_tol: float = 1e-7
    spatial_nodes: int = 64
    max_escalations: int = 2

    def __post_init__(self) -> None:
        if self.time_nodes < 2 or self.spatial_nodes < 2:
            raise DomainError("quadrature needs at least 2 nodes")
        if self.target_rel_tol <= 0.0:
            raise DomainError("target_rel_tol must be > 0")


DEFAULT_CONFIG = QuadratureConfig()


@lru_cache(maxsize=512)
def _jacobi_rule(k: int, right_exp: float, left_exp: float):
    """Nodes/weights for int_{-1}^1 (1-x)^right (1+x)^left f(x) dx."""
    if right_exp == 0.0 and left_exp == 0.0:
        return sp.roots_legendre(k)
    return sp.roots_jacobi(k, right_exp, left_exp)


@lru_cache(maxsize=64)
def _hermite_rule(k: int):
    return sp.roots_hermite(k)


def rl_power(gamma_exp: float, t, alpha: float):
    """J_alpha of the spatially constant power t^gamma (gamma > -1).

    Closed form Gamma(gamma+1)/Gamma(alpha+gamma+1) * t^(alpha+gamma),
    assembled in log space.
    """
    if gamma_exp <= -1.0:
        raise DomainError(f"rl_power requires gamma > -1, got {gamma_exp}")
    if alpha <= 0.0:
        raise DomainError(f"rl_power requires alpha > 0, got {alpha}")
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0.0):
        raise DomainError("rl_power requires t > 0")
    out = np.exp(
        sp.gammaln(gamma_exp + 1.0)
        - sp.gammaln(alpha + gamma_exp + 1.0)
        + (alpha + gamma_exp) * np.log(t)
    )
    return float(out) if out.ndim == 0 else out


def _power_segment_exact(coeff, a, lo, hi, t, alpha):
    """Exact integral of coeff * (t-tau)^(alpha-1)/Gamma(alpha) * tau^a over (lo, hi).

    Requires 0 <= lo < hi <= t and a > -1; uses the regularized incomplete
    Beta function, which is the piecewise extension of the Beta identity.
    """
    if a <= -1.0:
        raise DomainError("power piece exponent must exceed -1 for integrability at 0")
    scale = coeff * np.exp(
        sp.gammaln(a + 1.0) - sp.gammaln(a + 1.0 + alpha) + (alpha + a) * math.log(t)
    )
    di = sp.betainc(a + 1.0, alpha, hi / t) - sp.betainc(a + 1.0, alpha, lo / t)
    return scale * di


# --- time-segment machinery --------------------------------------------------


@dataclass(frozen=True)
class _Segment:
    u: float
    v: float
    piece: PowerPiece
    at_t: bool  # kernel singularity pulled at the right endpoint
    left_branch: bool  # piece power branch pulled at the left endpoint
    right_branch: bool  # piece power branch pulled at the right endpoint
    mass_tip_left: bool  # paraboloid tip (radius -> 0) at the left endpoint
    mass_tip_right: bool  # reversed-paraboloid tip at the right endpoint


class _MassModel:
    """Inner spatial integral against the unit-order Gaussian, per kind."""

    kind = "constant"

    def breaks(self, lo: float, hi: float) -> list:
        return []

    def tip_left(self, u: float) -> bool:
        return False

    def tip_right(self, v: float) -> bool:
        return False

    def boundary_layer(self) -> bool:
        return False

    def eval(self, tau: np.ndarray, s: np.ndarray, seg: _Segment, n: int) -> np.ndarray:
        return np.ones_like(tau)


class _ConstantMass(_MassModel):
    pass


class _ParaboloidMass(_MassModel):
    kind = "paraboloid"

    def __init__(self, x_norm: float):
        self.x_norm = x_norm

    def tip_left(self, u: float) -> bool:
        return u == 0.0

    def boundary_layer(self) -> bool:
        return True

    def eval(self, tau, s, seg, n):
        radius = np.sqrt(tau)
        if seg.mass_tip_left:
            # mass / tau^(n/2), smooth through the tip
            return truncated_mass_over_ball_volume(self.x_norm, radius, s, n)
        return truncated_spatial_mass(self.x_norm, radius, s, n)


class _ReversedParaboloidMass(_MassModel):
    kind = "reversed"

    def __init__(self, x_norm: float, t_end: float):
        self.x_norm = x_norm
        self.t_end = t_end

    def breaks(self, lo, hi):
        return [self.t_end] if lo < self.t_end < hi else []

    def tip_right(self, v: float) -> bool:
        return v == self.t_end

    def boundary_layer(self) -> bool:
        return True

    def eval(self, tau, s, seg, n):
        radius = np.sqrt(np.maximum(self.t_end - tau, 0.0))
        if seg.mass_tip_right:
            return truncated_mass_over_ball_volume(self.x_norm, radius, s, n)
        return truncated_spatial_mass(self.x_norm, radius, s, n)


class _ExpPhiMass(_MassModel):
    kind = "expphi"

    def __init__(self, x_norm: float, profile: ExpPhi, n: int, cfg: QuadratureConfig):
        self.x_norm = x_norm
        self.profile = profile
        self.n = n
        self.cfg = cfg

    def eval(self, tau, s, seg, n):
        return _gaussian_average_expphi(self.x_norm, s, self.profile, n, self.cfg)


class _ShellMass(_MassModel):
    """Nearest-bucket radial reconstruction: sum of shell masses per bucket."""

    kind = "shells"

    def __init__(self, x_norm: float, edges: np.ndarray, col_values):
        self.x_norm = x_norm
        self.edges = edges  # outer radii of buckets, ascending; inner edge is 0
        self.col_values = col_values  # callable tau -> (len(tau), buckets)

    def boundary_layer(self) -> bool:
        return True

    def eval(self, tau, s, seg, n):
        inner = np.concatenate(([0.0], self.edges[:-1]))
        upper = truncated_spatial_mass(self.x_norm, self.edges[None, :], s[:, None], n)
        lower = truncated_spatial_mass(self.x_norm, inner[None, :], s[:, None], n)
        shells = np.maximum(upper - lower, 0.0)
        return np.sum(shells * self.col_values(tau), axis=1)


def _gaussian_average_expphi(x_norm, s, profile: ExpPhi, n: int, cfg: QuadratureConfig):
    """int G(x - xi, s) phi(rate xi)^power dxi for the unit Gaussian kernel G."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    if n == 1:
        z, w = _hermite_rule(cfg.spatial_nodes)
        arg = x_norm + 2.0 * np.sqrt(s)[:, None] * z[None, :]
        vals = profile.factor(np.abs(arg), 0.0)
        out = vals @ w / math.sqrt(math.pi)
        return out
    # radial reduction with the modified-Bessel angular factor
    x, w = _jacobi_rule(cfg.spatial_nodes, 0.0, 0.0)
    std = np.sqrt(2.0 * s)
    lo = np.maximum(x_norm - cfg.spatial_truncation * std, 0.0)
    hi = x_norm + cfg.spatial_truncation * std
    half = 0.5 * (hi - lo)
    rho = lo[:, None] + half[:, None] * (1.0 + x[None, :])
    h = profile.factor(rho, 0.0)
    s_col = s[:, None]
    if x_norm == 0.0:
        surface = 2.0 * math.pi ** (0.5 * n) / math.exp(sp.gammaln(0.5 * n))
        dens = (4.0 * math.pi * s_col) ** (-0.5 * n) * np.exp(-(rho**2) / (4.0 * s_col))
        integ = h * rho ** (n - 1) * surface * dens
    else:
        z = x_norm * rho / (2.0 * s_col)
        angular = (2.0 * math.pi) ** (0.5 * n) * sp.ive(0.5 * n - 1.0, z) * z ** (
            1.0 - 0.5 * n
        )
        dens = (4.0 * math.pi * s_col) ** (-0.5 * n) * np.exp(
            -((rho - x_norm) ** 2) / (4.0 * s_col)
        )
        integ = h * rho ** (n - 1) * angular * dens
    return (integ @ w) * half


def _piece_segments(
    piece: PowerPiece,
    t: float,
    cutoff: Optional[SmoothCutoff],
    mass: _MassModel,
    tol: float,
    alpha: float,
) -> list:
    """Split the support of one piece below time t into analytic segments."""
    lo = max(piece.lo, 0.0)
    hi = min(piece.hi, t)
    if cutoff is not None:
        hi = min(hi, cutoff.start + cutoff.width)
    if hi <= lo:
        return []
    breaks = {lo, hi}
    if cutoff is not None:
        for b in (cutoff.start, cutoff.start + cutoff.width):
            if lo < b < hi:
                breaks.add(b)
    for b in mass.breaks(lo, hi):
        breaks.add(b)
    points = sorted(breaks)

    # geometric refinement toward tau = t resolves the Gaussian boundary
    # layer of indicator masses as the elapsed time vanishes
    if mass.boundary_layer() and points[-1] == t:
        u = points[-2]
        levels = max(4, min(24, int(math.ceil(math.log(1.0 / tol) / (max(alpha, 0.2) * math.log(16.0))))))
        span = t - u
        extra = [t - span * 16.0 ** (-k) for k in range(1, levels + 1)]
        points = sorted(set(points[:-1] + [b for b in extra if b > u] + [t]))

    segments = []
    for u, v in zip(points, points[1:]):
        left_branch = piece.sign == 1 and piece.pivot == u and piece.exponent != 0.0
        right_branch = piece.sign == -1 and piece.pivot == v and piece.exponent != 0.0
        segments.append(
            _Segment(
                u=u,
                v=v,
                piece=piece,
                at_t=(v == t),
                left_branch=left_branch,
                right_branch=right_branch,
                mass_tip_left=mass.tip_left(u),
                mass_tip_right=mass.tip_right(v),
            )
        )
    return segments


def _segment_integral(
    seg: _Segment,
    t: float,
    alpha: float,
    n: int,
    cutoff: Optional[SmoothCutoff],
    mass: _MassModel,
    k_nodes: int,
    use_jacobi: bool,
) -> float:
    piece = seg.piece
    left_exp = 0.0
    right_exp = 0.0
    if use_jacobi:
        if seg.left_branch:
            left_exp += piece.exponent
        if seg.right_branch:
            right_exp += piece.exponent
        if seg.at_t:
            right_exp += alpha - 1.0
        if seg.mass_tip_left:
            left_exp += 0.5 * n
        if seg.mass_tip_right:
            right_exp += 0.5 * n
    if left_exp <= -1.0 or right_exp <= -1.0:
        raise DomainError(
            f"non-integrable endpoint power (left={left_exp}, right={right_exp})"
        )
    x, w = _jacobi_rule(k_nodes, right_exp, left_exp)
    half = 0.5 * (seg.v - seg.u)
    tau = seg.u + half * (1.0 + x)
    # elapsed time computed without cancellation: exact when seg.v == t
    s = (t - seg.v) + half * (1.0 - x)

    vals = np.full(tau.shape, piece.coeff)
    if not (use_jacobi and (seg.left_branch or seg.right_branch)):
        arg = piece.sign * (tau - piece.pivot)
        vals = vals * np.maximum(arg, 0.0) ** piece.exponent
    if not (use_jacobi and seg.at_t):
        vals = vals * s ** (alpha - 1.0)
    if cutoff is not None:
        vals = vals * cutoff.factor(tau)
    mass_vals = mass.eval(tau, s, seg if use_jacobi else replace(seg, mass_tip_left=False, mass_tip_right=False), n)
    vals = vals * mass_vals
    return half ** (1.0 + left_exp + right_exp) * float(np.dot(w, vals))


class _SegmentBudget:
    """Evaluation budget shared across one integral's adaptive bisection."""

    def __init__(self, limit: int):
        self.remaining = limit

    def spend(self) -> None:
        self.remaining -= 1
        if self.remaining < 0:
            raise QuadratureFailure(
                "time quadrature exhausted its segment budget before convergence"
            )


def _eval_segment_adaptive(
    seg: _Segment,
    t: float,
    alpha: float,
    n: int,
    cutoff: Optional[SmoothCutoff],
    mass: _MassModel,
    cfg: QuadratureConfig,
    budget: _SegmentBudget,
    depth: int = 0,
) -> float:
    """Segment value with per-segment relative control by bisection.

    The integrand is nonnegative, so bounding each segment's relative error
    bounds the total relative error; bisection also resolves the log-scale
    variation of Gaussian-tail masses that a single rule cannot.
    """
    budget.spend()
    fine = _segment_integral(seg, t, alpha, n, cutoff, mass, cfg.time_nodes, cfg.singularity_split)
    coarse = _segment_integral(
        seg, t, alpha, n, cutoff, mass, max(6, (2 * cfg.time_nodes) // 3), cfg.singularity_split
    )
    scale = max(abs(fine), abs(coarse))
    # below 1e-300 the value itself is underflow noise; relative control is moot
    if scale < 1e-300 or abs(fine - coarse) <= cfg.target_rel_tol * scale:
        return fine
    mid = 0.5 * (seg.u + seg.v)
    if depth >= 48 or mid <= seg.u or mid >= seg.v:
        raise QuadratureFailure(
            f"segment [{seg.u}, {seg.v}] did not converge "
            f"(estimates {fine} vs {coarse})"
        )
    left = _Segment(
        u=seg.u, v=mid, piece=seg.piece, at_t=False,
        left_branch=seg.left_branch, right_branch=False,
        mass_tip_left=seg.mass_tip_left, mass_tip_right=False,
    )
    right = _Segment(
        u=mid, v=seg.v, piece=seg.piece, at_t=seg.at_t,
        left_branch=False, right_branch=seg.right_branch,
        mass_tip_left=False, mass_tip_right=seg.mass_tip_right,
    )
    return _eval_segment_adaptive(
        left, t, alpha, n, cutoff, mass, cfg, budget, depth + 1
    ) + _eval_segment_adaptive(right, t, alpha, n, cutoff, mass, cfg, budget, depth + 1)


def _integrate_profile_against_kernel(
    profile: TimeProfile,
    t: float,
    alpha: float,
    n: int,
    mass: _MassModel,
    cfg: QuadratureConfig,
    exact_powers: bool,
) -> float:
    """sum over pieces of int_0^t (t-tau)^(alpha-1)/Gamma(alpha) P(tau) M(tau) dtau."""
    inv_gamma = math.exp(-sp.gammaln(alpha))
    tol = cfg.target_rel_tol
    budget = _SegmentBudget(limit=400 * (cfg.max_escalations + 1))
    total = 0.0
    for piece in profile.pieces:
        if exact_powers and isinstance(mass, _ConstantMass) and piece.sign == 1 and piece.pivot == 0.0:
            lo = max(piece.lo, 0.0)
            hi = min(piece.hi, t)
            if cutoff := profile.cutoff:
                pure_hi = min(hi, cutoff.start)
                if pure_hi > lo:
                    total += _power_segment_exact(piece.coeff, piece.exponent, lo, pure_hi, t, alpha)
                win_lo, win_hi = max(lo, cutoff.start), min(hi, cutoff.start + cutoff.width)
                if win_hi > win_lo:
                    window_piece = PowerPiece(win_lo, win_hi, piece.coeff, piece.exponent, piece.pivot, piece.sign)
                    for seg in _piece_segments(window_piece, t, cutoff, mass, tol, alpha):
                        total += inv_gamma * _eval_segment_adaptive(
                            seg, t, alpha, n, cutoff, mass, cfg, budget
                        )
            elif hi > lo:
                total += _power_segment_exact(piece.coeff, piece.exponent, lo, hi, t, alpha)
            continue
        for seg in _piece_segments(piece, t, profile.cutoff, mass, tol, alpha):
            total += inv_gamma * _eval_segment_adaptive(
                seg, t, alpha, n, profile.cutoff, mass, cfg, budget
            )
    return total


def rl_integral(
    profile: TimeProfile,
    t: float,
    alpha: float,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """The time-only potential of a spatially homogeneous profile.

    Product integration is exact on plain power pieces (via the incomplete
    Beta function); smooth-cutoff windows and pivoted pieces go through the
    singularity-weighted Gauss rules.
    """
    if alpha <= 0.0:
        raise DomainError("rl_integral requires alpha > 0")
    if t <= 0.0:
        return 0.0
    return _integrate_profile_against_kernel(
        profile, t, alpha, n=1, mass=_ConstantMass(), cfg=cfg, exact_powers=True
    )


def j_alpha(
    fn: SpaceTimeFunction,
    x_norm: float,
    t: float,
    alpha: float,
    n: int,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """The potential J_alpha fn at radial position |x| = x_norm and time t."""
    if alpha <= 0.0 or n < 1:
        raise DomainError("j_alpha requires alpha > 0 and n >= 1")
    if x_norm < 0.0:
        raise DomainError("x_norm is a radius and must be >= 0")
    if t <= 0.0:
        return 0.0
    if isinstance(fn, SumFunction):
        return sum(j_alpha(term, x_norm, t, alpha, n, cfg) for term in fn.terms)
    if isinstance(fn, Separable):
        spatial = fn.spatial
        if isinstance(spatial, Constant1):
            return rl_integral(fn.temporal, t, alpha, cfg)
        if isinstance(spatial, Paraboloid):
            mass: _MassModel = _ParaboloidMass(x_norm)
        elif isinstance(spatial, ReversedParaboloid):
            mass = _ReversedParaboloidMass(x_norm, spatial.t_end)
        elif isinstance(spatial, ExpPhi):
            mass = _ExpPhiMass(x_norm, spatial, n, cfg)
        else:
            raise UnsupportedShapeError(f"unsupported spatial profile {spatial!r}")
        return _integrate_profile_against_kernel(
            fn.temporal, t, alpha, n, mass, cfg, exact_powers=False
        )
    if isinstance(fn, GridFunction):
        return _j_alpha_grid(fn, x_norm, t, alpha, n, cfg)
    raise UnsupportedShapeError(f"unsupported function shape {fn!r}")


def _j_alpha_grid(
    fn: GridFunction, x_norm: float, t: float, alpha: float, n: int, cfg: QuadratureConfig
) -> float:
    times = np.asarray(fn.times, dtype=float)
    values = fn.values_array
    radii = np.asarray(fn.radii, dtype=float)
    spatially_constant = len(radii) == 1
    if not spatially_constant:
        mids = 0.5 * (radii[1:] + radii[:-1])
        outer = radii[-1] + (radii[-1] - mids[-1])
        edges = np.concatenate((mids, [outer]))

    inv_gamma = math.exp(-sp.gammaln(alpha))
    tol = cfg.target_rel_tol
    budget = _SegmentBudget(limit=200 * len(times))
    total = 0.0
    for i in range(len(times) - 1):
        lo = max(times[i], 0.0)
        hi = min(times[i + 1], t)
        if hi <= lo:
            continue
        dt_cell = times[i + 1] - times[i]

        def col_values(tau, i=i, dt_cell=dt_cell):
            wgt = (tau - times[i]) / dt_cell
            return (1.0 - wgt)[:, None] * values[i][None, :] + wgt[:, None] * values[i + 1][None, :]

        # reuse the piece machinery with a unit piece; values enter via the mass model
        if spatially_constant:
            mass: _MassModel = _GridConstantMass(col_values)
        else:
            mass = _ShellMass(x_norm, edges, col_values)
        seg_piece = PowerPiece(lo, hi if hi < t else t + 1.0, 1.0, 0.0)
        for seg in _piece_segments(seg_piece, t, None, mass, tol, alpha):
            total += inv_gamma * _eval_segment_adaptive(
                seg, t, alpha, n, None, mass, cfg, budget
            )
    return total


class _GridConstantMass(_MassModel):
    """Spatially constant grid column: full Gaussian mass times the value."""

    kind = "gridconst"

    def __init__(self, col_values):
        self.col_values = col_values

    def eval(self, tau, s, seg, n):
        return self.col_values(tau)[:, 0]


def j_alpha_lower_paraboloid(t: float, alpha: float, g_exp: float, n: int) -> float:
    """Certified lower bound for J_alpha(tau^g * paraboloid indicator) on {|x|^2 < t}.

    Equals paraboloid_c_n(n) times the exact middle-window time integral
    int_{t/4}^{3t/4} (t-tau)^(alpha-1)/Gamma(alpha) tau^g dtau.
    """
    if t <= 0.0 or alpha <= 0.0:
        raise DomainError("j_alpha_lower_paraboloid requires t > 0 and alpha > 0")
    c_n = paraboloid_c_n(n)
    if g_exp > -1.0:
        window = _power_segment_exact(1.0, g_exp, 0.25 * t, 0.75 * t, t, alpha)
    else:
        # interior window: plain Gauss is fine for any g
        x, w = _jacobi_rule(200, 0.0, 0.0)
        half = 0.25 * t
        tau = 0.5 * t + half * x
        window = half * float(
            np.dot(w, (t - tau) ** (alpha - 1.0) * tau**g_exp)
        ) * math.exp(-sp.gammaln(alpha))
    return c_n * window


@lru_cache(maxsize=16)
def paraboloid_c_n(n: int) -> float:
    """min over {|x|^2 < t, t/4 < tau < 3t/4} (t = 1 by scale invariance) of
    the Gaussian mass of the ball {|xi|^2 < tau} seen from x at elapsed t - tau.

    Strictly positive; computed once per dimension by grid search plus
    local refinement and cached.
    """
    if n < 1:
        raise DomainError("paraboloid_c_n requires n >= 1")

    def objective(v):
        d, tau = v
        d = min(max(d, 0.0), 1.0)
        tau = min(max(tau, 0.25), 0.75)
        return truncated_spatial_mass(d, math.sqrt(tau), 1.0 - tau, n)

    ds = np.linspace(0.0, 1.0, 41)
    taus = np.linspace(0.25, 0.75, 41)
    dd, tt = np.meshgrid(ds, taus, indexing="ij")
    vals = truncated_spatial_mass(dd, np.sqrt(tt), 1.0 - tt, n)
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    res = optimize.minimize(
        objective,
        x0=[ds[i], taus[j]],
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-14},
    )
    best = min(float(np.min(vals)), float(res.fun))
    if best <= 0.0:
        raise AssertionError("paraboloid constant must be positive")
    return best


@lru_cache(maxsize=16)
def reversed_paraboloid_c_n(n: int) -> float:
    """Analogous constant for the shrinking supports {|xi| < sqrt(T - tau)}.

    After parabolic scaling the worst case is one-parameter:
    min over theta >= 0 of the Gaussian ball mass with offset sqrt(theta),
    radius sqrt(theta + 1), elapsed 1.
    """
    if n < 1:
        raise DomainError("reversed_paraboloid_c_n requires n >= 1")
    thetas = np.concatenate((np.linspace(0.0, 20.0, 400), np.geomspace(20.0, 2e4, 200)))
    vals = truncated_spatial_mass(np.sqrt(thetas), np.sqrt(thetas + 1.0), 1.0, n)

    def objective(logth):
        th = math.exp(logth[0])
        return truncated_spatial_mass(math.sqrt(th), math.sqrt(th + 1.0), 1.0, n)

    i = int(np.argmin(vals))
    best = float(vals[i])
    if thetas[i] > 0.0:
        res = optimize.minimize(
            objective, x0=[math.log(max(thetas[i], 1e-6))], method="Nelder-Mead"
        )
        best = min(best, float(res.fun))
    # the theta -> infinity limit is the half-space mass 1/2
    best = min(best, 0.5)
    if best <= 0.0:
        raise AssertionError("reversed paraboloid constant must be positive")
    return best


def sup_bound_check(
    fn: SpaceTimeFunction,
    a: float,
    b: float,
    alpha: float,
    n: int,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    time_samples: int = 16,
    radial_samples: int = 9,
) -> float:
    """Check ||J_alpha fn||_inf <= (b-a)^alpha / Gamma(alpha+1) * ||fn||_inf.

    fn must vanish before a and be bounded on (a, b).  Returns the worst
    sampled ratio of the two sides (at most 1 + quadrature tolerance).
    """
    if b <= a:
        raise DomainError("sup_bound_check requires a < b")
    ts = np.linspace(a, b, time_samples + 1)[1:]
    xs = np.linspace(0.0, 4.0 * math.sqrt(max(b, 1e-12)), radial_samples)
    sup_f = 0.0
    for x in xs:
        sup_f = max(sup_f, float(np.max(np.asarray(fn(x, ts)))))
    if sup_f == 0.0:
        return 0.0
    bound = (b - a) ** alpha * math.exp(-sp.gammaln(alpha + 1.0)) * sup_f
    worst = 0.0
    for x in xs:
        for t in ts:
            worst = max(worst, j_alpha(fn, float(x), float(t), alpha, n, cfg) / bound)
    return worst
