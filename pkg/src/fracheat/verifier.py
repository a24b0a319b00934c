"""Certification of candidate pairs and the Picard iteration.

check_system samples both inequality ratios of the system on a space-time
lattice with the potentials computed by quadrature; envelope_check compares
sampled suprema against the sharp envelopes; picard_iterate applies
(f, g) -> (K1 (J_beta g)^lam, K2 (J_alpha f)^sigma) as dynamic evidence,
staying in closed form for spatially constant power pairs and falling back
to a sampled grid otherwise.

Reports are deterministic: identical inputs and configs give identical
output, and the optional thread pool preserves evaluation order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from fracheat.bounds import envelopes, sharp_constants
from fracheat.constructions import SolutionPair
from fracheat.errors import DomainError, QuadratureFailure
from fracheat.params import ProblemParams
from fracheat.potential import DEFAULT_CONFIG, QuadratureConfig, j_alpha, rl_power
from fracheat.profiles import (
    Constant1,
    GridFunction,
    Separable,
    SpaceTimeFunction,
    TimeProfile,
)

__all__ = [
    "SampleConfig",
    "VerificationReport",
    "check_system",
    "envelope_check",
    "PicardTrace",
    "picard_iterate",
]


@dataclass(frozen=True)
class SampleConfig:
    """Space-time sample lattice: log-spaced times, linear radial shells."""

    horizon: float = 1.0
    time_points: int = 32
    radial_points: int = 17
    time_span_decades: float = 3.0
    explicit_times: Optional[tuple] = None
    tolerance: float = 1e-6
    threads: int = 1

    def times(self) -> np.ndarray:
        if self.explicit_times is not None:
            return np.asarray(self.explicit_times, dtype=float)
        lo = self.horizon * 10.0 ** (-self.time_span_decades)
        return np.geomspace(lo, self.horizon, self.time_points)

    def radii(self) -> np.ndarray:
        return np.linspace(0.0, 4.0 * math.sqrt(self.horizon), self.radial_points)

    def to_dict(self) -> dict:
        return {
            "horizon": self.horizon,
            "time_points": self.time_points,
            "radial_points": self.radial_points,
            "time_span_decades": self.time_span_decades,
            "explicit_times": list(self.explicit_times) if self.explicit_times else None,
            "tolerance": self.tolerance,
            "threads": self.threads,
        }


@dataclass(frozen=True)
class VerificationReport:
    verdict: str  # certified | violated | inconclusive
    max_ratio_f: float
    max_ratio_g: float
    initial_support_ok: bool
    tolerance: float
    samples: dict
    violation: Optional[dict] = None
    failure: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "max_ratio_f": self.max_ratio_f,
            "max_ratio_g": self.max_ratio_g,
            "initial_support_ok": self.initial_support_ok,
            "tolerance": self.tolerance,
            "samples": dict(self.samples),
            "violation": self.violation,
            "failure": self.failure,
        }


def _ordered_map(fn, items, threads: int):
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def check_system(
    pair: SolutionPair,
    params: ProblemParams,
    sample_cfg: SampleConfig = SampleConfig(),
    quad_cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> VerificationReport:
    """Sample both inequality ratios of the system and return a verdict.

    Ratios are f / (K1 (J_beta g)^lam) and g / (K2 (J_alpha f)^sigma); a
    zero denominator demands a zero numerator.  Certified requires all
    ratios <= 1 + tolerance and the zero initial condition on t < 0.
    """
    times = sample_cfg.times()
    radii = sample_cfg.radii()
    tol = sample_cfg.tolerance

    support_ok = True
    for t_neg in (-1.0, -1e-6, -sample_cfg.horizon):
        for x in (0.0, radii[-1]):
            if pair.f(x, t_neg) != 0.0 or pair.g(x, t_neg) != 0.0:
                support_ok = False

    points = [(float(x), float(t)) for t in times for x in radii]

    def ratios(point):
        x, t = point
        fv = float(pair.f(x, t))
        gv = float(pair.g(x, t))
        den_f = params.K1 * j_alpha(pair.g, x, t, params.beta, params.n, quad_cfg) ** params.lam
        den_g = params.K2 * j_alpha(pair.f, x, t, params.alpha, params.n, quad_cfg) ** params.sigma
        rf = _ratio(fv, den_f)
        rg = _ratio(gv, den_g)
        return rf, rg

    try:
        results = _ordered_map(ratios, points, sample_cfg.threads)
    except QuadratureFailure as exc:
        return VerificationReport(
            verdict="inconclusive",
            max_ratio_f=math.nan,
            max_ratio_g=math.nan,
            initial_support_ok=support_ok,
            tolerance=tol,
            samples=sample_cfg.to_dict(),
            failure=str(exc),
        )

    max_f = max(r[0] for r in results)
    max_g = max(r[1] for r in results)
    violation = None
    if max_f > 1.0 + tol or max_g > 1.0 + tol or not support_ok:
        worst = max(range(len(results)), key=lambda i: max(results[i]))
        violation = {
            "x": points[worst][0],
            "t": points[worst][1],
            "ratio_f": results[worst][0],
            "ratio_g": results[worst][1],
        }
        verdict = "violated"
    else:
        verdict = "certified"
    return VerificationReport(
        verdict=verdict,
        max_ratio_f=max_f,
        max_ratio_g=max_g,
        initial_support_ok=support_ok,
        tolerance=tol,
        samples=sample_cfg.to_dict(),
        violation=violation,
    )


def _ratio(num: float, den: float) -> float:
    if den == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return num / den


def envelope_check(
    pair: SolutionPair,
    params: ProblemParams,
    horizons: tuple = (0.25, 0.5, 1.0, 2.0, 4.0),
    sample_cfg: SampleConfig = SampleConfig(),
) -> dict:
    """Worst sampled sup-norm margin against the sharp envelopes.

    For each horizon T the sampled supremum of f (resp. g) on (0, T) is
    divided by the envelope value; margins <= 1 + tolerance are consistent
    with the bounds, and the saturating pair has margin exactly 1.
    """
    env = envelopes(params)
    radii = sample_cfg.radii()
    worst_f = 0.0
    worst_g = 0.0
    per_horizon = {}
    for T in horizons:
        times = np.geomspace(T * 1e-3, T, sample_cfg.time_points)
        sup_f = max(float(np.max(np.asarray(pair.f(x, times)))) for x in radii)
        sup_g = max(float(np.max(np.asarray(pair.g(x, times)))) for x in radii)
        mf = sup_f / float(env.f(T))
        mg = sup_g / float(env.g(T))
        per_horizon[T] = {"f": mf, "g": mg}
        worst_f = max(worst_f, mf)
        worst_g = max(worst_g, mg)
    return {
        "worst_margin_f": worst_f,
        "worst_margin_g": worst_g,
        "per_horizon": per_horizon,
    }


@dataclass(frozen=True)
class PicardTrace:
    sup_f: np.ndarray  # per step, sup norm on (0, horizon)
    sup_g: np.ndarray
    horizon: float
    closed_form: bool
    overflowed: bool = False  # growth past float range: blow-up evidence, not a proof
    coefficients: Optional[list] = None  # (coeff, exponent) pairs when closed-form

    def to_dict(self) -> dict:
        return {
            "sup_f": [float(v) for v in self.sup_f],
            "sup_g": [float(v) for v in self.sup_g],
            "horizon": self.horizon,
            "closed_form": self.closed_form,
            "overflowed": self.overflowed,
            "coefficients": self.coefficients,
        }


def _as_power(fn: SpaceTimeFunction) -> Optional[tuple[float, float]]:
    """(coeff, exponent) when fn is spatially constant c * t^e on all of t > 0."""
    if not isinstance(fn, Separable) or not isinstance(fn.spatial, Constant1):
        return None
    prof = fn.temporal
    if prof.cutoff is not None or len(prof.pieces) != 1:
        return None
    pc = prof.pieces[0]
    if pc.sign != 1 or pc.pivot != 0.0 or pc.lo != 0.0 or math.isfinite(pc.hi):
        return None
    return pc.coeff, pc.exponent


def picard_iterate(
    params: ProblemParams,
    seed: SolutionPair,
    steps: int,
    horizon: float = 1.0,
    sample_cfg: SampleConfig = SampleConfig(),
    quad_cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> PicardTrace:
    """Iterate (f, g) -> (K1 (J_beta g)^lam, K2 (J_alpha f)^sigma).

    Power seeds (spatially constant c t^e) iterate in closed form, so the
    recorded sup norms are exact; other seeds are resampled onto the
    lattice each step.  Overflow is recorded as blow-up evidence.
    """
    if steps < 1:
        raise DomainError("picard_iterate needs steps >= 1")
    lam, sigma = params.lam, params.sigma
    fpow = _as_power(seed.f)
    gpow = _as_power(seed.g)

    if fpow is not None and gpow is not None:
        sup_f = [fpow[0] * horizon ** fpow[1] if fpow[0] else 0.0]
        sup_g = [gpow[0] * horizon ** gpow[1] if gpow[0] else 0.0]
        coeffs = [(fpow, gpow)]
        cf, ef = fpow
        cg, eg = gpow
        overflow = False
        for _ in range(steps):
            try:
                new_cf = params.K1 * (cg * math.exp(_log_b(params.beta, eg))) ** lam if cg > 0.0 else 0.0
                new_ef = (params.beta + eg) * lam
                new_cg = params.K2 * (cf * math.exp(_log_b(params.alpha, ef))) ** sigma if cf > 0.0 else 0.0
                new_eg = (params.alpha + ef) * sigma
                cf, ef, cg, eg = new_cf, new_ef, new_cg, new_eg
                sf = cf * horizon**ef if cf else 0.0
                sg = cg * horizon**eg if cg else 0.0
                if not (math.isfinite(sf) and math.isfinite(sg)):
                    overflow = True
                    break
                sup_f.append(sf)
                sup_g.append(sg)
                coeffs.append(((cf, ef), (cg, eg)))
            except OverflowError:
                overflow = True
                break
        return PicardTrace(
            sup_f=np.asarray(sup_f),
            sup_g=np.asarray(sup_g),
            horizon=horizon,
            closed_form=True,
            overflowed=overflow,
            coefficients=[
                {"f": {"coeff": c[0][0], "exponent": c[0][1]},
                 "g": {"coeff": c[1][0], "exponent": c[1][1]}}
                for c in coeffs
            ],
        )

    # grid path: resample onto the lattice every step
    cfg = replace(sample_cfg, horizon=horizon)
    times = np.concatenate(([0.0], cfg.times()))
    radii = cfg.radii()
    f_cur: SpaceTimeFunction = seed.f
    g_cur: SpaceTimeFunction = seed.g
    sup_f = [_lattice_sup(f_cur, radii, times)]
    sup_g = [_lattice_sup(g_cur, radii, times)]
    overflow = False
    for _ in range(steps):
        f_vals = np.empty((len(times), len(radii)))
        g_vals = np.empty((len(times), len(radii)))
        for i, t in enumerate(times):
            for k, x in enumerate(radii):
                jf = j_alpha(f_cur, float(x), float(t), params.alpha, params.n, quad_cfg)
                jg = j_alpha(g_cur, float(x), float(t), params.beta, params.n, quad_cfg)
                f_vals[i, k] = params.K1 * jg**lam
                g_vals[i, k] = params.K2 * jf**sigma
        if not (np.all(np.isfinite(f_vals)) and np.all(np.isfinite(g_vals))):
            overflow = True
            break
        f_cur = GridFunction(tuple(times), tuple(radii), tuple(map(tuple, f_vals)))
        g_cur = GridFunction(tuple(times), tuple(radii), tuple(map(tuple, g_vals)))
        sup_f.append(float(np.max(f_vals)))
        sup_g.append(float(np.max(g_vals)))
    return PicardTrace(
        sup_f=np.asarray(sup_f),
        sup_g=np.asarray(sup_g),
        horizon=horizon,
        closed_form=False,
        overflowed=overflow,
    )


def _log_b(order: float, exponent: float) -> float:
    """log of Gamma(e+1)/Gamma(order+e+1), the power-law response of J."""
    from scipy.special import gammaln

    return float(gammaln(exponent + 1.0) - gammaln(order + exponent + 1.0))


def _lattice_sup(fn: SpaceTimeFunction, radii: np.ndarray, times: np.ndarray) -> float:
    return max(float(np.max(np.asarray(fn(x, times)))) for x in radii)
