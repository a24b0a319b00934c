"""Acceptance gate: every criterion at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS line per
criterion; any failure fails the corresponding test.
"""

import math
import time

import numpy as np
import pytest

from fracheat.bounds import delta_iteration, envelopes, exponents, sharp_constants
from fracheat.constructions import (
    blowup_large_time,
    blowup_small_time,
    exact_pair,
    intersection_P4,
    lp_norm_finite,
    mollified_pair,
    paraboloid_pair,
    pick_P1,
)
from fracheat.kernel import phi, spacetime_mass
from fracheat.params import (
    Outcome,
    ProblemParams,
    Region,
    blowup_exponents,
    classify_region,
    critical_point,
    mu,
    nu,
)
from fracheat.potential import rl_integral, rl_power
from fracheat.profiles import TimeProfile
from fracheat.special import beta_time_convolution, beta_time_convolution_quadrature
from fracheat.verifier import SampleConfig, check_system, picard_iterate

S1_BLOWUP = ProblemParams(n=1, p=1, q=1, alpha=0.5, beta=0.5, lam=2.0, sigma=1.4)
S2 = ProblemParams(n=1, p=1, q=1, alpha=1.0, beta=1.0, lam=0.5, sigma=0.5)


def _report(num: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num:>2} [{status}] {detail}")
    assert ok, f"criterion {num}: {detail}"


def test_criterion_1_rl_oracle_equivalence():
    rng = np.random.default_rng(1)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        g = float(rng.uniform(-0.9, 5.0))
        alpha = float(rng.uniform(0.1, 3.0))
        t = float(rng.uniform(0.01, 100.0))
        v = rl_integral(TimeProfile.power(1.0, g), t, alpha)
        ref = rl_power(g, t, alpha)
        worst = max(worst, abs(v - ref) / abs(ref))
    elapsed = time.perf_counter() - start
    _report(
        1,
        worst < 1e-10 and elapsed < 5.0,
        f"rl_integral vs rl_power on 200 samples: worst rel err {worst:.2e}, {elapsed:.2f}s",
    )


def test_criterion_2_beta_identity():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(100):
        a = float(rng.uniform(0.1, 3.0))
        b = float(rng.uniform(0.1, 3.0))
        t = float(rng.uniform(0.01, 100.0))
        closed = beta_time_convolution(t, a, b)
        quad = beta_time_convolution_quadrature(t, a, b)
        worst = max(worst, abs(quad - closed) / abs(closed))
    _report(2, worst < 1e-8, f"Beta identity quadrature vs closed form: worst rel err {worst:.2e}")


def test_criterion_3_kernel_mass():
    from scipy import integrate

    worst = 0.0
    T = 1.7
    for alpha in (0.25, 0.5, 1.0, 2.0):
        for n in (1, 2, 3):
            surface = 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)

            def spatial(t):
                val, _ = integrate.quad(
                    lambda rho: surface * rho ** (n - 1) * phi(rho * rho, t, alpha, n),
                    0.0,
                    10.0 * math.sqrt(t),
                    limit=200,
                )
                return val

            if alpha < 1.0:
                val, _ = integrate.quad(
                    lambda t: spatial(t) * t ** (1.0 - alpha),
                    0.0, T, weight="alg", wvar=(alpha - 1.0, 0.0), limit=200,
                )
            else:
                val, _ = integrate.quad(spatial, 0.0, T, limit=200)
            ref = spacetime_mass(0.0, T, alpha)
            worst = max(worst, abs(val - ref) / ref)
    _report(3, worst < 1e-6, f"kernel space-time mass over 12 (alpha, n) cases: worst rel err {worst:.2e}")


def test_criterion_4_exact_pair_fixed_point():
    rng = np.random.default_rng(4)
    times = np.geomspace(1e-3, 1.0, 50)
    worst_hi = 0.0
    worst_lo = math.inf
    checked = 0
    while checked < 100:
        lam = float(rng.uniform(0.2, 2.5))
        sigma = float(rng.uniform(0.1, 1.0)) * 0.9 / lam
        alpha = float(rng.uniform(0.2, 2.0))
        beta = float(rng.uniform(0.2, 2.0))
        g1, g2 = exponents(lam, sigma, alpha, beta)
        if max(g1, g2) > 60.0:
            continue  # keep t^gamma inside double range on the time ladder
        params = ProblemParams(n=1, p=1, q=1, alpha=alpha, beta=beta, lam=lam, sigma=sigma)
        pair = exact_pair(params)
        report = check_system(
            pair,
            params,
            SampleConfig(explicit_times=tuple(times), radial_points=1, tolerance=1e-8),
        )
        assert report.verdict == "certified"
        worst_hi = max(worst_hi, report.max_ratio_f, report.max_ratio_g)
        for t in times:
            den_f = params.K1 * rl_integral(pair.g.temporal, float(t), beta) ** lam
            den_g = params.K2 * rl_integral(pair.f.temporal, float(t), alpha) ** sigma
            worst_lo = min(worst_lo, pair.f(0.0, t) / den_f, pair.g(0.0, t) / den_g)
        checked += 1
    ok = worst_hi <= 1.0 + 1e-8 and worst_lo >= 1.0 - 1e-8
    _report(
        4,
        ok,
        f"exact-pair ratios on 100 instances x 50 times: in [{worst_lo:.12f}, {worst_hi:.12f}]",
    )


def test_criterion_5_sharp_constants():
    sc = sharp_constants(S2)
    ok = (
        abs(sc.M1 - 0.125) < 1e-12
        and abs(sc.M2 - 0.125) < 1e-12
        and abs(sc.u_coeff - 0.25) < 1e-12
    )
    seq = delta_iteration(S2, 40)
    errs = np.abs(seq - 0.5)
    resolvable = errs > 1e-12
    rates = errs[1:][resolvable[1:]] / errs[:-1][resolvable[1:]]
    ok = ok and abs(seq[-1] - 0.5) < 1e-12 and np.all(rates <= 0.25 + 1e-3)
    _report(
        5,
        ok,
        f"M1={sc.M1:.15f}, u-coeff={sc.u_coeff:.15f}, delta limit={seq[-1]:.15f}, "
        f"max rate={np.max(rates):.6f}",
    )


def test_criterion_6_optimality_witnesses():
    start = time.perf_counter()
    sc = sharp_constants(S2)
    pair, _spec = mollified_pair(S2, 0.9 * sc.M1, 0.9 * sc.M2, T=1.0)
    report = check_system(
        pair, S2, SampleConfig(time_points=16, radial_points=9, tolerance=1e-6)
    )
    kappa = S2.lambda_sigma / (1.0 - S2.lambda_sigma)
    target = (0.9 * sc.M1) ** kappa
    worst = 0.0
    for t in np.geomspace(1e-3, 0.999, 40):
        worst = max(worst, abs(pair.f(0.0, float(t)) / t**sc.gamma1 - target) / target)
    elapsed = time.perf_counter() - start
    ok = report.verdict == "certified" and worst < 1e-6 and elapsed < 60.0
    _report(
        6,
        ok,
        f"mollified 0.9-target: verdict {report.verdict}, rate coefficient rel err "
        f"{worst:.2e}, {elapsed:.1f}s",
    )


def test_criterion_7_global_witness():
    rng = np.random.default_rng(7)
    pair, _l1, _l2, big_n = paraboloid_pair(S2)
    sc = sharp_constants(S2)
    report = check_system(
        pair, S2, SampleConfig(time_points=12, radial_points=9, tolerance=1e-6)
    )
    floor_ok = big_n > 0.0
    for _ in range(100):
        t = float(rng.uniform(0.05, 4.0))
        x = float(rng.uniform(0.0, 0.999)) * math.sqrt(t)
        floor_ok = floor_ok and pair.f(x, t) >= big_n * t**sc.gamma1 * (1.0 - 1e-12)
        floor_ok = floor_ok and pair.g(x, t) >= big_n * t**sc.gamma2 * (1.0 - 1e-12)
    ok = report.verdict == "certified" and floor_ok
    _report(7, ok, f"paraboloid pair: verdict {report.verdict}, N={big_n:.6g}, floor holds on 100 samples")


def test_criterion_8_blowup_families():
    params = S1_BLOWUP
    _xi1, _eta1, r, s = pick_P1(params, 0.5)
    pair, _times = blowup_small_time(params, r, s, terms=4)
    lp = lp_norm_finite(pair.f.terms[0], params.p, params.n)
    lr = lp_norm_finite(pair.f.terms[1], r, params.n)
    sample_times = []
    for t_j, T_j in zip(pair.meta["times"], pair.meta["window_ends"]):
        sample_times += [t_j * 1.01, 0.5 * (t_j + T_j), T_j * 0.95]
    sample_times.append(0.5)
    report = check_system(
        pair,
        params,
        SampleConfig(explicit_times=tuple(sorted(sample_times)), radial_points=7,
                     tolerance=1e-6, horizon=1.0),
    )
    small_ok = report.verdict == "certified" and lp["finite"] and not lr["finite"]

    xi4, eta4 = intersection_P4(params)
    r0, s0_large, _ = blowup_exponents(params)
    exact_ok = (
        abs(xi4 - 4.0 / 3.0) < 1e-12
        and abs(eta4 - 7.0 / 6.0) < 1e-12
        and abs(r0 - 1.125) < 1e-12
        and abs(s0_large - 9.0 / 7.0) < 1e-12
        and abs((params.n + 2.0) / (2.0 * xi4) - r0) < 1e-12
        and abs((params.n + 2.0) / (2.0 * eta4) - s0_large) < 1e-12
    )
    pair_large, _tj = blowup_large_time(params, terms=3)
    large_meta_ok = (
        abs(pair_large.meta["xi4"] - 4.0 / 3.0) < 1e-12
        and abs(pair_large.meta["r0"] - 1.125) < 1e-12
    )
    ok = small_ok and exact_ok and large_meta_ok
    _report(
        8,
        ok,
        f"small-time verdict {report.verdict}, L^p finite {lp['finite']}, "
        f"L^r infinite {not lr['finite']}; (xi4, eta4)=({xi4:.12f}, {eta4:.12f}), "
        f"r0={r0}, s0={s0_large:.12f}",
    )


def test_criterion_9_regime_partition():
    rng = np.random.default_rng(9)
    total = 100_000
    counts = {}
    expected = {
        Region.A: Outcome.ONLY_TRIVIAL,
        Region.B: Outcome.SHARP_BOUNDS,
        Region.C: Outcome.NO_BOUNDS,
        Region.D: Outcome.NO_BOUNDS,
        Region.E: Outcome.NO_RESULT,
    }
    ns = rng.integers(1, 4, total)
    ps = rng.uniform(1.0, 2.5, total)
    qs = rng.uniform(1.0, 2.5, total)
    aus = rng.uniform(0.05, 0.95, total)
    bus = rng.uniform(0.05, 0.95, total)
    lams = rng.uniform(0.1, 6.0, total)
    sus = rng.uniform(0.01, 1.0, total)
    ok = True
    for i in range(total):
        n = int(ns[i])
        p, q = float(ps[i]), float(qs[i])
        alpha = float(aus[i]) * (n + 2) / (2 * p)
        beta = float(bus[i]) * (n + 2) / (2 * q)
        lam = float(lams[i])
        sigma = float(sus[i]) * nu(lam, n, p, q, alpha, beta)
        if sigma <= 0.0:
            continue
        params = ProblemParams(n=n, p=p, q=q, alpha=alpha, beta=beta, lam=lam, sigma=sigma)
        report = classify_region(params, normalize_first=False)
        counts[report.region] = counts.get(report.region, 0) + 1
        if report.region not in expected or report.outcome != expected[report.region]:
            ok = False
            break
    label_counts = {r.value: c for r, c in sorted(counts.items(), key=lambda kv: kv[0].value)}
    _report(9, ok, f"{total} normalized instances, one label each, outcomes match: {label_counts}")


def test_criterion_10_picard_envelope():
    env = envelopes(S2)
    trace = picard_iterate(S2, exact_pair(S2), steps=10, horizon=1.0)
    bound_f = float(env.f(1.0))
    bound_g = float(env.g(1.0))
    excess_f = float(np.max(trace.sup_f - bound_f))
    excess_g = float(np.max(trace.sup_g - bound_g))
    ok = excess_f <= 1e-6 and excess_g <= 1e-6
    _report(
        10,
        ok,
        f"10 picard steps from the envelope seed: max excess over the envelope "
        f"({excess_f:.2e}, {excess_g:.2e})",
    )
