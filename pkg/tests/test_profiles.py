import math

import numpy as np
import pytest

from fracheat.errors import DomainError
from fracheat.profiles import (
    Constant1,
    ExpPhi,
    GridFunction,
    Paraboloid,
    PowerPiece,
    ReversedParaboloid,
    Separable,
    SmoothCutoff,
    SumFunction,
    TimeProfile,
    function_from_dict,
    function_to_dict,
)


class TestTimeProfile:
    def test_power_evaluation(self):
        prof = TimeProfile.power(2.0, 1.5)
        assert prof(4.0) == pytest.approx(2.0 * 8.0)
        assert prof(-1.0) == 0.0
        assert prof(0.0) == 0.0

    def test_vanishes_before_zero(self, rng):
        prof = TimeProfile.power(1.0, 0.3)
        ts = -rng.uniform(0, 10, 20)
        assert np.all(np.asarray(prof(ts)) == 0.0)

    def test_reversed_piece(self):
        prof = TimeProfile.power(1.0, -0.5, lo=1.0, hi=2.0, pivot=2.0, sign=-1)
        assert prof(1.5) == pytest.approx(math.sqrt(2.0))
        assert prof(0.5) == 0.0
        assert prof(2.5) == 0.0

    def test_cutoff_window(self):
        cut = SmoothCutoff(1.0, 0.5, 3)
        prof = TimeProfile.power(1.0, 0.0, hi=2.0, cutoff=cut)
        assert prof(0.7) == 1.0
        assert prof(1.6) == 0.0
        mid = prof(1.25)
        assert 0.0 < mid < 1.0
        assert cut.factor(1.25) == pytest.approx(0.5)

    def test_cutoff_smoothness_order(self):
        cut = SmoothCutoff(0.0, 1.0, 2)
        # C^2 smoothstep: first two derivatives vanish at the edges
        eps = 1e-4
        assert cut.factor(eps) == pytest.approx(1.0, abs=1e-10)
        assert cut.factor(1.0 - eps) == pytest.approx(0.0, abs=1e-10)

    def test_scaling_closed_form(self):
        prof = TimeProfile.power(3.0, 2.0, lo=0.5, hi=1.5)
        scaled = prof.scaled(amp=4.0, time_scale=2.0)
        for t in (1.2, 2.0, 2.9):
            assert scaled(t) == pytest.approx(4.0 * prof(t / 2.0), rel=1e-14)

    def test_overlapping_pieces_rejected(self):
        with pytest.raises(DomainError):
            TimeProfile(
                (PowerPiece(0.0, 2.0, 1.0, 1.0), PowerPiece(1.0, 3.0, 1.0, 1.0))
            )

    def test_negative_coefficient_rejected(self):
        with pytest.raises(DomainError):
            PowerPiece(0.0, 1.0, -1.0, 1.0)


class TestSpatialProfiles:
    def test_exp_phi_values(self):
        prof = ExpPhi(rate=2.0, power=1.0)
        assert prof.factor(0.0, 1.0) == 1.0
        x = 1.5
        expected = math.exp(-(math.sqrt(1.0 + (2.0 * x) ** 2) - 1.0))
        assert prof.factor(x, 0.0) == pytest.approx(expected, rel=1e-14)

    def test_exp_phi_power(self):
        base = ExpPhi(rate=1.0, power=1.0)
        powd = ExpPhi(rate=1.0, power=2.5)
        assert powd.factor(2.0, 0.0) == pytest.approx(base.factor(2.0, 0.0) ** 2.5, rel=1e-13)

    def test_paraboloid_indicator(self):
        ind = Paraboloid()
        assert ind.factor(0.5, 1.0) == 1.0  # 0.25 < 1
        assert ind.factor(1.5, 1.0) == 0.0
        assert ind.factor(0.0, -1.0) == 0.0

    def test_reversed_paraboloid_indicator(self):
        ind = ReversedParaboloid(t_end=2.0)
        assert ind.factor(0.5, 1.0) == 1.0  # 0.25 < 1
        assert ind.factor(1.5, 1.0) == 0.0
        assert ind.factor(0.1, 2.5) == 0.0


class TestSeparable:
    def test_evaluation_and_scaling(self):
        fn = Separable(ExpPhi(rate=0.5, power=1.0), TimeProfile.power(2.0, 1.0))
        T, amp = 4.0, 3.0
        scaled = fn.scaled(amp, T)
        for x, t in ((0.0, 1.0), (1.0, 2.0), (3.0, 0.5)):
            assert scaled(x, t) == pytest.approx(amp * fn(x / math.sqrt(T), t / T), rel=1e-13)

    def test_paraboloid_scale_invariance(self):
        fn = Separable(Paraboloid(), TimeProfile.power(1.0, -0.4, hi=1.0))
        scaled = fn.scaled(1.0, 4.0)
        # {|x/sqrt(T)|^2 < t/T} is {|x|^2 < t}
        assert scaled(1.0, 1.5) > 0.0
        assert scaled(1.3, 1.5) == 0.0

    def test_reversed_scaling_moves_t_end(self):
        fn = Separable(
            ReversedParaboloid(2.0),
            TimeProfile.power(1.0, -0.3, lo=1.0, hi=2.0, pivot=2.0, sign=-1),
        )
        scaled = fn.scaled(1.0, 3.0)
        assert isinstance(scaled.spatial, ReversedParaboloid)
        assert scaled.spatial.t_end == pytest.approx(6.0)


class TestGridFunction:
    def test_interpolation(self):
        grid = GridFunction((0.0, 1.0, 2.0), (0.0,), ((0.0,), (2.0,), (6.0,)))
        assert grid(0.0, 0.5) == pytest.approx(1.0)
        assert grid(0.0, 1.5) == pytest.approx(4.0)
        assert grid(0.0, 2.5) == 0.0
        assert grid(0.0, -0.5) == 0.0

    def test_radial_buckets(self):
        grid = GridFunction((0.0, 1.0), (0.25, 0.75), ((1.0, 3.0), (1.0, 3.0)))
        assert grid(0.1, 0.5) == pytest.approx(1.0)
        assert grid(0.6, 0.5) == pytest.approx(3.0)

    def test_validation(self):
        with pytest.raises(DomainError):
            GridFunction((1.0, 0.5), (0.0,), ((1.0,), (1.0,)))
        with pytest.raises(DomainError):
            GridFunction((0.0, 1.0), (0.0,), ((-1.0,), (1.0,)))


class TestSerialization:
    @pytest.mark.parametrize(
        "fn",
        [
            Separable(Constant1(), TimeProfile.power(0.5, 1.0)),
            Separable(ExpPhi(rate=0.1, power=0.5), TimeProfile.power(1.0, 2.0, hi=1.5, cutoff=SmoothCutoff(1.0, 0.5))),
            Separable(Paraboloid(), TimeProfile.power(1.0, -0.7, hi=1.0)),
            Separable(
                ReversedParaboloid(0.5),
                TimeProfile.power(1.0, -0.4, lo=0.25, hi=0.5, pivot=0.5, sign=-1),
            ),
            GridFunction((0.0, 1.0), (0.0, 1.0), ((0.0, 0.0), (1.0, 2.0))),
            SumFunction(
                (
                    Separable(Constant1(), TimeProfile.power(0.5, 1.0)),
                    Separable(Paraboloid(), TimeProfile.power(1.0, -0.2, hi=2.0)),
                )
            ),
        ],
    )
    def test_round_trip(self, fn, rng):
        back = function_from_dict(function_to_dict(fn))
        xs = rng.uniform(0, 2, 25)
        ts = rng.uniform(-0.5, 2.5, 25)
        for x, t in zip(xs, ts):
            assert back(float(x), float(t)) == pytest.approx(fn(float(x), float(t)), abs=1e-300)

    def test_json_compatible(self):
        import json

        fn = Separable(Paraboloid(), TimeProfile.power(1.0, -0.7, hi=1.0))
        text = json.dumps(function_to_dict(fn))
        back = function_from_dict(json.loads(text))
        assert back(0.1, 0.5) == pytest.approx(fn(0.1, 0.5))
