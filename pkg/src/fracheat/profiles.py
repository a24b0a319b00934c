"""Representations of the nonnegative space-time functions the package builds.

Every function vanishes for t < 0 and is radial in space, so values are
taken at (|x|, t).  Three shapes cover all constructions:

  * Separable: radial spatial profile times a piecewise-power time profile
    (optionally with a smooth cutoff window).  Paraboloid indicators live
    here too; their spatial radius depends on t, which is what the
    supports {|x|^2 < t} and {|x| < sqrt(T - t)} require.
  * Grid: sampled values, piecewise-linear in time and nearest-bucket in
    the radial coordinate.
  * Sum: finite sums of the above.

All objects are immutable and serialize to plain dicts (JSON-safe).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from fracheat.errors import DomainError, UnsupportedShapeError

__all__ = [
    "SmoothCutoff",
    "PowerPiece",
    "TimeProfile",
    "Constant1",
    "ExpPhi",
    "Paraboloid",
    "ReversedParaboloid",
    "Separable",
    "GridFunction",
    "SumFunction",
    "SpaceTimeFunction",
    "function_to_dict",
    "function_from_dict",
]


@dataclass(frozen=True)
class SmoothCutoff:
    """Multiplier that is 1 for t <= start and 0 for t >= start + width.

    Inside the window it follows the C^order smoothstep polynomial, a
    computable stand-in for the C-infinity cutoff of the constructions.
    """

    start: float
    width: float
    order: int = 3

    def __post_init__(self) -> None:
        if self.width <= 0.0 or self.order < 1:
            raise DomainError("cutoff needs width > 0 and order >= 1")

    def factor(self, t):
        t = np.asarray(t, dtype=float)
        u = np.clip((t - self.start) / self.width, 0.0, 1.0)
        out = 1.0 - _smoothstep(u, self.order)
        return float(out) if out.ndim == 0 else out

    def scaled(self, time_scale: float) -> "SmoothCutoff":
        return SmoothCutoff(self.start * time_scale, self.width * time_scale, self.order)


def _smoothstep(u, order: int):
    """The order-k smoothstep on [0, 1] (0 at 0, 1 at 1, C^k at both ends)."""
    u = np.asarray(u, dtype=float)
    k = order
    # S_k(u) = u^{k+1} * sum_j C(k+j, j) C(2k+1, k-j) (-u)^j
    out = np.zeros_like(u)
    for j in range(k + 1):
        out = out + math.comb(k + j, j) * math.comb(2 * k + 1, k - j) * (-u) ** j
    return out * u ** (k + 1)


@dataclass(frozen=True)
class PowerPiece:
    """coeff * (sign * (t - pivot))^exponent on [lo, hi), zero elsewhere.

    sign=+1 with pivot=0 is a plain power of t; sign=-1 with pivot=T gives
    the (T - t)^exponent profiles of the blow-up families.
    """

    lo: float
    hi: float
    coeff: float
    exponent: float
    pivot: float = 0.0
    sign: int = 1

    def __post_init__(self) -> None:
        if self.coeff < 0.0:
            raise DomainError("profile coefficients must be nonnegative")
        if self.lo < 0.0 or self.hi <= self.lo:
            raise DomainError(f"piece interval invalid: [{self.lo}, {self.hi})")
        if self.sign not in (-1, 1):
            raise DomainError("sign must be +1 or -1")

    def argument(self, t):
        return self.sign * (np.asarray(t, dtype=float) - self.pivot)

    def value(self, t):
        t = np.asarray(t, dtype=float)
        inside = (t >= self.lo) & (t < self.hi)
        out = np.zeros_like(t)
        if np.any(inside):
            arg = self.argument(t[inside])
            arg = np.maximum(arg, 0.0)
            with np.errstate(divide="ignore"):
                out[inside] = self.coeff * arg**self.exponent
        return out


@dataclass(frozen=True)
class TimeProfile:
    """Sum of disjoint power pieces times an optional smooth cutoff."""

    pieces: tuple
    cutoff: Optional[SmoothCutoff] = None

    def __post_init__(self) -> None:
        spans = sorted((pc.lo, pc.hi) for pc in self.pieces)
        for (a0, b0), (a1, _b1) in zip(spans, spans[1:]):
            if a1 < b0:
                raise DomainError("profile pieces must not overlap")

    @staticmethod
    def power(coeff: float, exponent: float, lo: float = 0.0, hi: float = math.inf,
              pivot: float = 0.0, sign: int = 1, cutoff: Optional[SmoothCutoff] = None) -> "TimeProfile":
        return TimeProfile((PowerPiece(lo, hi, coeff, exponent, pivot, sign),), cutoff)

    @staticmethod
    def zero() -> "TimeProfile":
        return TimeProfile(())

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for pc in self.pieces:
            out = out + pc.value(t)
        if self.cutoff is not None:
            out = out * self.cutoff.factor(t)
        out = np.where(t < 0.0, 0.0, out)
        return float(out) if out.ndim == 0 else out

    def scaled(self, amp: float, time_scale: float) -> "TimeProfile":
        """amp * profile(t / time_scale), still in closed form."""
        if amp < 0.0 or time_scale <= 0.0:
            raise DomainError("scaling needs amp >= 0 and time_scale > 0")
        pieces = tuple(
            PowerPiece(
                pc.lo * time_scale,
                pc.hi * time_scale if math.isfinite(pc.hi) else math.inf,
                pc.coeff * amp * time_scale ** (-pc.exponent),
                pc.exponent,
                pc.pivot * time_scale,
                pc.sign,
            )
            for pc in self.pieces
        )
        cutoff = self.cutoff.scaled(time_scale) if self.cutoff is not None else None
        return TimeProfile(pieces, cutoff)

    @property
    def support_end(self) -> float:
        ends = [pc.hi for pc in self.pieces]
        end = max(ends) if ends else 0.0
        if self.cutoff is not None:
            end = min(end, self.cutoff.start + self.cutoff.width)
        return end


# --- spatial profiles -------------------------------------------------------


@dataclass(frozen=True)
class Constant1:
    """The constant spatial profile 1."""

    def factor(self, x_norm, t):
        return np.ones_like(np.broadcast_arrays(np.asarray(x_norm, float), np.asarray(t, float))[0])


@dataclass(frozen=True)
class ExpPhi:
    """phi(rate * x)^power with phi(x) = exp(-(sqrt(1 + |x|^2) - 1))."""

    rate: float
    power: float = 1.0

    def __post_init__(self) -> None:
        if self.rate < 0.0 or self.power <= 0.0:
            raise DomainError("ExpPhi needs rate >= 0 and power > 0")

    def factor(self, x_norm, t):
        x = np.asarray(x_norm, dtype=float)
        val = np.exp(-self.power * (np.sqrt(1.0 + (self.rate * x) ** 2) - 1.0))
        return np.broadcast_arrays(val, np.asarray(t, dtype=float))[0]

    def scaled_space(self, space_scale: float) -> "ExpPhi":
        return ExpPhi(self.rate / space_scale, self.power)


@dataclass(frozen=True)
class Paraboloid:
    """Indicator of {|x|^2 < t}; spatial radius sqrt(t) grows with time."""

    def factor(self, x_norm, t):
        x = np.asarray(x_norm, dtype=float)
        t = np.asarray(t, dtype=float)
        return np.where((t > 0.0) & (x * x < t), 1.0, 0.0)

    def radius_at(self, t):
        return np.sqrt(np.maximum(np.asarray(t, dtype=float), 0.0))


@dataclass(frozen=True)
class ReversedParaboloid:
    """Indicator of {|x| < sqrt(t_end - t)}; shrinks toward t_end."""

    t_end: float

    def __post_init__(self) -> None:
        if self.t_end <= 0.0:
            raise DomainError("ReversedParaboloid needs t_end > 0")

    def factor(self, x_norm, t):
        x = np.asarray(x_norm, dtype=float)
        t = np.asarray(t, dtype=float)
        rad_sq = self.t_end - t
        return np.where((rad_sq > 0.0) & (x * x < rad_sq), 1.0, 0.0)

    def radius_at(self, t):
        return np.sqrt(np.maximum(self.t_end - np.asarray(t, dtype=float), 0.0))


SpatialProfile = Union[Constant1, ExpPhi, Paraboloid, ReversedParaboloid]


# --- space-time functions ---------------------------------------------------


@dataclass(frozen=True)
class Separable:
    spatial: SpatialProfile
    temporal: TimeProfile

    def __call__(self, x_norm, t):
        x = np.asarray(x_norm, dtype=float)
        t = np.asarray(t, dtype=float)
        out = self.temporal(t) * self.spatial.factor(x, t)
        out = np.asarray(out)
        return float(out) if out.ndim == 0 else out

    def scaled(self, amp: float, time_scale: float) -> "Separable":
        """amp * f(x / sqrt(time_scale), t / time_scale).

        Paraboloid indicators are invariant under this parabolic scaling;
        the reversed paraboloid maps to one with t_end * time_scale.
        """
        temporal = self.temporal.scaled(amp, time_scale)
        spatial = self.spatial
        if isinstance(spatial, ExpPhi):
            spatial = spatial.scaled_space(math.sqrt(time_scale))
        elif isinstance(spatial, ReversedParaboloid):
            spatial = ReversedParaboloid(spatial.t_end * time_scale)
        return Separable(spatial, temporal)


@dataclass(frozen=True)
class GridFunction:
    """Samples on a (time x radius) grid.

    Piecewise-linear in time between nodes, zero outside [times[0],
    times[-1]]; nearest-bucket in radius.  A single radius bucket means
    spatially constant.
    """

    times: tuple
    radii: tuple
    values: tuple  # row-major, len(times) x len(radii)

    def __post_init__(self) -> None:
        ts = np.asarray(self.times, dtype=float)
        if ts.ndim != 1 or len(ts) < 2 or np.any(np.diff(ts) <= 0.0) or ts[0] < 0.0:
            raise DomainError("grid times must be increasing and nonnegative")
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (len(self.times), len(self.radii)):
            raise DomainError("grid values must be len(times) x len(radii)")
        if np.any(vals < 0.0):
            raise DomainError("grid values must be nonnegative")

    @property
    def values_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def _radial_index(self, x_norm) -> np.ndarray:
        radii = np.asarray(self.radii, dtype=float)
        if len(radii) == 1:
            return np.zeros_like(np.asarray(x_norm, dtype=float), dtype=int)
        edges = 0.5 * (radii[1:] + radii[:-1])
        return np.searchsorted(edges, np.asarray(x_norm, dtype=float))

    def __call__(self, x_norm, t):
        x = np.asarray(x_norm, dtype=float)
        t = np.asarray(t, dtype=float)
        x, t = np.broadcast_arrays(x, t)
        ts = np.asarray(self.times, dtype=float)
        vals = self.values_array
        cols = self._radial_index(x)
        out = np.zeros_like(t)
        inside = (t >= ts[0]) & (t <= ts[-1]) & (t >= 0.0)
        if np.any(inside):
            tt = t[inside]
            cc = cols[inside]
            hi = np.clip(np.searchsorted(ts, tt), 1, len(ts) - 1)
            lo = hi - 1
            w = (tt - ts[lo]) / (ts[hi] - ts[lo])
            out[inside] = (1.0 - w) * vals[lo, cc] + w * vals[hi, cc]
        return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class SumFunction:
    terms: tuple

    def __call__(self, x_norm, t):
        out = None
        for term in self.terms:
            v = np.asarray(term(x_norm, t), dtype=float)
            out = v if out is None else out + v
        if out is None:
            out = np.zeros_like(np.asarray(t, dtype=float))
        return float(out) if out.ndim == 0 else out

    def scaled(self, amp: float, time_scale: float) -> "SumFunction":
        return SumFunction(tuple(term.scaled(amp, time_scale) for term in self.terms))


SpaceTimeFunction = Union[Separable, GridFunction, SumFunction]


# --- serialization ----------------------------------------------------------


def _spatial_to_dict(sp: SpatialProfile) -> dict:
    if isinstance(sp, Constant1):
        return {"kind": "constant1"}
    if isinstance(sp, ExpPhi):
        return {"kind": "exp_phi", "rate": sp.rate, "power": sp.power}
    if isinstance(sp, Paraboloid):
        return {"kind": "paraboloid"}
    if isinstance(sp, ReversedParaboloid):
        return {"kind": "reversed_paraboloid", "t_end": sp.t_end}
    raise UnsupportedShapeError(f"unknown spatial profile {sp!r}")


def _spatial_from_dict(data: dict) -> SpatialProfile:
    kind = data["kind"]
    if kind == "constant1":
        return Constant1()
    if kind == "exp_phi":
        return ExpPhi(rate=data["rate"], power=data["power"])
    if kind == "paraboloid":
        return Paraboloid()
    if kind == "reversed_paraboloid":
        return ReversedParaboloid(t_end=data["t_end"])
    raise UnsupportedShapeError(f"unknown spatial kind {kind!r}")


def _profile_to_dict(profile: TimeProfile) -> dict:
    out = {
        "pieces": [
            {
                "lo": pc.lo,
                "hi": pc.hi if math.isfinite(pc.hi) else None,
                "coeff": pc.coeff,
                "exponent": pc.exponent,
                "pivot": pc.pivot,
                "sign": pc.sign,
            }
            for pc in profile.pieces
        ]
    }
    if profile.cutoff is not None:
        out["cutoff"] = {
            "start": profile.cutoff.start,
            "width": profile.cutoff.width,
            "order": profile.cutoff.order,
        }
    return out


def _profile_from_dict(data: dict) -> TimeProfile:
    pieces = tuple(
        PowerPiece(
            lo=pd["lo"],
            hi=math.inf if pd["hi"] is None else pd["hi"],
            coeff=pd["coeff"],
            exponent=pd["exponent"],
            pivot=pd.get("pivot", 0.0),
            sign=pd.get("sign", 1),
        )
        for pd in data["pieces"]
    )
    cutoff = None
    if data.get("cutoff") is not None:
        cd = data["cutoff"]
        cutoff = SmoothCutoff(cd["start"], cd["width"], cd.get("order", 3))
    return TimeProfile(pieces, cutoff)


def function_to_dict(fn: SpaceTimeFunction) -> dict:
    if isinstance(fn, Separable):
        return {
            "kind": "separable",
            "spatial": _spatial_to_dict(fn.spatial),
            "temporal": _profile_to_dict(fn.temporal),
        }
    if isinstance(fn, GridFunction):
        return {
            "kind": "grid",
            "times": list(fn.times),
            "radii": list(fn.radii),
            "values": [list(row) for row in fn.values],
        }
    if isinstance(fn, SumFunction):
        return {"kind": "sum", "terms": [function_to_dict(term) for term in fn.terms]}
    raise UnsupportedShapeError(f"unknown function shape {fn!r}")


def function_from_dict(data: dict) -> SpaceTimeFunction:
    kind = data["kind"]
    if kind == "separable":
        return Separable(
            spatial=_spatial_from_dict(data["spatial"]),
            temporal=_profile_from_dict(data["temporal"]),
        )
    if kind == "grid":
        return GridFunction(
            times=tuple(data["times"]),
            radii=tuple(data["radii"]),
            values=tuple(tuple(row) for row in data["values"]),
        )
    if kind == "sum":
        return SumFunction(tuple(function_from_dict(term) for term in data["terms"]))
    raise UnsupportedShapeError(f"unknown function kind {kind!r}")
