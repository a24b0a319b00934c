"""HTTP service wrapping the library: classification, constants, construction,
verification, Picard runs, potential evaluation, and the parameter-plane atlas.

Every endpoint is a pure function of its request body, so the app is
stateless and safe behind any number of workers.  The CLI calls the same
handler functions in process; run a server with

    uvicorn fracheat.service:app
"""

from __future__ import annotations

import math
from typing import Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, ConfigDict, Field

from fracheat import constructions
from fracheat.bounds import delta_iteration, sharp_constants
from fracheat.errors import (
    DomainError,
    InfeasibleConstructionError,
    QuadratureFailure,
    UnsupportedShapeError,
)
from fracheat.params import (
    ProblemParams,
    Region,
    classify_region,
    critical_point,
    mu,
    nu,
)
from fracheat.potential import QuadratureConfig, j_alpha
from fracheat.profiles import function_from_dict
from fracheat.verifier import SampleConfig, check_system, envelope_check, picard_iterate

app = FastAPI(
    title="fracheat",
    description="Fully fractional heat potentials: regimes, sharp bounds, "
    "solution families, certification",
)


class ParamsModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    n: int = 1
    p: float = 1.0
    q: float = 1.0
    alpha: float
    beta: float
    lam: float = Field(alias="lambda")
    sigma: float
    K1: float = 1.0
    K2: float = 1.0

    def to_params(self) -> ProblemParams:
        try:
            return ProblemParams(
                n=self.n, p=self.p, q=self.q, alpha=self.alpha, beta=self.beta,
                lam=self.lam, sigma=self.sigma, K1=self.K1, K2=self.K2,
            )
        except DomainError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc

    @classmethod
    def from_params(cls, params: ProblemParams) -> "ParamsModel":
        return cls(**params.to_dict())


class QuadratureModel(BaseModel):
    time_nodes: int = 32
    singularity_split: bool = True
    spatial_truncation: float = 8.0
    target_rel_tol: float = 1e-7
    spatial_nodes: int = 64

    def to_config(self) -> QuadratureConfig:
        return QuadratureConfig(
            time_nodes=self.time_nodes,
            singularity_split=self.singularity_split,
            spatial_truncation=self.spatial_truncation,
            target_rel_tol=self.target_rel_tol,
            spatial_nodes=self.spatial_nodes,
        )


class SamplingModel(BaseModel):
    horizon: float = 1.0
    time_points: int = 32
    radial_points: int = 17
    time_span_decades: float = 3.0
    explicit_times: Optional[list[float]] = None
    tolerance: float = 1e-6
    threads: int = 1

    def to_config(self) -> SampleConfig:
        return SampleConfig(
            horizon=self.horizon,
            time_points=self.time_points,
            radial_points=self.radial_points,
            time_span_decades=self.time_span_decades,
            explicit_times=tuple(self.explicit_times) if self.explicit_times else None,
            tolerance=self.tolerance,
            threads=self.threads,
        )


class ClassifyRequest(BaseModel):
    params: ParamsModel
    boundary_tol: float = 1e-12
    normalize_first: bool = True


class RegimeReportModel(BaseModel):
    region: str
    outcome: str
    swapped: bool
    params: ParamsModel
    mu_at_lambda: Optional[float] = None
    nu_at_lambda: Optional[float] = None
    lambda0: Optional[float] = None
    sigma0: Optional[float] = None
    r0: Optional[float] = None
    s0_large_time: Optional[float] = None
    s0_small_time: Optional[float] = None
    notes: list[str] = []


@app.post("/classify", response_model=RegimeReportModel)
def classify(req: ClassifyRequest) -> RegimeReportModel:
    params = req.params.to_params()
    report = classify_region(
        params, boundary_tol=req.boundary_tol, normalize_first=req.normalize_first
    )
    return RegimeReportModel(
        region=report.region.value,
        outcome=report.outcome.value,
        swapped=report.swapped,
        params=ParamsModel.from_params(report.params),
        mu_at_lambda=report.mu_at_lambda,
        nu_at_lambda=report.nu_at_lambda,
        lambda0=report.lambda0,
        sigma0=report.sigma0,
        r0=report.r0,
        s0_large_time=report.s0_large_time,
        s0_small_time=report.s0_small_time,
        notes=list(report.notes),
    )


class ConstantsRequest(BaseModel):
    params: ParamsModel
    iteration_steps: int = 0


class ConstantsResponse(BaseModel):
    gamma1: float
    gamma2: float
    M1: float
    M2: float
    B: float
    f_coeff: float
    g_coeff: float
    u_coeff: float
    v_coeff: float
    delta_sequence: Optional[list[float]] = None


@app.post("/constants", response_model=ConstantsResponse)
def constants_endpoint(req: ConstantsRequest) -> ConstantsResponse:
    params = req.params.to_params()
    try:
        sc = sharp_constants(params)
        seq = None
        if req.iteration_steps > 0:
            seq = [float(v) for v in delta_iteration(params, req.iteration_steps)]
    except DomainError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return ConstantsResponse(**sc.to_dict(), delta_sequence=seq)


class ConstructRequest(BaseModel):
    params: ParamsModel
    kind: Literal["exact", "mollified", "paraboloid", "blowup_small", "blowup_large"]
    N1: Optional[float] = None
    N2: Optional[float] = None
    T: float = 1.0
    r: Optional[float] = None
    s: Optional[float] = None
    terms: int = 8
    epsilon_margin: float = 0.5


class SolutionDocument(BaseModel):
    params: ParamsModel
    provenance: str
    f: dict
    g: dict
    scale_factors: dict = {}
    meta: dict = {}


@app.post("/construct", response_model=SolutionDocument)
def construct(req: ConstructRequest) -> SolutionDocument:
    params = req.params.to_params()
    try:
        if req.kind == "exact":
            pair = constructions.exact_pair(params)
        elif req.kind == "mollified":
            sc = sharp_constants(params)
            n1 = req.N1 if req.N1 is not None else 0.5 * sc.M1
            n2 = req.N2 if req.N2 is not None else 0.5 * sc.M2
            pair, _spec = constructions.mollified_pair(params, n1, n2, req.T)
        elif req.kind == "paraboloid":
            pair, _l1, _l2, _n = constructions.paraboloid_pair(params)
        elif req.kind == "blowup_small":
            if req.r is None or req.s is None:
                _xi, _eta, r, s = constructions.pick_P1(params, req.epsilon_margin)
            else:
                r, s = req.r, req.s
            pair, _times = constructions.blowup_small_time(params, r, s, req.terms)
        else:
            pair, _times = constructions.blowup_large_time(
                params, req.r, req.s, req.terms
            )
    except (DomainError, InfeasibleConstructionError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    doc = pair.to_dict()
    return SolutionDocument(
        params=req.params,
        provenance=doc["provenance"],
        f=doc["f"],
        g=doc["g"],
        scale_factors=doc["scale_factors"],
        meta=doc["meta"],
    )


class VerifyRequest(BaseModel):
    solution: SolutionDocument
    sampling: SamplingModel = SamplingModel()
    quadrature: QuadratureModel = QuadratureModel()


class VerificationModel(BaseModel):
    verdict: str
    max_ratio_f: float
    max_ratio_g: float
    initial_support_ok: bool
    tolerance: float
    samples: dict
    violation: Optional[dict] = None
    failure: Optional[str] = None


@app.post("/verify", response_model=VerificationModel)
def verify(req: VerifyRequest) -> VerificationModel:
    params = req.solution.params.to_params()
    try:
        pair = constructions.SolutionPair.from_dict(req.solution.model_dump())
    except (UnsupportedShapeError, KeyError) as exc:
        raise HTTPException(status_code=422, detail=f"bad solution document: {exc}") from exc
    report = check_system(
        pair, params, req.sampling.to_config(), req.quadrature.to_config()
    )
    d = report.to_dict()
    # json cannot carry inf
    for key in ("max_ratio_f", "max_ratio_g"):
        if not math.isfinite(d[key]):
            d[key] = 1e308
    if d.get("violation"):
        d["violation"] = {
            k: (1e308 if isinstance(v, float) and not math.isfinite(v) else v)
            for k, v in d["violation"].items()
        }
    return VerificationModel(**d)


class EnvelopeCheckRequest(BaseModel):
    solution: SolutionDocument
    horizons: list[float] = [0.25, 0.5, 1.0, 2.0, 4.0]
    sampling: SamplingModel = SamplingModel()


@app.post("/envelope-check")
def envelope_check_endpoint(req: EnvelopeCheckRequest) -> dict:
    params = req.solution.params.to_params()
    pair = constructions.SolutionPair.from_dict(req.solution.model_dump())
    try:
        return envelope_check(
            pair, params, tuple(req.horizons), req.sampling.to_config()
        )
    except DomainError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


class PicardRequest(BaseModel):
    params: ParamsModel
    seed: Literal["exact", "envelope", "zero"] = "envelope"
    solution: Optional[SolutionDocument] = None
    steps: int = 10
    horizon: float = 1.0
    sampling: SamplingModel = SamplingModel()
    quadrature: QuadratureModel = QuadratureModel()


class PicardResponse(BaseModel):
    sup_f: list[float]
    sup_g: list[float]
    horizon: float
    closed_form: bool
    overflowed: bool
    coefficients: Optional[list] = None


@app.post("/picard", response_model=PicardResponse)
def picard(req: PicardRequest) -> PicardResponse:
    params = req.params.to_params()
    try:
        if req.solution is not None:
            seed = constructions.SolutionPair.from_dict(req.solution.model_dump())
        elif req.seed == "exact":
            seed = constructions.exact_pair(params)
        elif req.seed == "zero":
            from fracheat.profiles import Constant1, Separable, TimeProfile

            zf = Separable(Constant1(), TimeProfile.zero())
            seed = constructions.SolutionPair(f=zf, g=zf, provenance="zero")
        else:
            seed = constructions.exact_pair(params)  # envelope pair saturates the bounds
        trace = picard_iterate(
            params,
            seed,
            req.steps,
            req.horizon,
            req.sampling.to_config(),
            req.quadrature.to_config(),
        )
    except (DomainError, QuadratureFailure) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    return PicardResponse(**trace.to_dict())


class PotentialRequest(BaseModel):
    function: dict
    alpha: float
    n: int = 1
    points: list[tuple[float, float]]  # (|x|, t)
    quadrature: QuadratureModel = QuadratureModel()


class PotentialResponse(BaseModel):
    values: list[float]


@app.post("/potential", response_model=PotentialResponse)
def potential_endpoint(req: PotentialRequest) -> PotentialResponse:
    try:
        fn = function_from_dict(req.function)
        cfg = req.quadrature.to_config()
        values = [
            j_alpha(fn, float(x), float(t), req.alpha, req.n, cfg)
            for x, t in req.points
        ]
    except (DomainError, UnsupportedShapeError, KeyError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    except QuadratureFailure as exc:
        raise HTTPException(status_code=409, detail=str(exc)) from exc
    return PotentialResponse(values=values)


class AtlasRequest(BaseModel):
    params: ParamsModel  # lambda/sigma fields ignored for the grid
    lambda_min: float = 0.05
    lambda_max: float = 5.0
    sigma_min: float = 0.05
    sigma_max: float = 5.0
    lambda_steps: int = 100
    sigma_steps: int = 100
    include_xi_eta: bool = False


class AtlasResponse(BaseModel):
    records: list[tuple[float, float, str]]
    mu_curve: list[tuple[float, float]]
    nu_curve: list[tuple[float, float]]
    lambda0: float
    sigma0: float
    xi_eta_lines: Optional[dict] = None


@app.post("/atlas", response_model=AtlasResponse)
def atlas(req: AtlasRequest) -> AtlasResponse:
    base = req.params.to_params()
    if req.lambda_steps < 1 or req.sigma_steps < 1:
        raise HTTPException(status_code=422, detail="empty atlas range")
    if req.lambda_max < req.lambda_min or req.sigma_max < req.sigma_min:
        raise HTTPException(status_code=422, detail="empty atlas range")
    if (req.lambda_max == req.lambda_min and req.lambda_steps > 1) or (
        req.sigma_max == req.sigma_min and req.sigma_steps > 1
    ):
        raise HTTPException(status_code=422, detail="empty atlas range")
    n, p, q = base.n, base.p, base.q
    alpha, beta = base.alpha, base.beta
    try:
        lam0, sig0 = critical_point(n, p, q, alpha, beta)
    except DomainError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc

    records = []
    lams = _linspace(req.lambda_min, req.lambda_max, req.lambda_steps)
    sigs = _linspace(req.sigma_min, req.sigma_max, req.sigma_steps)
    for lam in lams:
        for sig in sigs:
            params = ProblemParams(
                n=n, p=p, q=q, alpha=alpha, beta=beta, lam=lam, sigma=sig,
                K1=base.K1, K2=base.K2,
            )
            report = classify_region(params, normalize_first=False)
            records.append((lam, sig, report.region.value))
    mu_curve = [(lam, mu(lam, n, p, alpha, beta)) for lam in lams]
    nu_curve = [(lam, nu(lam, n, p, q, alpha, beta)) for lam in lams]

    xi_eta = None
    if req.include_xi_eta:
        lam, sig = base.lam, base.sigma
        xi_eta = {
            "line_f": {"description": "xi = (eta - beta) * lambda", "beta": beta, "lambda": lam},
            "line_g": {"description": "eta = (xi - alpha) * sigma", "alpha": alpha, "sigma": sig},
        }
        if lam * sig > 1.0:
            try:
                xi4, eta4 = constructions.intersection_P4(base)
                xi_eta["intersection"] = {"xi4": xi4, "eta4": eta4}
            except (DomainError, InfeasibleConstructionError):
                pass
    return AtlasResponse(
        records=records,
        mu_curve=mu_curve,
        nu_curve=nu_curve,
        lambda0=lam0,
        sigma0=sig0,
        xi_eta_lines=xi_eta,
    )


def _linspace(lo: float, hi: float, steps: int) -> list[float]:
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}
