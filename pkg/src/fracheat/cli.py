"""Command-line front end: a thin client over the service layer.

Each subcommand builds the same request model the HTTP endpoint accepts and
either calls the handler in process (default) or POSTs it to a running
server given with --server.  Structured artifacts are JSON; plot data
(atlas grid, picard trace) is CSV with fixed, versioned columns.  Exit
codes: 0 success/certified, 1 violated, 2 usage error, 3 inconclusive or
quadrature failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import urllib.request

from fastapi import HTTPException

from fracheat import service

CSV_VERSION = "fracheat-csv-1"

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=1, help="spatial dimension")
    parser.add_argument("--p", type=float, default=1.0)
    parser.add_argument("--q", type=float, default=1.0)
    parser.add_argument("--alpha", type=float, required=True)
    parser.add_argument("--beta", type=float, required=True)
    parser.add_argument("--lambda", dest="lam", type=float, required=True)
    parser.add_argument("--sigma", type=float, required=True)
    parser.add_argument("--K1", type=float, default=1.0)
    parser.add_argument("--K2", type=float, default=1.0)
    parser.add_argument("--params-json", type=str, default=None,
                        help="JSON file with the parameter fields (overrides flags)")


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", "-o", type=str, default=None, help="output file")
    parser.add_argument("--server", type=str, default=None,
                        help="base URL of a running service; default is in-process")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (fallback: FRACHEAT_THREADS)")
    parser.add_argument("--format", choices=("json", "csv"), default=None)


def _params_model(args) -> service.ParamsModel:
    if args.params_json:
        with open(args.params_json) as fh:
            data = json.load(fh)
        return service.ParamsModel.model_validate(data)
    return service.ParamsModel(
        n=args.n, p=args.p, q=args.q, alpha=args.alpha, beta=args.beta,
        lam=args.lam, sigma=args.sigma, K1=args.K1, K2=args.K2,
    )


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("FRACHEAT_THREADS")
    return max(1, int(env)) if env else 1


def _call(args, route: str, handler, request_model):
    """Dispatch a request either in process or to a remote server."""
    if args.server:
        url = args.server.rstrip("/") + route
        body = request_model.model_dump_json(by_alias=True).encode()
        req = urllib.request.Request(
            url, data=body, headers={"Content-Type": "application/json"}
        )
        with urllib.request.urlopen(req) as resp:
            return json.loads(resp.read())
    result = handler(request_model)
    if hasattr(result, "model_dump"):
        return result.model_dump(by_alias=True)
    return result


def _emit(args, payload: dict, default_name: str) -> None:
    text = json.dumps(payload, indent=2, default=_json_default)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _json_default(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return 1e308 if obj > 0 else -1e308
    raise TypeError(f"not JSON serializable: {obj!r}")


def _emit_csv(args, header: list, rows: list, config: dict) -> None:
    lines = [f"# {CSV_VERSION}", "# config: " + json.dumps(config, default=_json_default)]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(str(v) for v in row))
    text = "\n".join(lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        print(text, end="")


def cmd_classify(args) -> int:
    req = service.ClassifyRequest(
        params=_params_model(args),
        boundary_tol=args.boundary_tol,
        normalize_first=not args.no_normalize,
    )
    out = _call(args, "/classify", service.classify, req)
    out["config"] = json.loads(req.model_dump_json(by_alias=True))
    _emit(args, out, "classify.json")
    return EXIT_OK


def cmd_constants(args) -> int:
    req = service.ConstantsRequest(
        params=_params_model(args), iteration_steps=args.iteration_steps
    )
    out = _call(args, "/constants", service.constants_endpoint, req)
    out["config"] = json.loads(req.model_dump_json(by_alias=True))
    _emit(args, out, "constants.json")
    return EXIT_OK


def cmd_construct(args) -> int:
    req = service.ConstructRequest(
        params=_params_model(args),
        kind=args.kind,
        N1=args.N1,
        N2=args.N2,
        T=args.T,
        r=args.r,
        s=args.s,
        terms=args.terms,
        epsilon_margin=args.epsilon_margin,
    )
    out = _call(args, "/construct", service.construct, req)
    _emit(args, out, "solution.json")
    return EXIT_OK


def cmd_verify(args) -> int:
    with open(args.solution) as fh:
        doc = json.load(fh)
    req = service.VerifyRequest(
        solution=service.SolutionDocument.model_validate(doc),
        sampling=service.SamplingModel(
            horizon=args.horizon,
            time_points=args.time_points,
            radial_points=args.radial_points,
            tolerance=args.tolerance,
            threads=_threads(args),
            explicit_times=_window_times(doc) if args.sample_windows else None,
        ),
        quadrature=service.QuadratureModel(target_rel_tol=args.quad_tol),
    )
    out = _call(args, "/verify", service.verify, req)
    out["config"] = json.loads(req.sampling.model_dump_json())
    _emit(args, out, "verify.json")
    verdict = out["verdict"]
    if verdict == "certified":
        return EXIT_OK
    if verdict == "violated":
        return EXIT_VIOLATED
    return EXIT_INCONCLUSIVE


def _window_times(doc: dict) -> list:
    """Sample times targeted at a blow-up pair's window sequence."""
    times = doc.get("meta", {}).get("times")
    ends = doc.get("meta", {}).get("window_ends")
    if not times:
        return None
    out = []
    for t_j, T_j in zip(times, ends or [2.0 * t for t in times]):
        out.extend([t_j * 1.01, 0.5 * (t_j + T_j), T_j * 0.95])
    out.append(0.5)
    return sorted(out)


def cmd_picard(args) -> int:
    req = service.PicardRequest(
        params=_params_model(args),
        seed=args.seed,
        steps=args.steps,
        horizon=args.horizon,
    )
    out = _call(args, "/picard", service.picard, req)
    if (args.format or "csv") == "csv":
        rows = [
            (k, sf, sg)
            for k, (sf, sg) in enumerate(zip(out["sup_f"], out["sup_g"]))
        ]
        _emit_csv(
            args,
            ["step", "sup_f", "sup_g"],
            rows,
            json.loads(req.model_dump_json(by_alias=True)),
        )
    else:
        out["config"] = json.loads(req.model_dump_json(by_alias=True))
        _emit(args, out, "picard.json")
    return EXIT_OK


def cmd_potential(args) -> int:
    with open(args.function) as fh:
        fn_doc = json.load(fh)
    points = [tuple(float(v) for v in pt.split(",")) for pt in args.at]
    req = service.PotentialRequest(
        function=fn_doc, alpha=args.alpha, n=args.n, points=points
    )
    out = _call(args, "/potential", service.potential_endpoint, req)
    out["points"] = points
    out["config"] = {"alpha": args.alpha, "n": args.n}
    _emit(args, out, "potential.json")
    return EXIT_OK


def cmd_sweep_atlas(args) -> int:
    req = service.AtlasRequest(
        params=_params_model(args),
        lambda_min=args.lambda_min,
        lambda_max=args.lambda_max,
        sigma_min=args.sigma_min,
        sigma_max=args.sigma_max,
        lambda_steps=args.lambda_steps,
        sigma_steps=args.sigma_steps,
        include_xi_eta=args.xi_eta,
    )
    out = _call(args, "/atlas", service.atlas, req)
    config = json.loads(req.model_dump_json(by_alias=True))
    if (args.format or "csv") == "csv":
        rows = [(lam, sig, region) for lam, sig, region in out["records"]]
        rows += [(lam, m, "mu-curve") for lam, m in out["mu_curve"]]
        rows += [(lam, v, "nu-curve") for lam, v in out["nu_curve"]]
        rows.append((out["lambda0"], out["sigma0"], "critical-point"))
        _emit_csv(args, ["lambda", "sigma", "region"], rows, config)
    else:
        out["config"] = config
        _emit(args, out, "atlas.json")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracheat",
        description="Fully fractional heat potentials: regimes, sharp bounds, "
        "solution families, certification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify an instance into its regime")
    _add_param_flags(p)
    _add_common_flags(p)
    p.add_argument("--boundary-tol", type=float, default=1e-12)
    p.add_argument("--no-normalize", action="store_true",
                   help="keep the given orientation; sigma > nu(lambda) reports OffDomain")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("constants", help="sharp constants, envelopes, delta iteration")
    _add_param_flags(p)
    _add_common_flags(p)
    p.add_argument("--iteration-steps", type=int, default=0)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("construct", help="build a solution pair and write its JSON document")
    _add_param_flags(p)
    _add_common_flags(p)
    p.add_argument("--kind", required=True,
                   choices=("exact", "mollified", "paraboloid", "blowup_small", "blowup_large"))
    p.add_argument("--N1", type=float, default=None)
    p.add_argument("--N2", type=float, default=None)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--r", type=float, default=None)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--terms", type=int, default=8)
    p.add_argument("--epsilon-margin", type=float, default=0.5)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="check a solution document against the system")
    _add_common_flags(p)
    p.add_argument("solution", help="solution JSON document")
    p.add_argument("--horizon", type=float, default=1.0)
    p.add_argument("--time-points", type=int, default=32)
    p.add_argument("--radial-points", type=int, default=17)
    p.add_argument("--tolerance", type=float, default=1e-6)
    p.add_argument("--quad-tol", type=float, default=1e-7)
    p.add_argument("--sample-windows", action="store_true",
                   help="target samples at a blow-up pair's window sequence")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("picard", help="run the Picard iteration and write the trace")
    _add_param_flags(p)
    _add_common_flags(p)
    p.add_argument("--seed", choices=("exact", "envelope", "zero"), default="envelope")
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--horizon", type=float, default=1.0)
    p.set_defaults(func=cmd_picard)

    p = sub.add_parser("potential", help="evaluate J_alpha of a serialized function")
    _add_common_flags(p)
    p.add_argument("function", help="function JSON document")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--at", nargs="+", required=True, metavar="X,T",
                   help="evaluation points as |x|,t pairs")
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("sweep-atlas", help="regime labels on a (lambda, sigma) grid")
    _add_param_flags(p)
    _add_common_flags(p)
    p.add_argument("--lambda-min", type=float, default=0.05)
    p.add_argument("--lambda-max", type=float, default=5.0)
    p.add_argument("--sigma-min", type=float, default=0.05)
    p.add_argument("--sigma-max", type=float, default=5.0)
    p.add_argument("--lambda-steps", type=int, default=100)
    p.add_argument("--sigma-steps", type=int, default=100)
    p.add_argument("--xi-eta", action="store_true",
                   help="include the xi-eta wedge lines for the given (lambda, sigma)")
    p.set_defaults(func=cmd_sweep_atlas)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except HTTPException as exc:
        _print_error(exc.detail, exc.status_code)
        return EXIT_USAGE if exc.status_code == 422 else EXIT_INCONCLUSIVE
    except FileNotFoundError as exc:
        _print_error(str(exc), 2)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - defensive
        _print_error(f"{type(exc).__name__}: {exc}", 500)
        return EXIT_INCONCLUSIVE


def _print_error(detail, code) -> None:
    print(json.dumps({"error": {"detail": str(detail), "status": code}}), file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
