"""Command-line front end.

Subcommands write JSON (inspect, gibbs, infer) or CSV (curves, toeplitz) to
stdout or ``--out``. Library errors map to exit codes through their
``exit_code`` attribute and are reported as ``ErrorName: message`` on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameter, NHThermoError, ParseError
from .geometry import joint_hull, numerical_range_boundary, theta_grid
from .gibbs import ObservablePair, gibbs_state, observable_pair
from .maxent import SolverConfig, ThermalTarget, gamma_beta0, gamma_theta, infer, infer_by_intersection
from .matrixio import read_matrix
from .metric import pseudo_hermiticity_residual
from .models import example1, shape_certificate, toeplitz_model, toeplitz_sweep

DEFAULT_BETA0 = (0.1, 0.5, 1.0, 1.5, 2.0, 4.0, 8.0, 16.0, 32.0)
DEFAULT_THETA = tuple(k * math.pi / 8.0 for k in range(1, 9))
DEFAULT_D = (0.0, math.sqrt(7.0) / 4.0)


@dataclass
class ModelSpec:
    source: str  # "example1", "toeplitz" or "files"
    parameters: dict = field(default_factory=dict)

    def build(self) -> ObservablePair:
        if self.source == "example1":
            return example1()
        if self.source == "toeplitz":
            p = self.parameters
            return toeplitz_model(p["n"], p["d"], two_charge=p.get("two_charge", False))[1]
        h = read_matrix(self.parameters["h_file"])
        k_file = self.parameters.get("k_file")
        k = read_matrix(k_file) if k_file else h
        return observable_pair(h, k)


def model_spec(args) -> ModelSpec:
    has_files = args.h_file is not None or args.k_file is not None
    if has_files and args.model is not None:
        raise ParseError("give either --model or --h-file/--k-file, not both")
    if has_files:
        if args.h_file is None:
            raise ParseError("--k-file needs --h-file")
        return ModelSpec("files", {"h_file": args.h_file, "k_file": args.k_file})
    name = args.model or "example1"
    if name == "example1":
        return ModelSpec("example1")
    ds = args.d or [0.0]
    if len(ds) != 1:
        raise ParseError("this subcommand takes a single --d")
    return ModelSpec("toeplitz", {"n": args.n, "d": ds[0], "two_charge": args.two_charge})


def _fmt(x) -> str:
    if x is None:
        return ""
    return format(float(x) + 0.0, ".17g")  # + 0.0 turns -0 into 0


class _Output:
    def __init__(self, path):
        self.path = path
        self.lines: list[str] = []

    def write(self, line: str):
        self.lines.append(line)

    def close(self):
        text = "\n".join(self.lines) + "\n"
        if self.path in (None, "-"):
            sys.stdout.write(text)
        else:
            with open(self.path, "w") as fh:
                fh.write(text)


def _emit_json(args, obj):
    out = _Output(args.out)
    out.write(json.dumps(obj, indent=2, sort_keys=True))
    out.close()


def cmd_inspect(args) -> int:
    pair = model_spec(args).build()
    es = pair.eigensystem
    h, k = np.asarray(pair.h), np.asarray(pair.k)
    rng = np.random.default_rng(args.seed)
    psi = rng.standard_normal((100, pair.dim)) + 1j * rng.standard_normal((100, pair.dim))
    d = np.asarray(pair.metric.matrix)
    quad = np.einsum("ij,jk,ik->i", psi.conj(), d, psi).real / np.einsum("ij,ij->i", psi.conj(), psi).real
    report = {
        "dim": pair.dim,
        "eigenvalues": es.eigenvalues.tolist(),
        "charges": pair.charges.tolist(),
        "source_residual": es.source_residual,
        "biorthogonality_residual": es.biorthogonality_residual(),
        "completeness_residual": es.completeness_residual(),
        "metric_min_eigenvalue": pair.metric.min_eigenvalue,
        "metric_is_identity": bool(np.allclose(d, np.eye(pair.dim), rtol=0, atol=1e-12)),
        "d_hermitian_residual_h": pseudo_hermiticity_residual(pair.metric, h),
        "d_hermitian_residual_k": pseudo_hermiticity_residual(pair.metric, k),
        "commutator_norm": float(np.linalg.norm(h @ k - k @ h)),
        "min_metric_rayleigh_quotient": float(quad.min()),
        "seed": args.seed,
    }
    _emit_json(args, report)
    return 0


def cmd_gibbs(args) -> int:
    pair = model_spec(args).build()
    st = gibbs_state(pair, args.beta, args.zeta)
    _emit_json(args, st.as_record())
    return 0


def cmd_infer(args) -> int:
    if args.target_h is None or args.target_k is None:
        raise ParseError("infer needs --target-h and --target-k")
    pair = model_spec(args).build()
    cfg = SolverConfig(tol=args.tol)
    target = ThermalTarget(args.target_h, args.target_k)
    if args.solver == "intersection":
        beta0, theta = infer_by_intersection(pair, target, cfg)
        beta, zeta = beta0 * math.cos(theta), beta0 * math.sin(theta)
        st = gibbs_state(pair, beta, zeta)
        record = {
            "beta": beta,
            "zeta": zeta,
            "beta0": beta0,
            "theta": theta,
            "mean_h": st.mean_h,
            "mean_k": st.mean_k,
            "entropy": st.entropy,
            "solver": "intersection",
        }
    else:
        record = infer(pair, target, cfg).as_record()
    _emit_json(args, record)
    return 0


def _curve_rows(series, samples):
    for s in samples:
        yield [series, _fmt(s.beta0), _fmt(s.theta), _fmt(s.x), _fmt(s.y), _fmt(s.entropy)]


def _theta_set(thetas):
    """Angles plus their opposites (negative radii), wrapped to [-pi, pi), sorted and deduplicated."""
    seen = {}
    for t in thetas:
        for v in (t, t - math.pi):
            w = (v + math.pi) % (2.0 * math.pi) - math.pi
            seen.setdefault(round(w, 12), w)
    return [seen[key] for key in sorted(seen)]


def cmd_curves(args) -> int:
    pair = model_spec(args).build()
    beta0s = args.beta0 or list(DEFAULT_BETA0)
    thetas = args.theta or list(DEFAULT_THETA)
    if any(b < 0 for b in beta0s):
        raise InvalidParameter("--beta0 values must be non-negative; use --theta for direction")
    grid = theta_grid(args.grid)
    radii = np.linspace(0.0, args.beta0_max, args.radii)
    out = _Output(args.out)
    out.write("series,beta0,theta,x,y,entropy")
    for b in beta0s:
        samples = gamma_beta0(pair, b, [0.0] if b == 0 else grid)
        for row in _curve_rows("gamma_beta0", samples):
            out.write(",".join(row))
    for t in _theta_set(thetas):
        for row in _curve_rows("gamma_theta", gamma_theta(pair, t, radii)):
            out.write(",".join(row))
    for x, y in joint_hull(pair).boundary_polyline():
        out.write(",".join(["hull", "", "", _fmt(x), _fmt(y), ""]))
    fov = numerical_range_boundary(np.asarray(pair.h) + 1j * np.asarray(pair.k), grid)
    for x, y in fov:
        out.write(",".join(["fov", "", "", _fmt(x), _fmt(y), ""]))
    out.close()
    return 0


def cmd_toeplitz(args) -> int:
    if args.beta_step <= 0 or args.beta_max < args.beta_min:
        raise InvalidParameter("need beta_step > 0 and beta_max >= beta_min")
    count = int(math.floor((args.beta_max - args.beta_min) / args.beta_step + 1e-9)) + 1
    betas = [round(args.beta_min + i * args.beta_step, 12) for i in range(count)]
    ds = args.d or list(DEFAULT_D)
    sweeps = [toeplitz_sweep(args.n, d, betas) for d in ds]
    out = _Output(args.out)
    for rows in sweeps:
        if len(rows) >= 3:
            c = shape_certificate(rows)
            out.write(
                f"# n={args.n} d={_fmt(c.d)} log_z_convex={str(c.log_z_convex).lower()} "
                f"min_second_difference={_fmt(c.min_log_z_second_difference)} "
                f"entropy_concave={str(c.entropy_concave).lower()} "
                f"max_second_difference={_fmt(c.max_entropy_second_difference)} tol={_fmt(c.tol)}"
            )
    out.write("d,beta,log_z_exact,log_z_em_approx,rel_error,mean_h,entropy")
    for rows in sweeps:
        for r in rows:
            out.write(
                ",".join(
                    _fmt(v) for v in (r.d, r.beta, r.log_z_exact, r.log_z_em_approx, r.rel_error, r.mean_h, r.entropy)
                )
            )
    out.close()
    return 0


def _add_model_flags(p, multi_d=False):
    p.add_argument("--model", choices=["example1", "toeplitz"], help="built-in model (default example1)")
    p.add_argument("--h-file", help="H as matrix JSON")
    p.add_argument("--k-file", help="K as matrix JSON (defaults to H)")
    p.add_argument("--n", type=int, default=50, help="Toeplitz size")
    p.add_argument(
        "--d", type=float, action="append", help="Toeplitz non-Hermiticity" + (" (repeatable)" if multi_d else "")
    )
    p.add_argument("--two-charge", action="store_true", help="Toeplitz charge K^2/4 instead of K")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nhthermo", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized diagnostics")
    common.add_argument("--tol", type=float, default=1e-10, help="solver residual tolerance (hull-diameter units)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", parents=[common], help="spectral diagnostics as JSON")
    _add_model_flags(p)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("gibbs", parents=[common], help="Gibbs state scalars as JSON")
    _add_model_flags(p)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--zeta", type=float, default=0.0)
    p.set_defaults(func=cmd_gibbs)

    p = sub.add_parser("infer", parents=[common], help="multipliers from target expectations")
    _add_model_flags(p)
    p.add_argument("--target-h", type=float)
    p.add_argument("--target-k", type=float)
    p.add_argument("--solver", choices=["newton", "intersection"], default="newton")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("curves", parents=[common], help="fixed-radius and fixed-angle curves as CSV")
    _add_model_flags(p)
    p.add_argument("--beta0", type=float, action="append", help="radius of a fixed-radius curve (repeatable)")
    p.add_argument("--theta", type=float, action="append", help="angle of a fixed-angle curve (repeatable)")
    p.add_argument("--grid", type=int, default=512, help="angle samples per fixed-radius curve")
    p.add_argument("--beta0-max", type=float, default=32.0, help="largest radius on fixed-angle curves")
    p.add_argument("--radii", type=int, default=129, help="radius samples per fixed-angle curve")
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("toeplitz", parents=[common], help="Toeplitz partition-function sweep as CSV")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--d", type=float, action="append", help="non-Hermiticity (repeatable)")
    p.add_argument("--beta-min", type=float, default=-2.0)
    p.add_argument("--beta-max", type=float, default=2.0)
    p.add_argument("--beta-step", type=float, default=0.05)
    p.set_defaults(func=cmd_toeplitz)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NHThermoError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OverflowError as exc:
        print(f"InvalidParameter: {exc}", file=sys.stderr)
        return InvalidParameter.exit_code


if __name__ == "__main__":
    sys.exit(main())
