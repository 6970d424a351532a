"""Command-line interface: ``qrange range|radius|bounds|verify|converge|perturb|transform``.

Exit status: 0 on success, 2 for bad input or configuration, 3 when
``verify`` finds a violated certified invariant.
"""
import argparse
import dataclasses
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import bounds as bnd
from . import matcore, numrange, radii, structure
from .errors import QRangeError
from .matfile import dumps_csv, dumps_json, parse_complex, read_matrix
from .svg import render

EXIT_OK, EXIT_CONFIG, EXIT_VIOLATION = 0, 2, 3


class ConfigError(QRangeError):
    pass


def jsonable(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(float(obj.real)), jsonable(float(obj.imag))]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def dump(doc):
    return json.dumps(jsonable(doc), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------- config

def parse_q_list(values):
    out = []
    for v in values or []:
        for part in v.split(","):
            if part.strip():
                out.append(parse_complex(part))
    return out


def parse_q_grid(text):
    """"a:b:n" for n evenly spaced values in [a, b], or a comma list."""
    if text is None:
        return []
    if ":" in text:
        try:
            a, b, n = text.split(":")
            return [complex(v) for v in np.linspace(float(a), float(b), int(n))]
        except ValueError as exc:
            raise ConfigError(f"bad --q-grid {text!r}: {exc}") from exc
    return parse_q_list([text])


def parse_floats(text, name):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad {name} {text!r}") from exc


def parse_ints(text, name):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad {name} {text!r}") from exc


@dataclasses.dataclass
class RunConfig:
    qs: list
    n_theta: int
    restarts: int
    seed: int
    fmt: str
    out: str
    tol_hold: float
    tol_herm: float
    tol_psd: float

    @classmethod
    def from_args(cls, args, default_qs, default_restarts):
        qs = parse_q_list(args.q) + parse_q_grid(args.q_grid)
        qs = qs or list(default_qs)
        for q in qs:
            if abs(q) > 1 + numrange.Q_TOL:
                raise ConfigError(f"q = {q} lies outside the unit disk")
        restarts = default_restarts if args.restarts is None else args.restarts
        if args.ntheta < 16:
            raise ConfigError("--ntheta must be at least 16")
        if restarts < 1:
            raise ConfigError("--restarts must be at least 1")
        return cls(qs, args.ntheta, restarts, args.seed, args.format, args.out, args.tol_hold,
                   args.tol_herm, args.tol_psd)


def real_qs(qs):
    out = []
    for q in qs:
        if q.imag != 0 or not 0 <= q.real <= 1:
            raise ConfigError(f"this command needs real q in [0, 1], got {q}")
        out.append(q.real)
    return out


def emit(text, out, default_name):
    if out is None:
        sys.stdout.write(text)
        return
    p = Path(out)
    if p.is_dir():
        p = p / default_name
    p.write_text(text)


def load(args):
    M = read_matrix(args.input, args.input_format)
    if args.tol_herm is not None:
        matcore.REL_TOL = args.tol_herm
    return M


# ---------------------------------------------------------------- commands

def cmd_range(args):
    T = load(args)
    cfg = RunConfig.from_args(args, [1.0], 8)
    items = []
    for q in cfg.qs:
        R = numrange.range_cloud(T, q, n_theta=cfg.n_theta, n_samples=args.samples, seed=cfg.seed,
                                 restarts=cfg.restarts)
        contains, margin = numrange.contains_zero(R)
        items.append((q, R, contains, margin))
    if cfg.fmt == "svg":
        emit(render([R.hull for _, R, _, _ in items], [f"q={q:g}" for q, *_ in items]), cfg.out, "range.svg")
    elif cfg.fmt == "csv":
        if cfg.out is not None and Path(cfg.out).is_dir():
            for k, (q, R, _, _) in enumerate(items):
                (Path(cfg.out) / f"support_q{k}.csv").write_text(_support_csv([(q, R)]))
                (Path(cfg.out) / f"boundary_q{k}.csv").write_text(
                    "re,im\n" + "".join(f"{z.real!r},{z.imag!r}\n" for z in R.hull))
        else:
            emit(_support_csv([(q, R) for q, R, _, _ in items]), cfg.out, "support.csv")
    else:
        doc = {"ranges": [{"q": q, "theta": R.grid, "support": R.support, "boundary": R.hull,
                           "contains_zero": c, "margin": m} for q, R, c, m in items]}
        emit(dump(doc), cfg.out, "range.json")
    return EXIT_OK


def _support_csv(items):
    lines = ["q,theta,support"]
    for q, R in items:
        lines += [f"{_qtext(q)},{t!r},{h!r}" for t, h in zip(R.grid.tolist(), R.support.tolist())]
    return "\n".join(lines) + "\n"


def _qtext(q):
    q = complex(q)
    return repr(q.real) if q.imag == 0 else f"{q.real!r}{q.imag:+}i"


def cmd_radius(args):
    T = load(args)
    cfg = RunConfig.from_args(args, [0.0, 0.25, 0.5, 0.75, 1.0], numrange.DEFAULT_RESTARTS)
    qs = [abs(q) for q in cfg.qs]
    ests = numrange.omega_q_many(T, qs, cfg.restarts, cfg.seed)
    w, c, m = radii.numerical_radius(T), radii.crawford(T), radii.transcendental_radius(T)
    doc = {
        "norm": matcore.spectral_norm(T),
        "sigma_min": matcore.sigma_min(T),
        "w": {"value": w.value, "witness": w.witness},
        "c": {"value": c.value, "witness": c.witness},
        "m": {"value": m.value, "witness": m.witness},
        "omega": [{"q": q, "value": e.value, "witness_x": e.witness_x, "spread": e.spread} for q, e in zip(qs, ests)],
    }
    if cfg.fmt == "csv":
        lines = ["q,omega,spread"] + [f"{q!r},{e.value!r},{e.spread!r}" for q, e in zip(qs, ests)]
        emit("\n".join(lines) + "\n", cfg.out, "radius.csv")
    else:
        emit(dump(doc), cfg.out, "radius.json")
    return EXIT_OK


BOUND_COLUMNS = ("bound_id", "q", "rhs", "omega_est", "slack", "holds", "power", "kind", "rechecked")


def cmd_bounds(args):
    T = load(args)
    cfg = RunConfig.from_args(args, [0.0, 0.5, 1.0], numrange.DEFAULT_RESTARTS)
    partner = read_matrix(args.partner) if args.partner else None
    bnd.HOLD_TOL = cfg.tol_hold
    rows = bnd.bound_sweep(T, real_qs(cfg.qs), cfg.restarts, cfg.seed, partner=partner)
    if cfg.fmt == "csv":
        lines = [",".join(BOUND_COLUMNS)]
        for r in rows:
            lines.append(",".join(str(v) if not isinstance(v, float) else repr(v)
                                  for v in (getattr(r, c) for c in BOUND_COLUMNS)))
        emit("\n".join(lines) + "\n", cfg.out, "bounds.csv")
    else:
        emit(dump({"rows": rows}), cfg.out, "bounds.json")
    return EXIT_OK


def cmd_verify(args):
    from .suite import DEFAULT_Q_GRID, run_suite
    cfg = RunConfig.from_args(args, DEFAULT_Q_GRID, numrange.DEFAULT_RESTARTS)
    if args.count < 1:
        raise ConfigError("--count must be at least 1")
    bnd.HOLD_TOL = cfg.tol_hold
    workers = max(1, int(os.environ.get("QRANGE_THREADS", "1") or 1))
    report = run_suite(args.ensemble, parse_ints(args.dims, "--dims"), args.count, real_qs(cfg.qs),
                       cfg.seed, cfg.restarts, workers=workers)
    emit(dump(report), cfg.out, "verify.json")
    return EXIT_OK if report["all_certified_pass"] else EXIT_VIOLATION


def _spectrum(text, largest):
    if text in (None, "harmonic"):
        return 1.0 / np.arange(1, largest + 1)
    return np.array([parse_complex(v) for v in text.split(",")])


def cmd_converge(args):
    cfg = RunConfig.from_args(args, [0.5], 8)
    dims = parse_ints(args.dims, "--dims")
    lam = _spectrum(args.spectrum, max(dims))
    reports = [structure.run_convergence(lam, q, dims, n_theta=cfg.n_theta, restarts=cfg.restarts,
                                         seed=cfg.seed, final_tol=args.final_tol) for q in cfg.qs]
    if cfg.fmt == "svg":
        q = cfg.qs[0]
        hulls = [numrange.range_cloud(structure.truncation(lam, n), q, cfg.n_theta, 0, cfg.seed,
                                      cfg.restarts).hull for n in dims]
        emit(render(hulls, [f"n={n}" for n in dims]), cfg.out, "converge.svg")
    else:
        emit(dump({"q": cfg.qs, "dims": dims, "reports": reports}), cfg.out, "converge.json")
    return EXIT_OK


def cmd_perturb(args):
    T = load(args)
    cfg = RunConfig.from_args(args, [0.5], 8)
    seeds = parse_ints(args.seeds, "--seeds")
    eps = parse_floats(args.eps, "--eps")
    reports = [structure.run_perturbation(T, q, seeds, eps, n_theta=cfg.n_theta, restarts=cfg.restarts)
               for q in real_qs(cfg.qs)]
    emit(dump({"q": cfg.qs, "reports": reports}), cfg.out, "perturb.json")
    return EXIT_OK


def cmd_transform(args):
    T = load(args)
    cfg = RunConfig.from_args(args, [0.5], 8)
    A = structure.aluthge(T)
    if cfg.fmt == "csv":
        emit(dumps_csv(A), cfg.out, "aluthge.csv")
        return EXIT_OK
    normal = structure.is_normal(T)
    reports = [structure.check_thm5(T, q, n_theta=cfg.n_theta, restarts=cfg.restarts, seed=cfg.seed)
               for q in cfg.qs]
    doc = {"aluthge": json.loads(dumps_json(A)), "input_normal": normal,
           "notice": "input is normal, so the Aluthge transform equals the input" if normal else "",
           "reports": reports}
    if cfg.fmt == "svg":
        q = cfg.qs[0]
        hulls = [numrange.range_cloud(M, q, cfg.n_theta, 0, cfg.seed, cfg.restarts).hull
                 for M in (T, matcore.adjoint(T), A)]
        emit(render(hulls, ["T", "T*", "aluthge(T)"]), cfg.out, "transform.svg")
    else:
        emit(dump(doc), cfg.out, "transform.json")
    return EXIT_OK


def cmd_fixtures(args):
    from .findings import findings_report
    emit(dump(findings_report()), args.out, "findings.json")
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", action="append", help="q value(s); repeatable or comma separated, e.g. 0.5,0.3+0.2i")
    common.add_argument("--q-grid", help="a:b:n evenly spaced values, or a comma list")
    common.add_argument("--ntheta", type=int, default=720, help="angular grid size (>= 16)")
    common.add_argument("--restarts", type=int, default=None, help="optimizer restarts per problem")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "csv", "svg"), default="json")
    common.add_argument("--out", help="output file or directory (default stdout)")
    common.add_argument("--tol-hold", type=float, default=bnd.HOLD_TOL, help="slack threshold for holds")
    common.add_argument("--tol-herm", type=float, default=None, help="relative Hermitian tolerance")
    common.add_argument("--tol-psd", type=float, default=None, help="relative PSD tolerance")

    matrix = argparse.ArgumentParser(add_help=False)
    matrix.add_argument("input", help="matrix file (.json or .csv)")
    matrix.add_argument("--input-format", choices=("json", "csv"))

    p = argparse.ArgumentParser(prog="qrange", description="q-numerical ranges and radii of small matrices")
    p.add_argument("--paper-fixtures", action="store_true", help="recompute the bundled worked examples")
    p.add_argument("--out", dest="fixtures_out", help=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command")

    s = sub.add_parser("range", parents=[common, matrix], help="support table and boundary of W_q(T)")
    s.add_argument("--samples", type=int, default=2000, help="random admissible pairs in the cloud")
    s.set_defaults(func=cmd_range)
    sub.add_parser("radius", parents=[common, matrix], help="omega_q, w, c, m, norms").set_defaults(func=cmd_radius)
    s = sub.add_parser("bounds", parents=[common, matrix], help="evaluate the bound catalog")
    s.add_argument("--partner", help="second matrix B for the anticommutator bounds")
    s.set_defaults(func=cmd_bounds)
    s = sub.add_parser("verify", parents=[common], help="property suite over a random ensemble")
    s.add_argument("--ensemble", choices=("random", "normal", "nilpotent", "csym"), default="random")
    s.add_argument("--dims", default="2,3,4,5,6")
    s.add_argument("--count", type=int, default=100)
    s.set_defaults(func=cmd_verify)
    s = sub.add_parser("converge", parents=[common], help="Hausdorff convergence of diagonal truncations")
    s.add_argument("--spectrum", default="harmonic", help="'harmonic' (1/k) or a comma list of eigenvalues")
    s.add_argument("--dims", default="2,4,8,16")
    s.add_argument("--final-tol", type=float, default=1e-3)
    s.set_defaults(func=cmd_converge)
    s = sub.add_parser("perturb", parents=[common, matrix], help="stability of W_q under random perturbations")
    s.add_argument("--seeds", default="0,1,2")
    s.add_argument("--eps", default="1e-3,1e-2,1e-1")
    s.set_defaults(func=cmd_perturb)
    sub.add_parser("transform", parents=[common, matrix], help="Aluthge transform and range inclusion") \
        .set_defaults(func=cmd_transform)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.paper_fixtures:
            args.out = args.fixtures_out if args.command is None else getattr(args, "out", None)
            return cmd_fixtures(args)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_CONFIG
        if args.tol_psd is not None:
            matcore.REL_TOL = args.tol_psd
        return args.func(args)
    except QRangeError as exc:
        print(f"qrange: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    finally:
        matcore.REL_TOL = 1e-10


if __name__ == "__main__":
    sys.exit(main())
