"""``garland`` command line.

Exit status: 0 certified / verified / done, 1 ran but not certified or a
check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import __version__
from .bounds import (
    local_threshold,
    p_max_for_lambda,
    parse_class,
    stability_p_range,
    tensor_norm_bound,
    theta_of_p,
)
from .certify import certify_descent, certify_local, conclude
from .cochains import IDENTITIES, _DEGREES, CoefficientSpace, verify_identity
from .complex import GroupAction, link_graph
from .exceptions import GarlandError, InputError, UnreachableThreshold
from .io import action_from_json, complex_from_json, dumps, graph_from_json, read_json
from .random_groups import (
    Presentation,
    asymptotic_report,
    link_expansion_experiment,
    sample_presentation,
    zuk_link,
)
from .rng import resolve_seed
from .spectral import min_link_profiles, spectrum


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"garland: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _load_complex(args):
    cx = complex_from_json(read_json(args.complex))
    action = action_from_json(cx, read_json(args.action)) if args.action else None
    return cx, action


def _cmd_certify(args):
    cx, action = _load_complex(args)
    cls = parse_class(args.banach_class)
    certs = []
    for k in args.k:
        if args.criterion == "local":
            certs.append(certify_local(cx, action, k, cls, jobs=args.jobs))
        else:
            certs.append(certify_descent(cx, action, k, cls, args.sided, jobs=args.jobs))
    report = {"tool": "garland", "version": __version__,
              "certificates": [c.to_json() for c in certs],
              "conclusions": conclude(certs, aspherical=args.aspherical).to_json()}
    return report, 0 if all(c.certified for c in certs) else 1


def _cmd_spectra(args):
    if args.graph:
        g = graph_from_json(read_json(args.graph))
        prof = spectrum(g, args.solver)
        out = {"graph": {"vertices": list(g.vertices), "edges": len(g.edges)}, **prof.to_json()}
        return {"tool": "garland", "version": __version__, "spectrum": out}, 0
    if not args.complex:
        raise InputError("spectra needs --graph or --complex")
    cx, action = _load_complex(args)
    if args.link is not None:
        tau = tuple(cx.labels.index(v) for v in _parse_labels(args.link, cx))
        prof = spectrum(link_graph(cx, tau), args.solver)
        return {"tool": "garland", "version": __version__, "link": list(args.link.split(",")),
                "spectrum": prof.to_json()}, 0
    survey = min_link_profiles(cx, action, args.j, args.sided, args.solver, args.jobs)
    return {"tool": "garland", "version": __version__, "survey": survey.to_json()}, 0


def _parse_labels(text, cx):
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        match = [l for l in cx.labels if str(l) == tok]
        if not match:
            raise InputError(f"unknown vertex {tok!r}")
        out.append(match[0])
    return out


def _coefficients(args, action: GroupAction) -> CoefficientSpace:
    rep = args.rep
    if rep == "trivial":
        return CoefficientSpace.trivial(action, args.dim, args.p)
    if rep == "sign":
        if args.dim == 1:
            return CoefficientSpace.sign(action, args.p)
        return CoefficientSpace.direct_sum(CoefficientSpace.sign(action, args.p),
                                           CoefficientSpace.trivial(action, args.dim - 1, args.p))
    data = read_json(rep)
    mats = data.get("generators") if isinstance(data, dict) else data
    return CoefficientSpace(action, mats, data.get("p", args.p) if isinstance(data, dict) else args.p)


def _cmd_verify(args):
    cx, action = _load_complex(args)
    action = action if action is not None else GroupAction.trivial(cx)
    coeff = _coefficients(args, action)
    names = list(IDENTITIES) if args.identity.upper() == "ALL" else [args.identity.upper()]
    seed = resolve_seed(args.seed)
    reports = []
    for name in names:
        if name not in IDENTITIES:
            raise InputError(f"unknown identity {name!r}")
        lo, off = _DEGREES[name]
        ks = args.k if args.k else list(range(lo, cx.dim + off + 1))
        for k in ks:
            reports.append(verify_identity(cx, action, k, name, coeff, args.trials, seed,
                                           args.tol, args.C).to_json())
    if not reports:
        raise InputError("no admissible degree for the requested identities")
    for r in reports:
        r["seed"] = seed
    return reports, 0 if all(r["passed"] for r in reports) else 1


def _cmd_randgroup(args):
    seed = resolve_seed(args.seed)
    if args.action == "sample":
        pres = sample_presentation(args.model, args.m, args.param, seed, args.rotation_classes)
        if args.out:
            Path(args.out).write_text(pres.to_text(), encoding="utf-8")
        return {"tool": "garland", "version": __version__, "model": args.model, "m": args.m,
                "param": args.param, "seed": seed, "rotation_classes": args.rotation_classes,
                "relator_count": len(pres.relators),
                "relators": pres.to_text().splitlines()[1:]}, 0
    if args.action == "link":
        try:
            text = Path(args.presentation).read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(f"cannot read {args.presentation}: {e.strerror}") from e
        pres = Presentation.from_text(text, args.m)
        g = zuk_link(pres, args.symmetrize_relators)
        out = {"tool": "garland", "version": __version__, "m": pres.m,
               "relator_count": len(pres.relators), "symmetrized": args.symmetrize_relators,
               "link": g.to_json()}
        if g.n:
            prof = spectrum(g, args.solver)
            out["spectrum"] = prof.to_json()
            out["two_sided"] = max(abs(prof.lambda_one), abs(prof.lambda_min))
        return out, 0
    res = link_expansion_experiment(args.m_list, args.rho_mult, args.trials, seed, args.eta,
                                    args.symmetrize_relators, args.rotation_classes,
                                    solver=args.solver, jobs=args.jobs)
    if args.csv:
        Path(args.csv).write_text(res.to_csv(), encoding="utf-8")
    return {"tool": "garland", "version": __version__, "seed": seed, "rho_multiplier": args.rho_mult,
            "eta": args.eta, "trials": args.trials, "summary": res.summary,
            "rows": len(res.rows)}, 0


def _cmd_report(args):
    base = math.e if args.log_base in ("e", None) else float(args.log_base)
    return {"tool": "garland", "version": __version__,
            "report": asymptotic_report(args.m, args.d, args.C, args.eta, base)}, 0


def _cmd_thresholds(args):
    classes = args.banach_class or ["hilbert", "lp:2", "lp:3", "lp:4"]
    rows = []
    for text in classes:
        cls = parse_class(text)
        entry = {"class": cls.to_json(), "local_threshold": {}}
        for k in range(1, args.k_max + 1):
            try:
                entry["local_threshold"][str(k)] = local_threshold(k, cls.modulus)
            except UnreachableThreshold:
                entry["local_threshold"][str(k)] = None
        theta0 = cls.modulus.theta0
        entry["stability_p_range"] = list(stability_p_range(theta0)) if theta0 else None
        if args.lam is not None:
            entry["tensor_norm_bound"] = tensor_norm_bound(args.lam, cls.modulus)
        rows.append(entry)
    out = {"tool": "garland", "version": __version__, "classes": rows}
    if args.lam is not None:
        out["p_max"] = {str(k): p_max_for_lambda(args.lam, k) for k in range(1, args.k_max + 1)}
    if args.p is not None:
        out["theta_of_p"] = theta_of_p(args.p)
    return out, 0


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="garland", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"garland {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, action=True):
        p.add_argument("--complex", help="JSON file with top_simplices")
        if action:
            p.add_argument("--action", help="JSON file with group generators")
        p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("certify", help="vanishing certificate from link spectra")
    common(p)
    p.add_argument("--k", type=int, nargs="+", required=True)
    p.add_argument("--class", dest="banach_class", default="hilbert",
                   help="hilbert, power:THETA, lp:P or a JSON modulus")
    p.add_argument("--criterion", choices=["local", "descent"], default="local")
    p.add_argument("--sided", choices=["one", "two"], default="two")
    p.add_argument("--aspherical", action="store_true", help="assert the complex is aspherical")
    p.set_defaults(func=_cmd_certify, needs_complex=True)

    p = sub.add_parser("spectra", help="graph or link spectra")
    common(p)
    p.add_argument("--graph", help="JSON file with weighted edges")
    p.add_argument("--link", help="comma-separated vertices of one simplex")
    p.add_argument("--j", type=int, default=0, help="survey all j-links")
    p.add_argument("--sided", choices=["one", "two"], default="two")
    p.add_argument("--solver", choices=["jacobi", "lapack"], default="jacobi")
    p.set_defaults(func=_cmd_spectra, needs_complex=False)

    p = sub.add_parser("verify", help="sample cochain identities")
    common(p)
    p.add_argument("--identity", default="all", help="identity name or 'all'")
    p.add_argument("--k", type=int, nargs="*")
    p.add_argument("--rep", default="trivial", help="trivial, sign, or JSON generator matrices")
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--C", type=float, help="constant for the NOWAK inequality")
    p.set_defaults(func=_cmd_verify, needs_complex=True)

    p = sub.add_parser("randgroup", help="random triangular presentations")
    rsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("sample", "link", "experiment"):
        q = rsub.add_parser(name)
        q.add_argument("--seed", type=int)
        q.add_argument("--rotation-classes", action="store_true",
                       help="count relators up to cyclic rotation")
        q.add_argument("--symmetrize-relators", action="store_true",
                       help="add every relator's inverse before building the link")
        q.add_argument("--solver", choices=["jacobi", "lapack"], default="jacobi")
        q.add_argument("--jobs", type=int, default=1)
        if name == "sample":
            q.add_argument("--model", choices=["density", "binomial"], required=True)
            q.add_argument("--m", type=int, required=True)
            q.add_argument("--param", type=float, required=True, help="d or rho")
            q.add_argument("--out", help="write the presentation here")
        elif name == "link":
            q.add_argument("--presentation", required=True)
            q.add_argument("--m", type=int)
        else:
            q.add_argument("--m", dest="m_list", type=int, nargs="+", required=True)
            q.add_argument("--rho-mult", type=float, default=4.0,
                           help="rho = c log(m) / (8 m^2)")
            q.add_argument("--trials", type=int, default=20)
            q.add_argument("--eta", type=float, default=0.5)
            q.add_argument("--csv", help="write per-trial rows here")
    p.set_defaults(func=_cmd_randgroup, needs_complex=False)

    p = sub.add_parser("report", help="asymptotic bounds for random groups")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--log-base", default="e")
    p.set_defaults(func=_cmd_report, needs_complex=False)

    p = sub.add_parser("thresholds", help="threshold tables for Banach classes")
    p.add_argument("--class", dest="banach_class", action="append")
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--p", type=float)
    p.set_defaults(func=_cmd_thresholds, needs_complex=False)
    return ap


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "needs_complex", False) and not args.complex:
        print("garland: error: --complex is required", file=stderr)
        return 2
    try:
        report, code = args.func(args)
    except InputError as e:
        print(f"garland: error: {e}", file=stderr)
        return 2
    except GarlandError as e:
        print(f"garland: {type(e).__name__}: {e}", file=stderr)
        return 1
    stdout.write(dumps(report))
    return code


def main() -> None:
    raise SystemExit(run())
