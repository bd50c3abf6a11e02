"""Command-line front end.

Exit codes: 0 success, 1 domain error, 2 certification failure, 3 search
budget exhausted, 64 usage error. Output is TSV unless ``--json`` is given;
JSON output always carries ``schema_version`` and uses sorted keys.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from contextlib import contextmanager
from pathlib import Path

from . import constants as _constants
from .certificate import certify_positivity
from .colouring import chi_bounded, independence_number
from .constants import DEFAULTS
from .errors import BudgetExceeded, CertificationError, TamechromaError
from .events import check_events, classify_parts, is_relevant, overlap_of
from .graphs import read_graph, read_partition, sample_gnm, sample_gnp
from .iset import GraphParams, alpha, alpha0, mu, theta
from .limits import TRUNC, phi_enclosure, solve_limit, x0_root
from .montecarlo import mc_expectation
from .numeric import Interval, LogReal
from .optimal import (L0, L_profile, reparametrize, rounding_report, solve_continuous,
                      threshold)
from .profiles import (Profile, equitable_profile, expect_ordered, expect_unordered, f_count,
                       p_count, read_profile, write_profile)
from .second_moment import OverlapSpec, f_terms, shared_forbidden, t_sum

SCHEMA_VERSION = 1
EXIT_OK, EXIT_DOMAIN, EXIT_CERT, EXIT_BUDGET, EXIT_USAGE = 0, 1, 2, 3, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def jsonable(obj):
    if isinstance(obj, Interval):
        return [obj.lo, obj.hi]
    if isinstance(obj, LogReal):
        return {"sign": obj.sign, "log_abs": None if math.isinf(obj.log_abs) else obj.log_abs}
    if isinstance(obj, Profile):
        return {"n": obj.n, "t": obj.t, "counts": {str(u): k for u, k in obj.items}}
    if isinstance(obj, float):
        return None if math.isnan(obj) or math.isinf(obj) else obj
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def dump_json(payload: dict) -> str:
    body = {"schema_version": SCHEMA_VERSION, **jsonable(payload)}
    return json.dumps(body, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _cell(v) -> str:
    v = jsonable(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return "" if v is None else str(v)


def dump_tsv(rows: list[dict]) -> str:
    if not rows:
        return ""
    cols = list(rows[0])
    lines = ["\t".join(cols)] + ["\t".join(_cell(r.get(c)) for c in cols) for r in rows]
    return "\n".join(lines) + "\n"


def _parse_pairs(text: str) -> dict[int, int]:
    """'u:k,u:k' -> {u: k}."""
    out = {}
    for tok in filter(None, text.replace(" ", "").split(",")):
        u, _, k = tok.partition(":")
        out[int(u)] = int(k)
    return out


def _parse_blocks(text: str) -> dict[tuple[int, int, int], int]:
    """'x/u/v:c,...' -> {(x, u, v): c}."""
    out = {}
    for tok in filter(None, text.replace(" ", "").split(",")):
        key, _, c = tok.partition(":")
        x, u, v = (int(s) for s in key.split("/"))
        out[(x, u, v)] = int(c)
    return out


def _params(args) -> GraphParams:
    return GraphParams(args.n, args.p, getattr(args, "m", None))


def _profile(args) -> Profile:
    if getattr(args, "profile", None):
        return read_profile(args.profile)
    if getattr(args, "counts", None):
        return Profile(args.n, _parse_pairs(args.counts), getattr(args, "t", None))
    raise UsageError("give --profile FILE or --counts u:k,...")


# subcommands: each returns (payload dict, tsv rows)

def cmd_stats(args):
    params = _params(args)
    al = alpha(params)
    row = {"n": params.n, "p": params.p, "alpha0": alpha0(params), "alpha": al,
           "ln_mu_alpha": mu(params, al).log_abs, "theta": theta(params)}
    if args.t is not None:
        row["t"] = args.t
        row["ln_mu_t"] = mu(params, args.t).log()
    return row, [row]


def cmd_profile_expect(args):
    pr = _profile(args)
    params = GraphParams(pr.n, args.p, args.m)
    rows = []
    for model in ([args.model] if args.model else ["gnp", "gnm"]):
        rows.append({"model": model, "ln_E_ordered": expect_ordered(pr, params, model).log(),
                     "ln_E_unordered": expect_unordered(pr, params, model).log()})
    payload = {"profile": pr, "p": params.p, "m": params.m, "ln_P": p_count(pr).log(),
               "f": f_count(pr), "complete": pr.complete, "expectations": rows}
    return payload, rows


def cmd_profile_equitable(args):
    pr = equitable_profile(args.n, args.k)
    return {"profile": pr}, [{"u": u, "k_u": k} for u, k in pr.items]


def cmd_optimize(args):
    cp = solve_continuous(args.n, args.k, args.t, args.p)
    rep = rounding_report(cp, args.n, args.k, args.t)
    l0 = L0(args.n, args.k, args.t, args.p)
    lk = L_profile(args.n, rep.profile.counts, args.p)
    payload = {"n": args.n, "k": args.k, "t": args.t, "rho": cp.rho, "x": cp.x_t, "y": cp.y_t,
               "residual": cp.residual, "L0": l0, "L_rounded": lk, "gap": lk - l0,
               "u_star": rep.u_star, "changes": rep.changes, "perturbation": rep.perturbation,
               "profile": rep.profile,
               "weights": {str(u): cp.p_u(u) for u in range(1, args.t + 1)}}
    if args.p == 0.5 and args.t <= alpha(GraphParams(args.n)):
        rp = reparametrize(cp, args.n)
        payload.update({"alpha": rp.alpha, "lambda_n": rp.lambda_n, "mu_n": rp.mu_n,
                        "xi": {str(i): v for i, v in rp.xi.items()}})
    if args.emit:
        write_profile(rep.profile, args.emit)
    rows = [{"u": u, "p_u": cp.p_u(u), "k_u_real": rep.real_counts[u],
             "k_u": rep.profile.counts.get(u, 0)} for u in range(1, args.t + 1)]
    return payload, rows


def cmd_threshold(args):
    k, diag = threshold(args.n, args.t, args.mode, GraphParams(args.n, args.p))
    payload = {"n": args.n, "t": args.t, "k": k, **diag}
    return payload, [payload]


def cmd_limits(args):
    if args.x0:
        br = x0_root(args.tol)
        payload = {"x0": br, "width": br.width}
        return payload, [{"x0_lo": br.lo, "x0_hi": br.hi}]
    sys_ = solve_limit(args.i0, args.x, args.width)
    payload = {"i0": args.i0, "x": sys_.x, "T": sys_.T, "mu": sys_.mu, "lambda": sys_.lam,
               "zeta": {str(i): sys_.zeta[i] for i in range(args.i0, TRUNC + 1)}}
    if args.s is not None:
        enc, widened = phi_enclosure(sys_, args.s)
        payload.update({"s": args.s, "phi": enc, "phi_widened": widened})
    rows = [{"name": "mu", "lo": sys_.mu.lo, "hi": sys_.mu.hi},
            {"name": "lambda", "lo": sys_.lam.lo, "hi": sys_.lam.hi}]
    rows += [{"name": f"zeta_{i}", "lo": sys_.zeta[i].lo, "hi": sys_.zeta[i].hi}
             for i in range(args.i0, TRUNC + 1)]
    if args.s is not None:
        rows.append({"name": f"phi_{args.s}", "lo": enc.lo, "hi": enc.hi})
    return payload, rows


def cmd_verify(args):
    cert = certify_positivity(args.grid_points)
    if args.report:
        Path(args.report).write_text(dump_json(cert))
    args.json = True
    return cert, []


def _load_spec(path: str):
    """JSON overlap spec: {"profile": {"n", "t", "counts"}, "ell", "r" keyed "x/u/v", "a", "p", "m"}."""
    data = json.loads(Path(path).read_text())
    prof = data["profile"]
    pr = Profile(prof["n"], {int(u): k for u, k in prof["counts"].items()}, prof.get("t"))
    ell = {int(u): v for u, v in data.get("ell", {}).items()}
    r = {tuple(int(s) for s in key.split("/")): c for key, c in data.get("r", {}).items()}
    params = GraphParams(pr.n, data.get("p", 0.5), data.get("m"))
    return OverlapSpec(pr, ell, r, data.get("a")), params


def cmd_sm_terms(args):
    if args.spec:
        spec, params = _load_spec(args.spec)
        pr = spec.profile
    else:
        pr = _profile(args)
        params = GraphParams(pr.n, args.p, args.m)
        spec = OverlapSpec(pr, _parse_pairs(args.ell or ""), _parse_blocks(args.r or ""), args.a)
    part = Profile(pr.n, spec.ell, pr.t)
    terms = f_terms(spec, params, expect_unordered(part, params, "gnp"))
    g, g_id, g_tr = shared_forbidden(spec)
    ts = {str(x): t_sum(spec, x, params.q) for x in range(2, spec.a)
          if x < spec.n_tr}
    payload = {"n_id": spec.n_id, "n_tr": spec.n_tr, "r1": spec.r1, "eta": spec.eta,
               "lambda": spec.lam, "g": g, "g_id": g_id, "g_tr": g_tr,
               "ln_F1": terms.F1.log(), "F3": terms.F3, "M1": terms.M1, "M2": terms.M2,
               "T": ts}
    return payload, [{k: v for k, v in payload.items() if k != "T"}]


def cmd_simulate(args):
    if args.samples <= 0:
        raise UsageError("--samples must be positive")
    if args.counts or args.profile:
        params = GraphParams(args.n, args.p if args.p is not None else 0.5, args.m)
        pr = _profile(args)
        model = "gnm" if args.m is not None else "gnp"
        res = mc_expectation(params, pr, args.samples, args.seed, model=model,
                             ordered=not args.unordered, level=args.level)
        exact = expect_ordered(pr, params, model) if not args.unordered else \
            expect_unordered(pr, params, model)
        payload = {"model": model, "mean": float(res.mean), "ci": res.ci, "std": res.std,
                   "level": res.level, "samples": res.samples, "exact": float(exact),
                   "histogram": res.histogram}
        hist = res.histogram
        rows = [{k: payload[k] for k in ("model", "mean", "ci", "exact", "samples")}]
    else:
        if args.t is None:
            raise UsageError("simulate needs --t or a profile")
        hist: dict[int, int] = {}
        per = []
        for s in range(args.samples):
            seed = args.seed ^ s
            g = sample_gnm(args.n, args.m, seed) if args.m is not None else \
                sample_gnp(args.n, args.p if args.p is not None else 0.5, seed)
            c = chi_bounded(g, args.t)
            hist[c] = hist.get(c, 0) + 1
            per.append({"sample": s, "edges": g.num_edges(), "alpha": independence_number(g),
                        "chi_t": c})
        payload = {"n": args.n, "t": args.t, "samples": args.samples, "histogram": hist,
                   "runs": per}
        rows = per
    if args.hist:
        Path(args.hist).write_text(dump_tsv([{"value": v, "count": c}
                                             for v, c in sorted(hist.items())]))
    return payload, rows


def cmd_check_pair(args):
    g = read_graph(args.graph)
    pi = read_partition(args.pi, g.n)
    rep = check_events(g, pi, args.u_star, args.a, args.alpha, args.sample, args.seed)
    payload = {"pi": {**rep.as_dict(), "sets_checked": rep.sets_checked,
                      "d_count": rep.d_count, "d_bound": rep.d_bound, "sampled": rep.sampled},
               "alpha": rep.alpha, "u_star": rep.u_star, "a": rep.a}
    rows = [{"partition": "pi", **rep.as_dict(), "sampled": rep.sampled}]
    if args.pi2:
        pi2 = read_partition(args.pi2, g.n)
        rep2 = check_events(g, pi2, args.u_star, args.a, args.alpha, args.sample, args.seed)
        payload["pi2"] = {**rep2.as_dict(), "sets_checked": rep2.sets_checked,
                          "d_count": rep2.d_count, "d_bound": rep2.d_bound,
                          "sampled": rep2.sampled}
        payload["relevant"] = is_relevant(pi, pi2, rep.alpha)
        payload["classes"] = classify_parts(pi, pi2, rep.alpha)
        spec = overlap_of(pi, pi2)
        payload["ell"] = spec.ell
        payload["r"] = {f"{x}/{u}/{v}": c for (x, u, v), c in spec.r.items()}
        payload["r1"] = spec.r1
        rows.append({"partition": "pi2", **rep2.as_dict(), "sampled": rep2.sampled})
    return payload, rows


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of TSV")
    common.add_argument("--const", action="append", default=[], metavar="KEY=VAL",
                        help="override an entry of the constants table")

    parser = _Parser(prog="tamechroma", description="Colouring profiles of random graphs.")
    parser.add_argument("--show-constants", action="store_true",
                        help="print the constants table and exit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("stats", cmd_stats, "alpha0, alpha, mu_alpha and theta")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=float, default=0.5)
    sp.add_argument("--t", type=int, help="also report mu_t")

    prof = sub.add_parser("profile", help="profile expectations")
    psub = prof.add_subparsers(dest="action", parser_class=_Parser)
    pe = psub.add_parser("expect", parents=[common], help="expected colouring counts")
    pe.set_defaults(func=cmd_profile_expect)
    pe.add_argument("--profile", "--file", dest="profile", help="profile file")
    pe.add_argument("--model", choices=("gnp", "gnm"))
    pe.add_argument("--counts", help="u:k,u:k,... (with --n)")
    pe.add_argument("--n", type=int)
    pe.add_argument("--t", type=int)
    pe.add_argument("--p", type=float, default=0.5)
    pe.add_argument("--m", type=int)
    pq = psub.add_parser("equitable", parents=[common], help="equitable profile")
    pq.set_defaults(func=cmd_profile_equitable)
    pq.add_argument("--n", type=int, required=True)
    pq.add_argument("--k", type=int, required=True)

    sp = add("optimize", cmd_optimize, "optimal continuous profile and its rounding")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--p", type=float, default=0.5)
    sp.add_argument("--emit", help="write the rounded profile to this file")

    sp = add("threshold", cmd_threshold, "first-moment threshold in k")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--mode", choices=("exact", "L0"), default="exact")
    sp.add_argument("--exact", dest="mode", action="store_const", const="exact")
    sp.add_argument("--p", type=float, default=0.5)

    sp = add("limits", cmd_limits, "certified limit system or the x0 root")
    sp.add_argument("--i0", type=int, default=1, choices=(1, 2))
    sp.add_argument("--x", type=float, default=0.0)
    sp.add_argument("--width", type=float)
    sp.add_argument("--s", type=int, help="also enclose phi(s, x, i0)")
    sp.add_argument("--x0", action="store_true", help="bracket the root of phi(1, x, 1)")
    sp.add_argument("--tol", type=float)

    sp = add("verify-positivity", cmd_verify, "run the positivity certificate")
    sp.add_argument("--grid-points", type=int, default=100)
    sp.add_argument("--report", "--out", dest="report", help="also write the certificate JSON here")

    sp = add("sm-terms", cmd_sm_terms, "second-moment terms for one overlap")
    sp.add_argument("--spec", help="JSON overlap spec file")
    sp.add_argument("--profile")
    sp.add_argument("--counts")
    sp.add_argument("--n", type=int)
    sp.add_argument("--t", type=int)
    sp.add_argument("--ell", help="u:l,... identical parts")
    sp.add_argument("--r", help="x/u/v:c,... overlap blocks")
    sp.add_argument("--a", type=int)
    sp.add_argument("--p", type=float, default=0.5)
    sp.add_argument("--m", type=int)

    sp = add("simulate", cmd_simulate, "sample graphs: chi_t or a Monte Carlo expectation")
    sp.add_argument("--n", type=int, required=True)
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--m", type=int)
    grp.add_argument("--p", type=float)
    sp.add_argument("--t", type=int)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--hist", help="write a value/count TSV here")
    sp.add_argument("--profile")
    sp.add_argument("--counts")
    sp.add_argument("--unordered", action="store_true")
    sp.add_argument("--level", type=float, default=0.95)

    sp = add("check-pair", cmd_check_pair, "events A-D and pair relevance")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--pi", required=True)
    sp.add_argument("--pi2")
    sp.add_argument("--alpha", type=int)
    sp.add_argument("--u-star", type=int)
    sp.add_argument("--a", type=int)
    sp.add_argument("--sample", type=int)
    sp.add_argument("--seed", type=int, default=0)
    return parser


@contextmanager
def _overridden(pairs: list[str]):
    overrides = {}
    for item in pairs:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--const expects KEY=VAL, got {item!r}")
        try:
            overrides[key] = float(val)
        except ValueError:
            raise UsageError(f"--const value for {key} is not a number") from None
    try:
        table = _constants.constants(overrides)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    saved = dict(DEFAULTS)
    DEFAULTS.update(table)
    try:
        yield
    finally:
        DEFAULTS.clear()
        DEFAULTS.update(saved)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    out, err = sys.stdout, sys.stderr
    try:
        args = parser.parse_args(argv)
        if args.show_constants:
            out.write(dump_tsv([{"key": k, "value": v} for k, v in DEFAULTS.items()]))
            return EXIT_OK
        if not hasattr(args, "func"):
            parser.print_help(err)
            return EXIT_USAGE
        with _overridden(args.const):
            payload, rows = args.func(args)
        if args.json:
            out.write(dump_json({"command": args.command, "result": payload}
                                if args.command != "verify-positivity" else payload))
        else:
            out.write(dump_tsv(rows))
        if args.command == "verify-positivity" and not payload["certified"]:
            return EXIT_CERT
        return EXIT_OK
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except BudgetExceeded as exc:
        err.write(f"budget exceeded: {exc} (lower={exc.lower}, upper={exc.upper})\n")
        return EXIT_BUDGET
    except CertificationError as exc:
        err.write(f"certification failed: {exc}\n")
        return EXIT_CERT
    except (TamechromaError, ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
