"""Command-line front end: one binary, JSON in and JSON out.

Every subcommand prints a single JSON document (or writes it with
--out).  Exit codes: 0 for an answered query or a passing check, 1 for
a failing check or a domain error, 2 for bad usage or configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from poslab import boundary as bd
from poslab import circles as ci
from poslab import configurations as cf
from poslab import flags as fl
from poslab import linalg as la
from poslab import semigroup as sg
from poslab import suites
from poslab import tripods as tp
from poslab import weyl
from poslab.errors import ConfigInvalid, PoslabError, UnknownSuite

SCHEMA = suites.SCHEMA


def _load(path: str):
    with open(path) as f:
        return json.load(f)


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _rational(text: str):
    """A rational parameter; 'inf' is the point at infinity."""
    if text.strip().lower() == "inf":
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _rational_list(text: str) -> list:
    return [_rational(tok) for tok in text.split(",") if tok.strip()]


def _resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("POSLAB_SEED")
    if env is None:
        return 42
    try:
        return int(env)
    except ValueError:
        raise ConfigInvalid(f"POSLAB_SEED must be an integer, got {env!r}")


def _flag_file(path: str) -> fl.Flag:
    return fl.flag_from_json(_load(path))


def _perm_key(perm) -> str:
    return ",".join(str(x) for x in perm)


def _seeded_triple(rng, n: int):
    g = fl.random_unimodular(rng, n)
    a = fl.act(g, fl.standard_flag(n))
    b = fl.act(g, fl.antistandard_flag(n))
    frame = fl.normalize_pair(a, b)
    c = sg.point_from_unipotent(
        frame, sg.psi(sg.random_cone_params(rng, n)).entries)
    return a, b, c


# ---------------------------------------------------------------------------
# Subcommand handlers.  Each returns (exit code, payload).


def _cmd_suite(args):
    if args.workers != 1:
        print("parallel workers are not implemented; running sequentially",
              file=sys.stderr)
    cfg = suites.SuiteConfig(n=args.n, trials=args.trials,
                             seed=_resolve_seed(args.seed), mode=args.mode,
                             tol=args.tol)
    report = suites.run_suite(args.name, cfg)
    return (0 if report["pass"] else 1), report


def _cmd_bruhat_cell(args):
    cell = weyl.bruhat_cell(fl.matrix_from_json(_load(args.matrix)))
    return 0, {"schema": SCHEMA, "permutation": list(cell.perm),
               "length": cell.length}


def _cmd_invw_check(args):
    rep = weyl.check_involution_lemma(args.n)
    payload = {
        "schema": SCHEMA,
        "n": rep["n"],
        "checked": rep["checked"],
        "pass": rep["pass"],
        "failures": [list(p) for p in rep["failures"]],
        "witnesses": {_perm_key(k): list(v)
                      for k, v in rep["witnesses"].items()},
    }
    return (0 if rep["pass"] else 1), payload


def _cmd_transversality_scan(args):
    gens = [fl.matrix_from_json(g) for g in _load(args.gens)]
    rep = weyl.transversality_scan(gens, depth=args.depth)
    witness = (None if rep.witness is None
               else list(weyl.bruhat_cell(rep.witness).perm))
    dominating = (None if rep.dominating_cell is None
                  else list(rep.dominating_cell.perm))
    return 0, {"schema": SCHEMA, "witness_cell": witness,
               "dominating_cell": dominating,
               "samples_checked": rep.samples_checked}


def _cmd_diamond_membership(args):
    a, b, c = (_flag_file(p) for p in (args.a, args.b, args.c))
    cert = sg.component_certificate(a, b, c)
    minors = sg.eligible_minors(sg.unipotent_coordinate(
        fl.normalize_pair(a, b), c))
    payload = {
        "schema": SCHEMA,
        "certificate": (None if cert is None else
                        {"sign_class": list(cert[0]), "side": cert[1]}),
        "extremal_minors": {"min": fl.scalar_to_json(min(minors)),
                            "max": fl.scalar_to_json(max(minors))},
    }
    if args.x is not None:
        d = sg.diamond_of(a, b, c)
        payload["contains_x"] = sg.diamond_contains(d, _flag_file(args.x))
    return 0, payload


def _cmd_nesting_check(args):
    rng = random.Random(_resolve_seed(args.seed))
    a, b, c = _seeded_triple(rng, args.n)
    ok = sg.nesting_check(a, b, c, samples=args.samples, rng=rng)
    return (0 if ok else 1), {"schema": SCHEMA, "pass": ok, "n": args.n,
                              "samples": args.samples}


def _cmd_check_triple(args):
    a, b, c = (_flag_file(p) for p in (args.a, args.b, args.c))
    positive = cf.is_positive_triple(a, b, c)
    payload = {"schema": SCHEMA, "positive": positive}
    if positive:
        payload["certificates"] = [
            {"sign_class": list(s), "side": side}
            for s, side in (sg.component_certificate(*rot)
                            for rot in ((a, b, c), (b, c, a), (c, a, b)))]
    return 0, payload


def _cmd_check_quad(args):
    flags = tuple(_flag_file(p) for p in (args.a, args.x, args.b, args.y))
    return 0, {"schema": SCHEMA,
               "positive": cf.is_positive_quadruple(*flags)}


def _cmd_check_config(args):
    flags = tuple(fl.flag_from_json(obj) for obj in _load(args.flags))
    positive = cf.is_positive_configuration(cf.Configuration(points=flags))
    return 0, {"schema": SCHEMA, "positive": positive, "size": len(flags)}


def _cmd_circle(args):
    circle = ci.veronese_circle(args.n)
    return 0, {"schema": SCHEMA, "n": args.n,
               "flags": [fl.flag_to_json(circle.point(s))
                         for s in args.points]}


def _cmd_circle_config_check(args):
    rep = ci.circle_configuration_check(args.n, args.k)
    return (0 if rep["pass"] else 1), {"schema": SCHEMA, **rep}


def _cmd_tripod_distance(args):
    if len(args.tripod) != 3:
        raise ConfigInvalid("--tripod needs exactly three parameters")
    tau = tp.tripod(ci.veronese_circle(args.n), *args.tripod)
    d_plus, d_minus, chordal = tp.tripod_distance(
        tau, _flag_file(args.p), _flag_file(args.q))
    return 0, {"schema": SCHEMA,
               "d_plus": fl.scalar_to_json(d_plus),
               "d_minus": fl.scalar_to_json(d_minus),
               "chordal": fl.scalar_to_json(chordal)}


def _cmd_tripod_norm(args):
    triple = [fl.flag_from_json(obj) for obj in _load(args.triple)]
    if len(triple) != 3:
        raise ConfigInvalid("--triple file needs exactly three flags")
    res = tp.tripod_norm(*triple)
    return 0, {"schema": SCHEMA, "value": res.value,
               "converged": res.converged, "evaluations": res.evaluations,
               "slack_size": len(res.slack_set)}


def _cmd_contraction(args):
    gamma = fl.matrix_from_json(_load(args.gamma))
    rep = tp.contraction_experiment(gamma, tp.standard_tripod(len(gamma)),
                                    m_max=args.m_max, radius=args.radius)
    return 0, {"schema": SCHEMA, **rep}


def _cmd_schottky(args):
    if args.lam is None or args.theta is None:
        raise ConfigInvalid("lambda and theta must be finite rationals")
    rep = bd.schottky_rep(args.lam, args.n, axis=args.theta)
    sample = bd.schottky_boundary_map(rep, args.depth)
    return 0, {"schema": SCHEMA, "rep": bd.rep_to_json(rep),
               "sample": bd.sample_to_json(sample)}


def _cmd_anosov_report(args):
    rep = bd.rep_from_json(_load(args.rep))
    report = bd.anosov_contraction_report(rep, args.depth)
    return (0 if report["pass"] else 1), {"schema": SCHEMA, **report}


def _cmd_extend(args):
    if args.theta is None:
        raise ConfigInvalid("theta must be a finite rational turn")
    sample = bd.sample_from_json(_load(args.sample))
    kwargs = {} if args.tol is None else {"tol": args.tol}
    limit = bd.left_right_limits(sample, args.theta, args.side, **kwargs)
    return 0, {"schema": SCHEMA,
               "angle": fl.scalar_to_json(Fraction(args.theta) % 1),
               "side": args.side, "flag": fl.flag_to_json(limit)}


# ---------------------------------------------------------------------------
# Parser.


def _add_out(p):
    p.add_argument("--out", metavar="FILE", help="write the JSON here")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poslab",
        description="positivity lab: flags, diamonds, circles, tripods, "
                    "boundary maps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("suite", help="run a named property suite")
    p.add_argument("name", choices=("all",) + suites.SUITE_NAMES)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=None,
                   help="defaults to POSLAB_SEED, then 42")
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--workers", type=int, default=1)
    _add_out(p)
    p.set_defaults(handler=_cmd_suite)

    p = sub.add_parser("bruhat-cell", help="cell label of a matrix")
    p.add_argument("--matrix", required=True, metavar="FILE")
    _add_out(p)
    p.set_defaults(handler=_cmd_bruhat_cell)

    p = sub.add_parser("invw-check", help="involution factorization check")
    p.add_argument("--n", type=int, required=True)
    _add_out(p)
    p.set_defaults(handler=_cmd_invw_check)

    p = sub.add_parser("transversality-scan",
                       help="scan words of generators for a big-cell witness")
    p.add_argument("--gens", required=True, metavar="FILE",
                   help="JSON list of matrices")
    p.add_argument("--depth", type=int, required=True)
    _add_out(p)
    p.set_defaults(handler=_cmd_transversality_scan)

    p = sub.add_parser("diamond-membership",
                       help="certificate of c against the pair (a, b)")
    for f in ("a", "b", "c"):
        p.add_argument(f"--{f}", required=True, metavar="FILE")
    p.add_argument("--x", metavar="FILE",
                   help="also test x against the certified diamond")
    _add_out(p)
    p.set_defaults(handler=_cmd_diamond_membership)

    p = sub.add_parser("nesting-check",
                       help="sampled diamond nesting on a seeded triple")
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--n", type=int, default=3)
    _add_out(p)
    p.set_defaults(handler=_cmd_nesting_check)

    p = sub.add_parser("check-triple", help="positivity of a flag triple")
    for f in ("a", "b", "c"):
        p.add_argument(f"--{f}", required=True, metavar="FILE")
    _add_out(p)
    p.set_defaults(handler=_cmd_check_triple)

    p = sub.add_parser("check-quad",
                       help="positivity of a quadruple (a, x, b, y)")
    for f in ("a", "x", "b", "y"):
        p.add_argument(f"--{f}", required=True, metavar="FILE")
    _add_out(p)
    p.set_defaults(handler=_cmd_check_quad)

    p = sub.add_parser("check-config",
                       help="positivity of a cyclically ordered tuple")
    p.add_argument("--flags", required=True, metavar="FILE",
                   help="JSON list of flags")
    _add_out(p)
    p.set_defaults(handler=_cmd_check_config)

    p = sub.add_parser("circle", help="flags of the base circle at points")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--points", type=_rational_list, required=True,
                   metavar="t1,t2,...")
    _add_out(p)
    p.set_defaults(handler=_cmd_circle)

    p = sub.add_parser("circle-config-check",
                       help="exhaustive k-point circle configurations")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    _add_out(p)
    p.set_defaults(handler=_cmd_circle_config_check)

    p = sub.add_parser("tripod-distance",
                       help="coordinates distance between two points")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--tripod", type=_rational_list, required=True,
                   metavar="s-,s0,s+")
    p.add_argument("--p", required=True, metavar="FILE")
    p.add_argument("--q", required=True, metavar="FILE")
    _add_out(p)
    p.set_defaults(handler=_cmd_tripod_distance)

    p = sub.add_parser("tripod-norm", help="defect norm of a flag triple")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--triple", required=True, metavar="FILE",
                   help="JSON list of three flags")
    _add_out(p)
    p.set_defaults(handler=_cmd_tripod_norm)

    p = sub.add_parser("contraction", help="iterated diamond contraction")
    p.add_argument("--gamma", required=True, metavar="FILE")
    p.add_argument("--m-max", type=int, default=5)
    p.add_argument("--radius", type=float, default=0.5)
    _add_out(p)
    p.set_defaults(handler=_cmd_contraction)

    p = sub.add_parser("schottky",
                       help="build a ping-pong rep and its boundary sample")
    p.add_argument("--lambda", dest="lam", type=_rational, required=True)
    p.add_argument("--theta", type=_rational, default=Fraction(1))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    _add_out(p)
    p.set_defaults(handler=_cmd_schottky)

    p = sub.add_parser("anosov-report", help="cylinder decay rates of a rep")
    p.add_argument("--rep", required=True, metavar="FILE")
    p.add_argument("--depth", type=int, required=True)
    _add_out(p)
    p.set_defaults(handler=_cmd_anosov_report)

    p = sub.add_parser("extend",
                       help="one-sided limit of a boundary sample at a turn")
    p.add_argument("--sample", required=True, metavar="FILE")
    p.add_argument("--theta", type=_rational, required=True)
    p.add_argument("--side", choices=("left", "right"), required=True)
    p.add_argument("--tol", type=float, default=None,
                   help="Cauchy tolerance for the tail of flags")
    _add_out(p)
    p.set_defaults(handler=_cmd_extend)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        code, payload = args.handler(args)
    except (ConfigInvalid, UnknownSuite) as exc:
        print(f"poslab: {exc}", file=sys.stderr)
        return 2
    except PoslabError as exc:
        _emit({"schema": SCHEMA, "error": type(exc).__name__,
               "detail": str(exc)}, args.out)
        return 1
    except OSError as exc:
        print(f"poslab: {exc}", file=sys.stderr)
        return 2
    _emit(payload, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
