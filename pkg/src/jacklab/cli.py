"""Batch command-line front end.

Subcommands: jack-table, character, measure, sample, afp, kerov, experiment.
Flags override values from an optional key=value config file (--config),
which overrides defaults; the effective configuration and the seed are
echoed into report.json on every run.

Exit codes: 0 success, 2 usage error, 3 non-reducible character, 4 size cap
exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NONREDUCIBLE = 3
EXIT_CAP = 4


def _parse_rational(text: str) -> Fraction:
    return Fraction(text)


def _parse_partition(text: str):
    from .partitions import Partition

    return Partition.from_json(text)


def _sqrt_or_none(q: Fraction) -> Fraction | None:
    num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="jacklab", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, *names):
        if "n" in names:
            p.add_argument("--n", type=int)
        if "alpha" in names:
            p.add_argument("--alpha", type=str,
                           help="rational deformation parameter p/q")
            p.add_argument("--double-scaling", type=str, dest="double_scaling",
                           metavar="G,GPRIME",
                           help="alpha(n) from the (g, g') rule")
        if "family" in names:
            p.add_argument("--family", type=str, default="regular",
                           choices=["regular", "rectangle-removal", "explicit"])
            p.add_argument("--i", type=int, default=0,
                           help="rectangle side for rectangle-removal")
        p.add_argument("--out", type=str, default=".")
        p.add_argument("--format", type=str, default="csv",
                       choices=["csv", "json", "svg"])
        p.add_argument("--config", type=str, default=None,
                       help="key=value file; flags take precedence")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--jobs", type=int, default=0,
                       help="worker bound; 0 = available parallelism")
        p.add_argument("--trials", type=int, default=1000)

    p = sub.add_parser("jack-table", help="build and store a theta table")
    common(p, "n", "alpha")

    p = sub.add_parser("character", help="evaluate a normalized Jack character")
    common(p, "n", "alpha")
    p.add_argument("--pi", type=str, required=True)
    p.add_argument("--lambda", type=str, required=True, dest="lam")

    p = sub.add_parser("measure", help="measure from a character")
    common(p, "n", "alpha", "family")

    p = sub.add_parser("sample", help="sample diagrams from a family")
    common(p, "n", "alpha", "family")

    p = sub.add_parser("afp", help="approximate-factorization diagnostics")
    common(p, "alpha", "family")
    p.add_argument("--cond", type=str, default="A", choices=list("ABCD"))
    p.add_argument("--ls", type=str, default="2",
                   help="comma-separated cycle lengths l_1,..,l_ell")
    p.add_argument("--n-grid", type=str, default="4,6,8", dest="n_grid")

    p = sub.add_parser("kerov", help="Kerov polynomial expansion of Ch_l")
    common(p)
    p.add_argument("--l", type=int, required=True)

    p = sub.add_parser("experiment", help="Monte Carlo experiments")
    psub = p.add_subparsers(dest="experiment", required=True)
    for name in ("lln", "clt", "rectangle", "mean-delta"):
        q = psub.add_parser(name)
        common(q, "n", "alpha", "family")
        q.add_argument("--n-grid", type=str, default=None, dest="n_grid")
        q.add_argument("--k-range", type=str, default="2,3,4", dest="k_range")
    return top


def _apply_config_file(args, argv):
    """config file < flags: fill attributes the command line left at default."""
    if not getattr(args, "config", None):
        return args
    parser = build_parser()
    defaults = parser.parse_args([a for a in argv
                                  if not a.startswith("--config")])
    explicit = {a.split("=")[0].lstrip("-").replace("-", "_")
                for a in argv if a.startswith("--")}
    with open(args.config) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, value = line.split("=", 1)
            key = key.strip().replace("-", "_")
            if key in explicit or not hasattr(args, key):
                continue
            cur = getattr(defaults, key, None)
            if isinstance(cur, int) and not isinstance(cur, bool):
                value = int(value)
            setattr(args, key, value.strip() if isinstance(value, str) else value)
    return args


def _alpha_info(args, n: int | None = None):
    """(alpha float, exact A or None, double-scaling tuple or None)."""
    ds = getattr(args, "double_scaling", None)
    if ds:
        g, gprime = (float(x) for x in ds.split(","))
        if n is None:
            return None, None, (g, gprime)
        gam = g * math.sqrt(n) + gprime
        A = (-gam + math.sqrt(gam * gam + 4.0)) / 2.0
        return A * A, None, (g, gprime)
    text = getattr(args, "alpha", None) or "1"
    alpha = _parse_rational(text)
    return float(alpha), _sqrt_or_none(alpha), None


def _report(args, extra: dict):
    from .experiments import write_report

    payload = {"argv_config": {k: v for k, v in vars(args).items()
                               if not k.startswith("_") and v is not None},
               "seed": getattr(args, "seed", 0)}
    payload.update(extra)
    write_report(args.out, payload)


def _laurent_print(value, A_float: float) -> str:
    from .algebra import LaurentA

    if isinstance(value, LaurentA):
        return "exact: %s  evaluated: %.12g" % (value.to_json(),
                                                value.substitute(A_float))
    return "exact: %s  evaluated: %.12g" % (value, float(value))


def cmd_jack_table(args) -> int:
    from .jack import theta_table

    alpha_f, A_exact, _ = _alpha_info(args)
    alpha = A_exact * A_exact if A_exact is not None else None
    if getattr(args, "alpha", None) and A_exact is None:
        alpha = _parse_rational(args.alpha)
    table = theta_table(args.n, alpha)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "theta_n%d.json" % args.n)
    with open(path, "w") as fh:
        fh.write(table.to_json())
    _report(args, {"command": "jack-table", "n": args.n, "file": path,
                   "entries": len(table.entries)})
    print("wrote %s (%d entries)" % (path, len(table.entries)))
    return EXIT_OK


def cmd_character(args) -> int:
    from .jack import irr_character, normalized_character

    pi, lam = _parse_partition(args.pi), _parse_partition(args.lam)
    alpha_f, A_exact, _ = _alpha_info(args)
    A_float = math.sqrt(alpha_f)
    chi = irr_character(lam, pi) if pi.size == lam.size else None
    ch = normalized_character(pi, lam)
    if chi is not None:
        print("chi_%s(%s) %s" % (args.lam, args.pi, _laurent_print(chi, A_float)))
    print("Ch_%s(%s) %s" % (args.pi, args.lam, _laurent_print(ch, A_float)))
    _report(args, {"command": "character", "pi": args.pi, "lam": args.lam,
                   "alpha": alpha_f,
                   "irreducible_exact": chi.to_json() if chi is not None else None,
                   "irreducible_value": (chi.substitute(A_float)
                                         if chi is not None else None),
                   "exact": ch.to_json(), "value": ch.substitute(A_float)})
    return EXIT_OK


def _build_family_spec(args, n: int):
    from .measures import (
        rectangle_removal_character,
        regular_character,
    )

    if args.family == "regular":
        return regular_character(n)
    if args.family == "rectangle-removal":
        alpha_f, _, _ = _alpha_info(args, n)
        return rectangle_removal_character(args.i, int(round(alpha_f)))
    raise ValueError("explicit families need a table via the library API")


def cmd_measure(args) -> int:
    from .measures import measure_from_character

    n = args.n
    alpha_f, A_exact, _ = _alpha_info(args, n)
    spec = _build_family_spec(args, n)
    A = A_exact if A_exact is not None else math.sqrt(alpha_f)
    measure = measure_from_character(spec, A)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "measure.csv")
    with open(path, "w") as fh:
        fh.write(measure.to_csv())
    _report(args, {"command": "measure", "n": n, "alpha": alpha_f,
                   "exact": measure.exact, "file": path,
                   "weights": {lam.to_json(): str(w)
                               for lam, w in measure.weights.items()}})
    for lam, w in measure.weights.items():
        print("%s  %s" % (lam.to_json(), w))
    return EXIT_OK


def cmd_sample(args) -> int:
    from .experiments import trial_rng
    from .measures import sample_growth, sample_rectangle_removal

    alpha_f, _, _ = _alpha_info(args, args.n)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "samples.jsonl")
    with open(path, "w") as fh:
        for t in range(args.trials):
            rng = trial_rng(args.seed, t)
            if args.family == "rectangle-removal":
                lam = sample_rectangle_removal(args.i, int(round(alpha_f)), rng)
            else:
                lam = sample_growth(args.n, alpha_f, rng)
            fh.write(json.dumps({"trial": t, "seed": args.seed,
                                 "partition": list(lam.parts)}) + "\n")
    _report(args, {"command": "sample", "file": path, "trials": args.trials})
    print("wrote %s" % path)
    return EXIT_OK


def cmd_afp(args) -> int:
    from .cumulants import (
        CharacterFamily,
        cond_A_sequence,
        cond_B_sequence,
        cond_D_sequence,
        regular_family,
    )
    from .measures import rectangle_removal_character

    ls = tuple(int(x) for x in args.ls.split(","))
    n_grid = [int(x) for x in args.n_grid.split(",")]
    alpha_f, A_exact, ds = _alpha_info(args)
    if args.family == "regular":
        if ds is not None:
            fam = regular_family(g=ds[0], gprime=ds[1])
        else:
            fam = regular_family(alpha=A_exact * A_exact if A_exact is not None
                                 else alpha_f)
    else:
        alpha_int = int(round(alpha_f))

        def gen(n):
            i = math.isqrt(2 * n // alpha_int)
            if alpha_int * i * i != 2 * n:
                raise ValueError("grid size %d is not alpha i^2 / 2" % n)
            return rectangle_removal_character(i, alpha_int)

        fam = CharacterFamily(gen, alpha=Fraction(alpha_int),
                              label="rectangle-removal")
    if args.cond == "A":
        rep = cond_A_sequence(fam, ls, n_grid)
    elif args.cond == "B":
        rep = cond_B_sequence(fam, ls, n_grid)
    elif args.cond == "C":
        from .cumulants import PolyFun, cond_C_sequence

        rep = cond_C_sequence(fam, [PolyFun("Ch", l) for l in ls], n_grid)
    else:
        rep = cond_D_sequence(fam, ls, n_grid)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "afp_%s.json" % args.cond)
    with open(path, "w") as fh:
        fh.write(rep.to_json())
    _report(args, {"command": "afp", "condition": args.cond,
                   "scaled": rep.scaled, "fit": rep.fit, "file": path})
    print("condition %s on %r: scaled sequence %s" % (args.cond, ls, rep.scaled))
    return EXIT_OK


def cmd_kerov(args) -> int:
    from .kerov import kerov_expansion_oracle, top_degree_formula

    poly = kerov_expansion_oracle(args.l)
    top = top_degree_formula(args.l)
    agree = poly.degree_part(args.l + 1) == top
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "kerov_l%d.json" % args.l)
    with open(path, "w") as fh:
        fh.write(poly.to_json())
    _report(args, {"command": "kerov", "l": args.l, "file": path,
                   "top_degree_matches_formula": agree})
    print("Ch_%d = %r" % (args.l, poly))
    print("top-degree matches expander formula: %s" % agree)
    return EXIT_OK


def cmd_experiment(args) -> int:
    from .experiments import (
        ExperimentConfig,
        clt_experiment,
        lln_experiment,
        mean_delta_moments,
        rectangle_removal_experiment,
    )

    jobs = args.jobs if args.jobs > 0 else (os.cpu_count() or 1)
    if args.experiment == "rectangle":
        alpha_f, _, _ = _alpha_info(args)
        data = rectangle_removal_experiment(
            args.i, int(round(alpha_f)), args.trials, args.seed,
            out_dir=args.out, jobs=jobs, emit_svg=args.format == "svg")
        print("heatmap with %d segments; boxes conserved: %s; "
              "mean profile inside the square: %s"
              % (len(data.segments), data.boxes_conserved,
                 data.contained_in_square))
        return EXIT_OK
    n_grid = ([int(x) for x in args.n_grid.split(",")] if args.n_grid
              else [args.n or 100])
    k_range = [int(x) for x in args.k_range.split(",")]
    alpha_f, _, ds = _alpha_info(args, n_grid[0])
    cfg = ExperimentConfig(
        family=args.family,
        alpha=None if ds else (float(_parse_rational(args.alpha))
                               if args.alpha else 1.0),
        g=ds[0] if ds else None, gprime=ds[1] if ds else 0.0,
        n_grid=n_grid, trials=args.trials, seed=args.seed,
        out_dir=args.out, k_range=k_range, i=args.i, jobs=jobs)
    if args.experiment == "lln":
        rep = lln_experiment(cfg)
        print("median sup-distances:",
              {n: rep["stats"][str(n)]["median_sup_distance"]
               for n in sorted(cfg.n_grid)})
    elif args.experiment == "clt":
        rep = clt_experiment(cfg)
        for n in sorted(cfg.n_grid):
            for k in k_range:
                s = rep["stats"][str(n)]["Y_%d" % k]
                print("n=%d Y_%d: skew %.4f kurt %.4f" %
                      (n, k, s["skewness"], s["excess_kurtosis"]))
    else:
        rep = mean_delta_moments(cfg, k_range)
        print(json.dumps(rep["moments"], indent=1))
    return EXIT_OK


COMMANDS = {
    "jack-table": cmd_jack_table,
    "character": cmd_character,
    "measure": cmd_measure,
    "sample": cmd_sample,
    "afp": cmd_afp,
    "kerov": cmd_kerov,
    "experiment": cmd_experiment,
}


def run(argv: list[str]) -> int:
    from .jack import CapExceededError
    from .measures import NonReducibleError

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    args = _apply_config_file(args, argv)
    try:
        return COMMANDS[args.command](args)
    except NonReducibleError as exc:
        print("non-reducible character: %s" % exc, file=sys.stderr)
        return EXIT_NONREDUCIBLE
    except CapExceededError as exc:
        print("size cap exceeded: %s" % exc, file=sys.stderr)
        return EXIT_CAP
    except (ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


def main():
    raise SystemExit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
