"""Command-line front-end for the testers, the collision lab and the exact
cross-checks."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .core import SeededRng
from .birthday import CollisionExperiment, run_bipartite_birthday, run_hypergraph_birthday
from .harness import (EXIT_BUDGET, EXIT_OK, EXIT_USAGE, RunConfig, build_instance,
                      oracle_check, report_csv, run_trials, save_bundle,
                      scaling_experiment, wilson_interval)
from .instances import gen_mdl_yes


def _parse_consts(entries) -> dict:
    out = {}
    for item in entries or ():
        if "=" not in item:
            raise ValueError(f"--const expects name=value, got {item!r}")
        name, value = item.split("=", 1)
        out[name] = float(value)
    return out


def _default_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("SUBLINTEST_SEED")
    return int(env) if env else 1


def _add_common(p):
    p.add_argument("--n", type=int, default=256)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--delta", type=float, default=1.0 / 6.0)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--family", type=str, default=None)
    p.add_argument("--instance", type=str, default=None)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--support", type=int, default=None)
    p.add_argument("--out", type=str, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--const", action="append", default=[],
                   help="override a tuning constant, e.g. --const c_sk=4")


def _make_cfg(tester: str, args, default_family: str) -> RunConfig:
    return RunConfig(tester=tester, family=args.family or default_family,
                     n=args.n, eps=args.eps, trials=args.trials,
                     seed=_default_seed(args), delta=args.delta,
                     budget=args.budget, consts=_parse_consts(args.const),
                     instance_path=args.instance, support_size=args.support,
                     out_path=args.out, jobs=args.jobs)


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _run_tester(tester: str, args, default_family: str) -> int:
    cfg = _make_cfg(tester, args, default_family)
    try:
        cfg.validate()
        report = run_trials(cfg)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(report_csv(report), cfg.out_path)
    lo, hi = report.wilson()
    print(f"# accept_rate={report.accept_rate():.4f} wilson99=[{lo:.4f},{hi:.4f}] "
          f"overbudget={report.overbudget}", file=sys.stderr)
    return EXIT_BUDGET if report.overbudget else EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="sublintest",
                                     description="distribution-free testers and their lab")
    sub = parser.add_subparsers(dest="cmd", required=True)

    for cmd, fam in (("test-total", "total-yes"), ("test-mdl", "mdl-yes"),
                     ("test-dl", "dl-yes")):
        p = sub.add_parser(cmd)
        _add_common(p)

    p = sub.add_parser("birthday")
    p.add_argument("--variant", choices=["bipartite", "hyper3", "hyper4"],
                   default="bipartite")
    p.add_argument("--size", type=int, default=20)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--instance", type=str, default=None,
                   help="JSON experiment definition (overrides the canned family)")
    p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("scaling")
    _add_common(p)
    p.add_argument("--n-list", type=str, default="1024,4096,16384")

    p = sub.add_parser("oracle-check")
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--eps", type=float, default=0.2)
    p.add_argument("--bundles", type=int, default=50)
    p.add_argument("--trials", type=int, default=400)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", type=str, default=None)

    p = sub.add_parser("gen-instance")
    _add_common(p)

    args = parser.parse_args(argv)
    cmd = args.cmd

    if cmd == "test-total":
        return _run_tester("total", args, "total-yes")
    if cmd == "test-mdl":
        return _run_tester("mdl", args, "mdl-yes")
    if cmd == "test-dl":
        return _run_tester("dl", args, "dl-yes")

    if cmd == "birthday":
        seed = args.seed if args.seed is not None else int(os.environ.get("SUBLINTEST_SEED", "1"))
        rng = SeededRng(seed, 0xB1)
        size = args.size
        if args.instance:
            from .birthday import experiment_from_json
            with open(args.instance, "r", encoding="utf-8") as fh:
                exp = experiment_from_json(json.load(fh))
            runner = run_bipartite_birthday if exp.right else run_hypergraph_birthday
            rate = runner(exp, rng)
            lo, hi = wilson_interval(round(rate * exp.trials), exp.trials)
            _emit(json.dumps({"variant": "file", "rate": rate,
                              "wilson99": [lo, hi]}, indent=2) + "\n", args.out)
            return EXIT_OK
        if args.variant == "bipartite":
            left = {f"u{i}": 1.0 / (2 * size) for i in range(size)}
            right = {f"v{i}": 1.0 / (2 * size) for i in range(size)}
            edges = [(f"u{i}", f"v{j}") for i in range(size) for j in range(size)]
            exp = CollisionExperiment(edges=edges, left=left, right=right,
                                      m=args.m or size, m_prime=args.m or size,
                                      trials=args.trials,
                                      epsilon=0.5, justification="uniform complete bipartite")
            rate = run_bipartite_birthday(exp, rng)
        else:
            k = 3 if args.variant == "hyper3" else 4
            groups = max(1, size // k)
            left = {f"w{i}": 1.0 / (groups * k) for i in range(groups * k)}
            edges = [tuple(f"w{g * k + j}" for j in range(k)) for g in range(groups)]
            eps = 1.0 / k  # one vertex per edge must be covered
            m = args.m or int(10 * k * k * (groups * k) ** ((k - 1) / k) / eps) + 1
            exp = CollisionExperiment(edges=edges, left=left, m=m, trials=args.trials,
                                      epsilon=eps, justification="disjoint edges")
            rate = run_hypergraph_birthday(exp, rng)
        lo, hi = wilson_interval(round(rate * args.trials), args.trials)
        _emit(json.dumps({"variant": args.variant, "rate": rate,
                          "wilson99": [lo, hi]}, indent=2) + "\n", args.out)
        return EXIT_OK

    if cmd == "scaling":
        cfg = _make_cfg("total", args, args.family or "total-yes")
        try:
            n_list = [int(x) for x in args.n_list.split(",")]
            csv_text, summaries = scaling_experiment(cfg, n_list)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        _emit(csv_text, cfg.out_path)
        for s in summaries:
            print(f"# n={s['n']} mean_queries={s['mean_queries']:.1f}", file=sys.stderr)
        return EXIT_OK

    if cmd == "oracle-check":
        seed = args.seed if args.seed is not None else int(os.environ.get("SUBLINTEST_SEED", "1"))
        bundles = [gen_mdl_yes(args.n, 3, SeededRng(seed, i)) for i in range(args.bundles)]
        out = oracle_check(bundles, args.eps, args.trials, seed)
        _emit(json.dumps(out, indent=2, default=str) + "\n", args.out)
        return EXIT_OK

    if cmd == "gen-instance":
        cfg = _make_cfg("mdl", args, args.family or "mdl-yes")
        try:
            bundle = build_instance(cfg)
            doc = save_bundle(bundle)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        _emit(json.dumps(doc) + "\n", cfg.out_path)
        return EXIT_OK

    return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
