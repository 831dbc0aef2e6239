"""Trial orchestration: instance construction, per-trial seeding, budget
auditing, statistical aggregation and CSV/JSON reporting."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field

from .core import BitString, FiniteDistribution, PairDistribution, SeededRng
from .dlmodel import GeneralDLRep, MonotoneDLRep, table_target
from .exact import dist_mdl
from .instances import (InstanceBundle, gen_dl_yes, gen_groups4, gen_mdl_yes,
                        gen_pentagon, gen_total_yes)
from .mdl import DEFAULT_MDL, MdlConstants, budget_mdl, budget_mdl_samples, monotone_dl_tester
from .dl import DEFAULT_DL, DlConstants, budget_dl, budget_dl_samples, decision_list_tester
from .oracles import BudgetExhausted, QueryLedger
from .total_order import (DEFAULT_TOTAL, TotalConstants, budget_total,
                          budget_total_samples, test_total_ordering)

CSV_COLUMNS = ["family", "n", "eps", "delta", "trial", "seed", "verdict",
               "queries", "samples", "runtime_ms"]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3


def wilson_interval(successes: int, trials: int, z: float = 2.576) -> tuple[float, float]:
    """Two-sided Wilson score interval (default 99% confidence)."""
    if trials == 0:
        return (0.0, 1.0)
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = phat + z * z / (2 * trials)
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials))
    return ((centre - half) / denom, (centre + half) / denom)


@dataclass
class RunConfig:
    tester: str               # "total" | "mdl" | "dl"
    family: str
    n: int
    eps: float
    trials: int = 1
    seed: int = 1
    delta: float = 1.0 / 6.0
    budget: int | None = None
    consts: dict = field(default_factory=dict)
    instance_path: str | None = None
    support_size: int | None = None
    out_path: str | None = None
    jobs: int = 1

    def validate(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0,1)")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0,1)")


@dataclass
class TrialReport:
    rows: list
    accepts: int
    rejects: int
    overbudget: int

    @property
    def trials(self) -> int:
        return len(self.rows)

    def accept_rate(self) -> float:
        return self.accepts / max(1, self.trials)

    def wilson(self) -> tuple[float, float]:
        return wilson_interval(self.accepts, self.trials)

    def total_queries(self) -> int:
        return sum(r["queries"] for r in self.rows)

    def total_samples(self) -> int:
        return sum(r["samples"] for r in self.rows)


def default_support(n: int) -> int:
    return max(4, min(2048, n // 2))


def build_instance(cfg: RunConfig) -> InstanceBundle:
    if cfg.instance_path:
        with open(cfg.instance_path, "r", encoding="utf-8") as fh:
            return load_bundle(json.load(fh))
    rng = SeededRng(cfg.seed, 0xB00)
    support = cfg.support_size or default_support(cfg.n)
    fam = cfg.family
    if fam == "total-yes":
        return gen_total_yes(cfg.n, min(support, cfg.n * (cfg.n - 1) // 2), rng)
    if fam == "pentagon":
        return gen_pentagon(cfg.n, rng)
    if fam == "mdl-yes":
        return gen_mdl_yes(cfg.n, support, rng)
    if fam == "dl-yes":
        return gen_dl_yes(cfg.n, support, rng)
    if fam == "groups4-yes":
        return gen_groups4(cfg.n, rng, "yes")
    if fam == "groups4-no":
        return gen_groups4(cfg.n, rng, "no")
    raise ValueError(f"unknown family {fam!r}")


def _constants_for(cfg: RunConfig):
    c = cfg.consts
    mdl = MdlConstants(
        delta=cfg.delta,
        type_factor=c.get("c_type", DEFAULT_MDL.type_factor),
        nil_factor=c.get("c_nil", DEFAULT_MDL.nil_factor),
        block_cap_factor=c.get("c_blockcap", DEFAULT_MDL.block_cap_factor),
        pair_cap_factor=c.get("c_paircap", DEFAULT_MDL.pair_cap_factor),
        t2_factor=c.get("c_t2", DEFAULT_MDL.t2_factor),
    )
    total = TotalConstants(
        sketch_factor=c.get("c_sk", DEFAULT_TOTAL.sketch_factor),
        local_factor=c.get("c_lc", DEFAULT_TOTAL.local_factor),
        long_samples=c.get("c_long", DEFAULT_TOTAL.long_samples),
        crowd_factor=c.get("c_crowd", DEFAULT_TOTAL.crowd_factor),
    )
    dl = DlConstants(
        mdl=mdl,
        t_amplify=int(c["t_amplify"]) if "t_amplify" in c else DEFAULT_DL.t_amplify,
        outer_factor=c.get("c_outer", DEFAULT_DL.outer_factor),
        inner_factor=c.get("c_inner", DEFAULT_DL.inner_factor),
        accept_threshold=c.get("c_accept_threshold", DEFAULT_DL.accept_threshold),
        outer_rounds=int(c["outer_rounds"]) if "outer_rounds" in c else None,
        inner_rounds=int(c["inner_rounds"]) if "inner_rounds" in c else None,
        sketch_source=c.get("sketch_source", DEFAULT_DL.sketch_source),
    )
    return total, mdl, dl


def run_one_trial(cfg: RunConfig, bundle: InstanceBundle, trial: int):
    total_c, mdl_c, dl_c = _constants_for(cfg)
    ledger = QueryLedger(query_budget=cfg.budget)
    trial_rng = SeededRng(cfg.seed, 0).derive(trial + 1)
    start = time.perf_counter()
    try:
        if cfg.tester == "total":
            oracle = bundle.comparison_oracle(ledger)
            verdict = test_total_ordering(oracle, bundle.dist, cfg.eps, trial_rng, total_c)
        elif cfg.tester == "mdl":
            oracle = bundle.function_oracle(ledger)
            verdict = monotone_dl_tester(oracle, bundle.dist, cfg.eps, trial_rng, mdl_c)
        elif cfg.tester == "dl":
            oracle = bundle.function_oracle(ledger)
            verdict = decision_list_tester(oracle, bundle.dist, cfg.eps, trial_rng, dl_c)
        else:
            raise ValueError(f"unknown tester {cfg.tester!r}")
        decision = verdict.decision
    except BudgetExhausted:
        decision = "overbudget"
    runtime_ms = (time.perf_counter() - start) * 1000.0
    fq, samples = ledger.snapshot()
    return {
        "family": bundle.family, "n": cfg.n, "eps": cfg.eps, "delta": cfg.delta,
        "trial": trial, "seed": cfg.seed, "verdict": decision,
        "queries": fq, "samples": samples, "runtime_ms": round(runtime_ms, 3),
    }


_WORKER_CACHE: dict = {}


def _pool_task(args):
    cfg, trial = args
    key = (cfg.family, cfg.n, cfg.seed, cfg.support_size, cfg.instance_path)
    bundle = _WORKER_CACHE.get(key)
    if bundle is None:
        bundle = build_instance(cfg)
        _WORKER_CACHE[key] = bundle
    return run_one_trial(cfg, bundle, trial)


def run_trials(cfg: RunConfig, bundle: InstanceBundle | None = None) -> TrialReport:
    cfg.validate()
    explicit = bundle is not None
    if bundle is None:
        bundle = build_instance(cfg)
    if cfg.jobs > 1 and not explicit:
        # per-trial seeds make scheduling irrelevant; rows come back by index
        import concurrent.futures
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            rows = list(pool.map(_pool_task, [(cfg, t) for t in range(cfg.trials)]))
    else:
        rows = [run_one_trial(cfg, bundle, t) for t in range(cfg.trials)]
    accepts = sum(1 for r in rows if r["verdict"] == "accept")
    rejects = sum(1 for r in rows if r["verdict"] == "reject")
    over = sum(1 for r in rows if r["verdict"] == "overbudget")
    return TrialReport(rows=rows, accepts=accepts, rejects=rejects, overbudget=over)


def report_csv(report: TrialReport) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS)
    writer.writeheader()
    for row in report.rows:
        writer.writerow(row)
    return buf.getvalue()


def scaling_experiment(cfg: RunConfig, n_list: list[int]) -> tuple[str, list[dict]]:
    """One row per (n, trial) plus a mean-queries summary per n."""
    rows = []
    summaries = []
    for n in n_list:
        sub = RunConfig(**{**cfg.__dict__, "n": n})
        report = run_trials(sub)
        rows.extend(report.rows)
        mean_q = report.total_queries() / report.trials
        summaries.append({"n": n, "mean_queries": mean_q,
                          "mean_samples": report.total_samples() / report.trials,
                          "trials": report.trials})
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS)
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue(), summaries


def budget_for(cfg: RunConfig) -> tuple[int, int]:
    total_c, mdl_c, dl_c = _constants_for(cfg)
    if cfg.tester == "total":
        return budget_total(cfg.n, cfg.eps, total_c), budget_total_samples(cfg.n, cfg.eps, total_c)
    if cfg.tester == "mdl":
        return budget_mdl(cfg.n, cfg.eps, mdl_c), budget_mdl_samples(cfg.n, cfg.eps, mdl_c)
    return budget_dl(cfg.n, cfg.eps, dl_c), budget_dl_samples(cfg.n, cfg.eps, dl_c)


def oracle_check(bundles: list[InstanceBundle], eps: float, trials_per_stratum: int,
                 seed: int, constants: MdlConstants = DEFAULT_MDL) -> dict:
    """Cross-tabulate monotone-tester verdict rates against exact distances on
    a tiny corpus.  Returns the stratified rates and any contract violations
    (close instances accepted too rarely / far ones rejected too rarely)."""
    strata = {"zero": [], "far": [], "middle": []}
    for b in bundles:
        report = dist_mdl(b.n, b.target, b.dist)
        if report.distance <= 1e-12:
            strata["zero"].append(b)
        elif report.distance >= eps:
            strata["far"].append(b)
        else:
            strata["middle"].append(b)
    out = {"eps": eps, "violations": [], "strata": {}}
    for name in ("zero", "far"):
        group = strata[name]
        if not group:
            out["strata"][name] = {"bundles": 0, "trials": 0, "rate": None}
            continue
        per = max(1, math.ceil(trials_per_stratum / len(group)))
        accepts = rejects = total = 0
        for i, b in enumerate(group):
            for t in range(per):
                ledger = QueryLedger()
                oracle = b.function_oracle(ledger)
                rng = SeededRng(seed, (i << 16) | t)
                v = monotone_dl_tester(oracle, b.dist, eps, rng, constants)
                accepts += v.accepted
                rejects += v.rejected
                total += 1
        rate = (accepts if name == "zero" else rejects) / total
        out["strata"][name] = {"bundles": len(group), "trials": total, "rate": rate}
        if rate < 2.0 / 3.0 - 0.05:
            out["violations"].append((name, rate))
    out["strata"]["middle"] = {"bundles": len(strata["middle"])}
    return out


# -- instance file format ----------------------------------------------------

def save_bundle(bundle: InstanceBundle) -> dict:
    doc = {"version": 1, "n": bundle.n}
    fam = bundle.family
    params = bundle.params
    if fam == "mdl-yes":
        rep: MonotoneDLRep = params["rep"]
        doc["function"] = {"type": "mdl", "pi": list(rep.pi), "nu": list(rep.nu)}
    elif fam == "dl-yes":
        rep: GeneralDLRep = params["rep"]
        doc["function"] = {"type": "dl", "pi": list(rep.pi), "mu": list(rep.mu),
                           "nu": list(rep.nu)}
    elif fam in ("groups4-yes", "groups4-no"):
        doc["function"] = {"type": fam, "pi": list(params["pi"])}
    elif fam == "pentagon":
        doc["function"] = {"type": "pentagon", "order": list(params["order"])}
    elif fam == "total-yes":
        doc["function"] = {"type": "ordering", "order": list(params["order"])}
    elif fam == "table":
        doc["function"] = {"type": "table", "bits": params["bits"]}
    else:
        raise ValueError(f"family {fam!r} has no serialized form")
    if bundle.kind == "boolean":
        doc["distribution"] = [{"x": x.to_hex(), "p": float(w)}
                               for x, w in zip(bundle.dist.atoms, bundle.dist.weights)]
    else:
        doc["distribution"] = {"pairs": [{"u": u, "v": v, "p": float(w)}
                                         for (u, v), w in zip(bundle.dist.pairs,
                                                              bundle.dist.weights)]}
    return doc


def load_bundle(doc: dict) -> InstanceBundle:
    if doc.get("version") != 1:
        raise ValueError("unsupported instance file version")
    n = doc["n"]
    fn = doc["function"]
    kind = fn["type"]
    dist_doc = doc["distribution"]
    if isinstance(dist_doc, dict):
        dist = PairDistribution(n, [((e["u"], e["v"]), e["p"]) for e in dist_doc["pairs"]])
    else:
        dist = FiniteDistribution(n, [(BitString.from_hex(n, e["x"]), e["p"])
                                      for e in dist_doc])
    if kind == "mdl":
        rep = MonotoneDLRep(n, fn["pi"], fn["nu"])
        return InstanceBundle(kind="boolean", family="mdl-yes", n=n, seed=0,
                              params={"rep": rep}, dist=dist, ground_truth=("yes",),
                              target=rep.target())
    if kind == "dl":
        rep = GeneralDLRep(n, fn["pi"], fn["mu"], fn["nu"])
        return InstanceBundle(kind="boolean", family="dl-yes", n=n, seed=0,
                              params={"rep": rep}, dist=dist, ground_truth=("yes",),
                              target=rep.target())
    if kind == "table":
        bits = fn["bits"]
        return InstanceBundle(kind="boolean", family="table", n=n, seed=0,
                              params={"bits": bits}, dist=dist,
                              ground_truth=("unknown",), target=table_target(bits))
    if kind in ("groups4-yes", "groups4-no"):
        from .instances import groups4_from_pi
        side = kind.split("-")[1]
        bundle = groups4_from_pi(n, fn["pi"], side)
        bundle.dist = dist
        return bundle
    if kind in ("pentagon", "ordering"):
        order = fn["order"]
        pos = [0] * (n + 1)
        for p, v in enumerate(order):
            pos[v] = p
        if kind == "ordering":
            less = lambda u, v, _p=pos: _p[u] < _p[v]
            fam = "total-yes"
            truth = ("yes",)
        else:
            def less(u, v, _p=pos):
                pu, pv = _p[u], _p[v]
                if pu // 5 != pv // 5:
                    return pu // 5 < pv // 5
                return (pv - pu) % 5 in (1, 2)
            fam = "pentagon"
            truth = ("far", 0.2)
        return InstanceBundle(kind="comparison", family=fam, n=n, seed=0,
                              params={"order": tuple(order)}, dist=dist,
                              ground_truth=truth, less=less)
    raise ValueError(f"unknown function type {kind!r}")
