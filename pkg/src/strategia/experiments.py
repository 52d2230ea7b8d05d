"""Named experiments, evaluation tables, and their pass/fail checks.

Every experiment returns a ResultTable (the CSV payload) plus a list of
CheckResults. Monte Carlo experiments decompose into independent units that
are mapped over a process pool in a fixed order, with every unit's seed
derived from the master seed and a global unit or trial index, so the output
is byte for byte identical regardless of the worker count.

The canonical-instance experiments (example1, example2, obs1, thm3, thm4,
thm5) construct their own scenarios; graph-learn and uniform-conv run on the
configured scenario, defaulting to a seeded random one with candidate
graphs.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .config import build_scenario
from .domain import (
    FiniteDomain,
    Hypothesis,
    HypothesisClass,
    LabeledDistribution,
    ManipulationGraph,
)
from .errors import ConfigError, UndefinedBurdenError
from .graphdist import (
    GraphSample,
    draw_graph_sample,
    empirical_sample_distance,
    graph_erm,
    hpx_distance,
    read_graph_sample,
    surrogate_bounds,
)
from .learners import draw_sample, erm, ic_erm, singleton_learner, trial_seed
from .losses import (
    LossKind,
    class_component_matrix,
    effective_hypothesis,
    expected_loss,
    is_incentive_compatible,
    loss_table,
    social_burden,
)
from .results import ResultTable
from .scenarios import (
    Scenario,
    gen_example1,
    gen_example2,
    gen_obs1,
    gen_random,
    obs1_distribution,
)
from .vcdim import class_system, is_shattered, loss_class, vc_dimension

# Disjoint trial-index ranges keep derived seeds collision-free per run.
_THM4_INSTANCE_BASE = 10_000_000
_THM4_UNIT_BASE = 20_000_000
_THM5_BASE = 30_000_000
_UC_BASE = 50_000_000


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass
class ExperimentResult:
    name: str
    table: ResultTable
    checks: list[CheckResult] = field(default_factory=list)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]


def _check(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name, bool(passed), detail)


def _merge_params(name: str, params: Optional[dict], defaults: dict) -> dict:
    params = dict(params or {})
    unknown = set(params) - set(defaults)
    if unknown:
        raise ConfigError(
            f"experiment.params: unknown key(s) {sorted(unknown)} for {name!r}; "
            f"allowed: {sorted(defaults)}"
        )
    merged = dict(defaults)
    merged.update(params)
    return merged


def _run_units(fn: Callable, units: Sequence, workers: int) -> list:
    """Map units over a process pool, preserving input order."""
    if workers <= 1 or len(units) <= 1:
        return [fn(u) for u in units]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        chunk = max(1, math.ceil(len(units) / (4 * workers)))
        return list(ex.map(fn, units, chunksize=chunk))


def describe_hypothesis(h: Hypothesis) -> str:
    d = h.descriptor
    if d is None:
        return "".join("1" if b else "0" for b in h.labels)
    if d[0] == "threshold":
        return f"threshold(axis={d[1]},at={d[2]:g})"
    if d[0] == "halfspace":
        w = ",".join(f"{v:g}" for v in d[1])
        return f"halfspace(w=({w}),b={d[2]:g})"
    if d[0] == "singleton":
        return f"singleton({d[1]})"
    if d[0] == "constant":
        return f"constant({d[1]})"
    return repr(d)


def _labels_bits(h: Hypothesis) -> str:
    return "".join("1" if b else "0" for b in h.labels)


# ---------------------------------------------------------------------------
# evaluation and VC tables (the eval and vc subcommands)


def eval_table(sc: Scenario, burden: bool = True) -> ResultTable:
    """Per-member exact losses under the scenario's graph and distribution."""
    table = ResultTable(
        (
            "index",
            "hypothesis",
            "binary_loss",
            "strategic_loss",
            "component_loss",
            "incentive_compatible",
            "effective_labels",
            "effective_binary_loss",
            "burden_conditional",
            "burden_numerator",
        )
    )
    strategic = LossKind.strategic(sc.graph)
    component = LossKind.component(sc.graph)
    binary = LossKind.binary()
    for i, h in enumerate(sc.hclass):
        bc = bn = None
        if burden:
            try:
                sb = social_burden(h, sc.dist, graph=sc.graph)
                bc, bn = sb.conditional, sb.numerator
            except UndefinedBurdenError:
                pass
        eff = effective_hypothesis(h, sc.graph)
        table.append(
            i,
            describe_hypothesis(h),
            expected_loss(binary, h, sc.dist),
            expected_loss(strategic, h, sc.dist),
            expected_loss(component, h, sc.dist),
            is_incentive_compatible(h, sc.graph),
            _labels_bits(eff),
            expected_loss(binary, eff, sc.dist),
            bc,
            bn,
        )
    return table


def vc_table(
    sc: Scenario,
    targets: Optional[Sequence[str]] = None,
    cap: Optional[int] = None,
    ground_limit: Optional[int] = None,
) -> ResultTable:
    """VC reports for the class and its loss classes.

    Targets: class (positive sets over points), binary / strategic (loss
    sets over (point, label) pairs), component (loss sets over points), and
    graph (loss sets of (hypothesis, candidate) pairs over the true
    successor-set ground; needs candidate graphs).
    """
    from .vcdim import DEFAULT_CAP, DEFAULT_GROUND_LIMIT, graph_loss_class

    cap = DEFAULT_CAP if cap is None else cap
    ground_limit = DEFAULT_GROUND_LIMIT if ground_limit is None else ground_limit
    if targets is None:
        targets = ["class", "binary", "strategic", "component"]
        if sc.graph_class is not None:
            targets.append("graph")
    table = ResultTable(("target", "dimension", "capped", "ground_size", "set_count", "witness"))
    H = sc.hclass
    for t in targets:
        if t == "class":
            system = class_system(H)
        elif t == "binary":
            system = loss_class(H, LossKind.binary())
        elif t == "strategic":
            system = loss_class(H, LossKind.strategic(sc.graph))
        elif t == "component":
            system = loss_class(H, LossKind.component(sc.graph))
        elif t == "graph":
            if sc.graph_class is None:
                raise ConfigError("vc.targets: 'graph' needs a scenario with candidate graphs")
            nsets = sc.graph.neighbor_sets()
            pairs = [(x, nsets[x]) for x in range(sc.domain.size)]
            system = graph_loss_class(H, list(sc.graph_class), sc.domain, pairs)
        else:
            raise ConfigError(f"vc.targets: unknown target {t!r}")
        report = vc_dimension(system, cap=cap, ground_limit=ground_limit)
        table.append(
            t,
            report.dimension,
            report.capped,
            len(system.ground),
            len(system.sets),
            ";".join(str(i) for i in report.witness),
        )
    return table


# ---------------------------------------------------------------------------
# example1: gaming on a two-way chain with thresholds


def _exp_example1(spec, params, seed, workers) -> ExperimentResult:
    """Thresholds on a bidirectional chain: only the constants resist gaming,
    and any such hypothesis pays one half on the balanced two-block
    distribution, while the unrestricted strategic optimum pays 1/n."""
    sc = gen_example1(n=int(params["n"]))
    H, P, graph = sc.hclass, sc.dist, sc.graph
    strategic = LossKind.strategic(graph)
    table = ResultTable(
        ("threshold", "binary_loss", "strategic_loss", "component_loss",
         "incentive_compatible", "effective_labels")
    )
    ic_flags = []
    strategic_losses = []
    for h in H:
        flag = is_incentive_compatible(h, graph)
        s = expected_loss(strategic, h, P)
        ic_flags.append(flag)
        strategic_losses.append(s)
        table.append(
            float(h.descriptor[2]),
            expected_loss(LossKind.binary(), h, P),
            s,
            expected_loss(LossKind.component(graph), h, P),
            flag,
            _labels_bits(effective_hypothesis(h, graph)),
        )
    checks = []
    constants = {i for i, h in enumerate(H) if not h.labels.any() or h.labels.all()}
    ic_set = {i for i, f in enumerate(ic_flags) if f}
    checks.append(
        _check(
            "example1.ic-members",
            ic_set == constants,
            f"incentive compatible members {sorted(ic_set)} vs constants {sorted(constants)}",
        )
    )
    ic_losses = [strategic_losses[i] for i in sorted(ic_set)]
    checks.append(
        _check(
            "example1.ic-loss-half",
            all(v == 0.5 for v in ic_losses),
            f"strategic loss of incentive compatible members: {ic_losses}",
        )
    )
    S = draw_sample(P, int(params["sample_size"]), trial_seed(seed, 0))
    pick = ic_erm(H, S, graph)
    pick_loss = expected_loss(strategic, pick.hypothesis, P)
    checks.append(
        _check(
            "example1.ic-erm-loss",
            pick_loss == 0.5 and is_incentive_compatible(pick.hypothesis, graph),
            f"picked index {pick.index} with true strategic loss {pick_loss}",
        )
    )
    best = min(strategic_losses)
    checks.append(
        _check(
            "example1.gaming-gap",
            best < min(ic_losses),
            f"unrestricted strategic optimum {best} vs incentive compatible optimum {min(ic_losses)}",
        )
    )
    return ExperimentResult("example1", table, checks)


# ---------------------------------------------------------------------------
# example2: strategic vs accuracy vs post-response optima on a one-way chain


def _exp_example2(spec, params, seed, workers) -> ExperimentResult:
    """Sweep the decisive probability: the strategic optimum switches between
    the two interior thresholds, while the post-response optimum stays at the
    upper one with exact loss zero."""
    p1, p4 = float(params["p1"]), float(params["p4"])
    grid = [float(v) for v in params["p2_grid"]]
    sample_size = int(params["sample_size"])
    table = ResultTable(
        ("p2", "p3", "strategic_best", "strategic_best_loss",
         "post_response_best", "post_response_loss", "erm_pick", "erm_empirical_loss")
    )
    checks = []
    switch_ok, post_ok, domination_ok = True, True, True
    details = []
    for row_i, p2 in enumerate(grid):
        p3 = 1.0 - p1 - p4 - p2
        if p3 < 0:
            raise ConfigError(f"experiment.params: p2={p2} leaves a negative p3")
        sc = gen_example2(p1, p2, p3, p4)
        H, P, graph = sc.hclass, sc.dist, sc.graph
        strategic = LossKind.strategic(graph)
        losses = [expected_loss(strategic, h, P) for h in H]
        best_i = int(np.argmin(losses))
        eff_losses = [
            expected_loss(LossKind.binary(), effective_hypothesis(h, graph), P) for h in H
        ]
        post_i = int(np.argmin(eff_losses))
        S = draw_sample(P, sample_size, trial_seed(seed, row_i))
        pick = erm(H, S, strategic)
        cut = lambda i: float(H[i].descriptor[2])
        table.append(
            p2, p3, cut(best_i), losses[best_i], cut(post_i), eff_losses[post_i],
            cut(pick.index), pick.empirical_value,
        )
        expect = 2.5 if p2 <= p3 else 3.5
        if cut(best_i) != expect:
            switch_ok = False
            details.append(f"p2={p2}: strategic best {cut(best_i)} expected {expect}")
        if cut(post_i) != 3.5 or eff_losses[post_i] != 0.0:
            post_ok = False
            details.append(f"p2={p2}: post-response best {cut(post_i)} loss {eff_losses[post_i]}")
        for h, s in zip(H, losses):
            bound = expected_loss(LossKind.binary(), h, P) + expected_loss(
                LossKind.component(graph), h, P
            )
            if s > bound + 1e-12:
                domination_ok = False
                details.append(f"p2={p2}: domination fails at {describe_hypothesis(h)}")
    checks.append(
        _check(
            "example2.optimum-switch",
            switch_ok,
            "; ".join(details) or "strategic optimum is the lower threshold iff p2 <= p3",
        )
    )
    checks.append(
        _check(
            "example2.post-response-zero",
            post_ok,
            "post-response optimum is the upper threshold with exact loss 0 on every row",
        )
    )
    checks.append(
        _check(
            "example2.domination",
            domination_ok,
            "strategic loss <= binary + component for every member and row",
        )
    )
    return ExperimentResult("example2", table, checks)


# ---------------------------------------------------------------------------
# obs1: a VC-1 class whose strategic loss class has dimension d


def _exp_obs1(spec, params, seed, workers) -> ExperimentResult:
    """Singleton blow-up: the class shatters no pair, yet its strategic loss
    sets cut the d rejected source points completely freely."""
    table = ResultTable(
        ("d", "n_points", "class_vc", "strategic_vc", "strategic_capped", "witness")
    )
    checks = []
    cap = int(params["cap"])
    for d in [int(v) for v in params["d_values"]]:
        sc = gen_obs1(d)
        H = sc.hclass
        class_report = vc_dimension(class_system(H), cap=cap)
        strat_system = loss_class(H, LossKind.strategic(sc.graph))
        strat_report = vc_dimension(strat_system, cap=cap)
        source_pairs = [2 * i for i in range(d)]  # ground index of (x_i, 0)
        shattered = is_shattered(strat_system, source_pairs)
        table.append(
            d,
            sc.domain.size,
            class_report.dimension,
            strat_report.dimension,
            strat_report.capped,
            ";".join(str(i) for i in strat_report.witness),
        )
        checks.append(
            _check(
                f"obs1.class-vc[d={d}]",
                class_report.dimension == 1 and not class_report.capped,
                f"class dimension {class_report.dimension}",
            )
        )
        checks.append(
            _check(
                f"obs1.strategic-vc[d={d}]",
                strat_report.dimension == d and not strat_report.capped,
                f"strategic loss class dimension {strat_report.dimension}, expected {d}",
            )
        )
        checks.append(
            _check(
                f"obs1.source-shattering[d={d}]",
                shattered,
                f"rejected-source pairs {source_pairs} shattered: {shattered}",
            )
        )
    return ExperimentResult("obs1", table, checks)


# ---------------------------------------------------------------------------
# thm3: sample complexity of the singleton learner


@dataclass(eq=False)
class _Thm3Unit:
    weights: np.ndarray
    adj: np.ndarray
    targets: tuple
    eps: float
    n: int
    master: int
    t0: int
    count: int


def _thm3_unit_run(unit: _Thm3Unit) -> int:
    P = LabeledDistribution(unit.weights)
    domain = FiniteDomain(unit.weights.shape[0])
    graph = ManipulationGraph.from_adjacency(domain, unit.adj)
    kind = LossKind.strategic(graph)
    fails = 0
    for t in range(unit.t0, unit.t0 + unit.count):
        S = draw_sample(P, unit.n, trial_seed(unit.master, t))
        learned = singleton_learner(S, unit.targets)
        if expected_loss(kind, learned, P) > unit.eps:
            fails += 1
    return fails


def _exp_thm3(spec, params, seed, workers) -> ExperimentResult:
    """Singleton learner on a realizable distribution: after
    n = ceil(ln(1/delta) / (2 eps)) + slack draws, the failure rate (true
    strategic loss above eps) stays below delta. Failure happens exactly when
    the positive target never shows up, with probability (1 - 2 eps)^n."""
    d = int(params["d"])
    target_j = int(params["target_j"])
    delta = float(params["delta"])
    slack = int(params["slack"])
    trials = int(params["trials"])
    block = int(params["block"])
    sc = gen_obs1(d)
    targets = tuple(range(d, d + (1 << d)))
    table = ResultTable(
        ("eps", "delta", "n", "exact_failure_prob", "observed_failure_rate", "trials")
    )
    checks = []
    for ei, eps in enumerate([float(v) for v in params["eps_values"]]):
        P = obs1_distribution(d, target_j, eps)
        n = math.ceil(math.log(1.0 / delta) / (2.0 * eps)) + slack
        exact = (1.0 - 2.0 * eps) ** n
        units = []
        t0 = ei * trials
        for start in range(0, trials, block):
            units.append(
                _Thm3Unit(
                    weights=P.weights,
                    adj=sc.graph.adj,
                    targets=targets,
                    eps=eps,
                    n=n,
                    master=seed,
                    t0=t0 + start,
                    count=min(block, trials - start),
                )
            )
        fails = sum(_run_units(_thm3_unit_run, units, workers))
        rate = fails / trials
        table.append(eps, delta, n, exact, rate, trials)
        checks.append(
            _check(
                f"thm3.bound[eps={eps:g}]",
                exact <= delta,
                f"exact failure probability {exact:.6f} vs delta {delta}",
            )
        )
        checks.append(
            _check(
                f"thm3.failure-rate[eps={eps:g}]",
                rate <= delta + 0.05,
                f"observed {rate:.4f} over {trials} trials, tolerance {delta + 0.05}",
            )
        )
    return ExperimentResult("thm3", table, checks)


# ---------------------------------------------------------------------------
# thm4: strategic ERM converges on instances with bounded combined dimension


@dataclass(eq=False)
class _ErmUnit:
    tables: np.ndarray  # (members, 2 * points) int64 pointwise losses
    expected: np.ndarray  # (members,) exact expected strategic losses
    opt: float
    cum: np.ndarray  # cumulative cell weights
    n: int
    trials: int
    unit_seed: int


def _thm4_unit_run(unit: _ErmUnit) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(unit.unit_seed))
    n_cells = unit.cum.shape[0]
    u = rng.random((unit.trials, unit.n))
    idx = np.minimum(np.searchsorted(unit.cum, u.ravel(), side="right"), n_cells - 1)
    flat = np.repeat(np.arange(unit.trials, dtype=np.int64), unit.n) * n_cells + idx
    counts = np.bincount(flat, minlength=unit.trials * n_cells).reshape(unit.trials, n_cells)
    hits = counts @ unit.tables.T
    picks = hits.argmin(axis=1)  # lowest index on ties, same rule as erm()
    return unit.expected[picks] - unit.opt


def _thm4_instances(params, seed) -> list[Scenario]:
    instances = []
    budget = int(params["vc_budget"])
    want = int(params["instances"])
    attempts = 0
    k = 0
    while len(instances) < want:
        attempts += 1
        if attempts > 50 * want:
            raise ConfigError("could not find enough instances within the dimension budget")
        sc = gen_random(
            n_points=int(params["n_points"]),
            n_hypotheses=int(params["n_hypotheses"]),
            density=float(params["density"]),
            seed=trial_seed(seed, _THM4_INSTANCE_BASE + k),
        )
        k += 1
        d1 = vc_dimension(class_system(sc.hclass))
        d2 = vc_dimension(loss_class(sc.hclass, LossKind.component(sc.graph)))
        if d1.capped or d2.capped or d1.dimension + d2.dimension > budget:
            continue
        instances.append(sc)
    return instances


def _exp_thm4(spec, params, seed, workers) -> ExperimentResult:
    """Excess true strategic loss of empirical strategic ERM, over random
    instances whose class dimension plus component loss dimension stays
    within a budget. The pooled median excess must not increase with the
    sample size and must be small at the largest size."""
    instances = _thm4_instances(params, seed)
    n_grid = [int(v) for v in params["n_grid"]]
    trials = int(params["trials"])
    units = []
    for inst_i, sc in enumerate(instances):
        strategic = LossKind.strategic(sc.graph)
        tables = np.stack(
            [loss_table(strategic, h).ravel().astype(np.int64) for h in sc.hclass]
        )
        expected = np.array([expected_loss(strategic, h, sc.dist) for h in sc.hclass])
        cum = np.cumsum(sc.dist.weights.ravel())
        for n_i, n in enumerate(n_grid):
            unit_index = inst_i * len(n_grid) + n_i
            units.append(
                _ErmUnit(
                    tables=tables,
                    expected=expected,
                    opt=float(expected.min()),
                    cum=cum,
                    n=n,
                    trials=trials,
                    unit_seed=trial_seed(seed, _THM4_UNIT_BASE + unit_index),
                )
            )
    results = _run_units(_thm4_unit_run, units, workers)
    table = ResultTable(
        ("n", "median_excess", "mean_excess", "max_excess", "instances", "trials")
    )
    medians = []
    for n_i, n in enumerate(n_grid):
        pooled = np.concatenate([results[i] for i in range(len(units)) if i % len(n_grid) == n_i])
        med = float(np.median(pooled))
        medians.append(med)
        table.append(n, med, float(pooled.mean()), float(pooled.max()), len(instances), trials)
    nonincreasing = all(medians[i + 1] <= medians[i] + 1e-12 for i in range(len(medians) - 1))
    checks = [
        _check(
            "thm4.median-nonincreasing",
            nonincreasing,
            f"pooled median excess per n: {[f'{m:.6f}' for m in medians]}",
        ),
        _check(
            "thm4.final-excess",
            medians[-1] <= float(params["excess_tol"]),
            f"median excess {medians[-1]:.6f} at n={n_grid[-1]}, "
            f"tolerance {params['excess_tol']}",
        ),
    ]
    return ExperimentResult("thm4", table, checks)


# ---------------------------------------------------------------------------
# thm5: the loss-transfer chain on random instances


def _exp_thm5(spec, params, seed, workers) -> ExperimentResult:
    """Evaluate the surrogate chain on seeded random instances. Construction
    already validates lower <= true <= upper1 <= upper2; the check records
    the worst slack on top of that."""
    draws = int(params["draws"])
    table = ResultTable(
        ("draw", "member", "true_strategic", "binary", "surrogate_component",
         "surrogate_strategic", "distance", "upper1", "upper2", "lower",
         "lower_tight", "min_slack")
    )
    worst = math.inf
    for k in range(draws):
        sc = gen_random(
            n_points=int(params["n_points"]),
            n_hypotheses=int(params["n_hypotheses"]),
            density=float(params["density"]),
            seed=trial_seed(seed, _THM5_BASE + k),
            n_graphs=1,
        )
        h_i = k % len(sc.hclass)
        rep = surrogate_bounds(sc.hclass[h_i], sc.graph, sc.graph2, sc.hclass, sc.dist)
        slack = rep.min_slack()
        worst = min(worst, slack)
        table.append(
            k, h_i, rep.true_strategic, rep.binary, rep.surrogate_component,
            rep.surrogate_strategic, rep.distance, rep.upper1, rep.upper2,
            rep.lower, rep.lower_tight, slack,
        )
    tol = float(params["slack_tol"])
    checks = [
        _check(
            "thm5.chain-holds",
            worst >= -tol,
            f"worst slack {worst:.3e} over {draws} draws, tolerance -{tol:g}",
        )
    ]
    return ExperimentResult("thm5", table, checks)


# ---------------------------------------------------------------------------
# graph-learn: estimate the graph from samples, then learn under it


def _require_candidates(sc: Scenario) -> None:
    if sc.graph_class is None:
        raise ConfigError(
            "scenario: this experiment needs candidate graphs "
            "(generator random with n_graphs > 0, or inline candidates)"
        )


_GRAPH_SCENARIO_DEFAULT = {
    "generator": "random",
    "params": {"n_points": 10, "n_hypotheses": 8, "density": 0.3, "n_graphs": 6},
}


def _exp_graph_learn(spec, params, seed, workers) -> ExperimentResult:
    """Pipeline demo: draw (point, target set) observations, pick the
    candidate graph by empirical distance, run strategic ERM under it, and
    report the loss-transfer chain of the picked hypothesis."""
    sc = build_scenario(spec or _GRAPH_SCENARIO_DEFAULT, seed)
    _require_candidates(sc)
    H, P, truth, G = sc.hclass, sc.dist, sc.graph, sc.graph_class
    marginal = P.marginal()
    sample_file = params["sample_file"]
    if sample_file:
        S = read_graph_sample(sample_file, sc.domain.size)
        source = str(sample_file)
    else:
        S = draw_graph_sample(marginal, truth, int(params["sample_size"]), trial_seed(seed, 0))
        source = "drawn"
    learned = graph_erm(G, H, S)
    emp = [empirical_sample_distance(g, H, S) for g in G]
    true_d = [hpx_distance(truth, g, H, marginal) for g in G]
    table = ResultTable(("record", "field", "value"))
    table.append("sample", "size", len(S))
    table.append("sample", "source", source)
    for i in range(len(G)):
        table.append(f"candidate[{i}]", "empirical_distance", emp[i])
        table.append(f"candidate[{i}]", "true_distance", true_d[i])
    table.append("selected", "index", learned.index)
    table.append("selected", "empirical_distance", learned.empirical_value)
    table.append("selected", "true_distance", true_d[learned.index])
    table.append("selected", "tie_count", learned.tie_count)
    S_l = draw_sample(P, int(params["labeled_sample_size"]), trial_seed(seed, 1))
    pick = erm(H, S_l, LossKind.strategic(learned.graph))
    table.append("erm", "hypothesis_index", pick.index)
    table.append("erm", "hypothesis", describe_hypothesis(pick.hypothesis))
    table.append("erm", "empirical_strategic_loss", pick.empirical_value)
    table.append("erm", "tie_count", pick.tie_count)
    rep = surrogate_bounds(pick.hypothesis, truth, learned.graph, H, P)
    for name in (
        "true_strategic", "binary", "surrogate_component", "surrogate_strategic",
        "distance", "upper1", "upper2", "lower", "lower_tight",
    ):
        table.append("bounds", name, getattr(rep, name))
    table.append("bounds", "min_slack", rep.min_slack())
    checks = [
        _check(
            "graph-learn.erm-minimal",
            abs(learned.empirical_value - min(emp)) <= 1e-15,
            f"selected empirical distance {learned.empirical_value} vs minimum {min(emp)}",
        ),
        _check(
            "graph-learn.chain-holds",
            rep.min_slack() >= -1e-12,
            f"min slack {rep.min_slack():.3e}",
        ),
    ]
    return ExperimentResult("graph-learn", table, checks)


# ---------------------------------------------------------------------------
# uniform-conv: empirical distances concentrate at the Monte Carlo rate


@dataclass(eq=False)
class _UcUnit:
    diff: np.ndarray  # (candidates * members, points) int64 component mismatches
    true_d: np.ndarray  # (candidates,)
    cum: np.ndarray
    n_points: int
    n_candidates: int
    n_members: int
    n: int
    master: int
    t0: int
    count: int
    margin: float


def _uc_unit_run(unit: _UcUnit) -> tuple[np.ndarray, np.ndarray]:
    devs = np.empty(unit.count)
    covered = np.empty(unit.count, dtype=bool)
    for j in range(unit.count):
        rng = np.random.Generator(np.random.PCG64(trial_seed(unit.master, unit.t0 + j)))
        u = rng.random(unit.n)
        xs = np.minimum(np.searchsorted(unit.cum, u, side="right"), unit.n_points - 1)
        counts = np.bincount(xs, minlength=unit.n_points)
        per = (unit.diff @ counts).reshape(unit.n_candidates, unit.n_members).max(axis=1) / unit.n
        devs[j] = float(np.abs(unit.true_d - per).max())
        li = int(per.argmin())  # lowest index on ties, same rule as graph_erm()
        covered[j] = unit.true_d[li] < per[li] + unit.margin
    return devs, covered


def _exp_uniform_conv(spec, params, seed, workers) -> ExperimentResult:
    """Deviation between true and empirical graph distances across the
    candidate class, swept over sample sizes in factors of four. The median
    deviation must shrink at roughly the square-root rate, and at the largest
    size the empirically selected graph's true distance must be within a
    margin of its empirical one in most trials."""
    spec = spec or {
        "generator": "random",
        "params": {"n_points": 10, "n_hypotheses": 8, "density": 0.3, "n_graphs": 5},
    }
    sc = build_scenario(spec, seed)
    _require_candidates(sc)
    H, truth, G = sc.hclass, sc.graph, sc.graph_class
    marginal = sc.dist.marginal()
    cum = np.cumsum(marginal)
    comp_truth = class_component_matrix(H, truth)
    diffs = []
    true_d = []
    for g in G:
        comp_g = class_component_matrix(H, g)
        diffs.append((comp_truth != comp_g).astype(np.int64))
        true_d.append(hpx_distance(truth, g, H, marginal))
    diff = np.concatenate(diffs, axis=0)
    true_arr = np.asarray(true_d)
    n_grid = [int(v) for v in params["n_grid"]]
    trials = int(params["trials"])
    block = int(params["block"])
    margin = float(params["coverage_margin"])
    units = []
    for n_i, n in enumerate(n_grid):
        t0 = _UC_BASE + n_i * trials
        for start in range(0, trials, block):
            units.append(
                _UcUnit(
                    diff=diff,
                    true_d=true_arr,
                    cum=cum,
                    n_points=sc.domain.size,
                    n_candidates=len(G),
                    n_members=len(H),
                    n=n,
                    master=seed,
                    t0=t0 + start,
                    count=min(block, trials - start),
                    margin=margin,
                )
            )
    results = _run_units(_uc_unit_run, units, workers)
    per_n_devs: list[np.ndarray] = []
    per_n_cov: list[np.ndarray] = []
    blocks_per_n = math.ceil(trials / block)
    for n_i in range(len(n_grid)):
        chunk = results[n_i * blocks_per_n : (n_i + 1) * blocks_per_n]
        per_n_devs.append(np.concatenate([c[0] for c in chunk]))
        per_n_cov.append(np.concatenate([c[1] for c in chunk]))
    table = ResultTable(("n", "median_deviation", "mean_deviation", "coverage", "trials"))
    medians = []
    for n_i, n in enumerate(n_grid):
        med = float(np.median(per_n_devs[n_i]))
        medians.append(med)
        table.append(
            n, med, float(per_n_devs[n_i].mean()), float(per_n_cov[n_i].mean()), trials
        )
    checks = []
    lo, hi = float(params["ratio_low"]), float(params["ratio_high"])
    for i in range(len(n_grid) - 1):
        if medians[i + 1] > 0:
            ratio = medians[i] / medians[i + 1]
            ok = lo <= ratio <= hi
            detail = f"median({n_grid[i]}) / median({n_grid[i + 1]}) = {ratio:.3f}, band [{lo}, {hi}]"
        else:
            ok = False
            detail = f"median deviation at n={n_grid[i + 1]} is zero"
        checks.append(_check(f"uniform-conv.ratio[{n_grid[i]}/{n_grid[i + 1]}]", ok, detail))
    coverage = float(per_n_cov[-1].mean())
    frac = float(params["coverage_frac"])
    checks.append(
        _check(
            "uniform-conv.learned-coverage",
            coverage >= frac,
            f"selected graph within {margin} of its empirical distance in "
            f"{coverage:.1%} of trials at n={n_grid[-1]}, need {frac:.0%}",
        )
    )
    return ExperimentResult("uniform-conv", table, checks)


# ---------------------------------------------------------------------------
# registry


_REGISTRY: dict[str, tuple[dict, Callable]] = {
    "example1": ({"n": 10, "sample_size": 400}, _exp_example1),
    "example2": (
        {"p1": 0.25, "p4": 0.25, "p2_grid": [0.05, 0.15, 0.25, 0.35, 0.45],
         "sample_size": 200},
        _exp_example2,
    ),
    "obs1": ({"d_values": [2, 3], "cap": 5}, _exp_obs1),
    "thm3": (
        {"eps_values": [0.05, 0.1], "delta": 0.1, "slack": 2, "d": 3, "target_j": 1,
         "trials": 2000, "block": 250},
        _exp_thm3,
    ),
    "thm4": (
        {"instances": 20, "n_points": 8, "n_hypotheses": 6, "density": 0.35,
         "vc_budget": 4, "n_grid": [25, 100, 400, 1600], "trials": 200,
         "excess_tol": 0.05},
        _exp_thm4,
    ),
    "thm5": (
        {"draws": 500, "n_points": 8, "n_hypotheses": 6, "density": 0.35,
         "slack_tol": 1e-12},
        _exp_thm5,
    ),
    "graph-learn": (
        {"sample_size": 400, "labeled_sample_size": 400, "sample_file": None},
        _exp_graph_learn,
    ),
    "uniform-conv": (
        {"n_grid": [50, 200, 800, 3200], "trials": 200, "block": 50,
         "ratio_low": 1.4, "ratio_high": 2.8, "coverage_margin": 0.1,
         "coverage_frac": 0.9},
        _exp_uniform_conv,
    ),
}


def available_experiments() -> list[str]:
    return sorted(_REGISTRY)


def run_experiment(
    name: str,
    scenario_spec: Optional[dict] = None,
    params: Optional[dict] = None,
    seed: int = 0,
    trials: Optional[int] = None,
    workers: int = 1,
) -> ExperimentResult:
    """Run a named experiment.

    ``trials`` overrides the experiment's trial (or draw) count where one
    applies. ``scenario_spec`` feeds graph-learn and uniform-conv; the
    canonical-instance experiments build their own scenarios.
    """
    if name not in _REGISTRY:
        raise ConfigError(
            f"unknown experiment {name!r}; available: {available_experiments()}"
        )
    defaults, fn = _REGISTRY[name]
    merged = _merge_params(name, params, defaults)
    if trials is not None:
        if "trials" in merged:
            merged["trials"] = int(trials)
        elif "draws" in merged:
            merged["draws"] = int(trials)
    return fn(scenario_spec, merged, int(seed), int(workers))
