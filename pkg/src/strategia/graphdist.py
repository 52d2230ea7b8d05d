"""Surrogate-graph analysis: graph loss, class distances, bounds, and learning.

When the deployed graph is unknown, a candidate graph can stand in for it.
The pointwise graph loss charges a rejected point when the observed target
set and the candidate's successor set disagree about whether an accepted
point is reachable; summed against a class, this yields a distance between
graphs under which strategic losses transfer with an additive penalty.

Samples here are (point, observed target set) pairs. Serialization is one
record per line: point_index<TAB>comma-separated sorted neighbor indices,
with an empty neighbor field allowed, UTF-8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

import numpy as np

from .domain import (
    FiniteDomain,
    Hypothesis,
    HypothesisClass,
    LabeledDistribution,
    ManipulationGraph,
)
from .errors import (
    BoundViolationError,
    DomainMismatchError,
    EmptyClassError,
    EmptySampleError,
    NotInClassError,
)
from .losses import (
    LossKind,
    class_component_matrix,
    component_vector,
    expected_loss,
)

BOUND_TOL = 1e-12


class GraphSample:
    """An ordered sequence of (point index, observed target set) pairs."""

    def __init__(self, xs, bsets: Sequence[frozenset], n_points: int):
        xa = np.asarray(xs, dtype=np.int64)
        if xa.ndim != 1 or xa.size != len(bsets):
            raise ValueError("xs and bsets must be equal-length 1-d sequences")
        if xa.size and (xa.min() < 0 or xa.max() >= n_points):
            raise ValueError("point index out of range")
        frozen = []
        for x, b in zip(xa, bsets):
            bs = frozenset(int(v) for v in b)
            for v in bs:
                if not 0 <= v < n_points:
                    raise ValueError(f"target index {v} out of range")
            if int(x) in bs:
                raise ValueError(f"observed target set of point {int(x)} contains the point itself")
            frozen.append(bs)
        xa.setflags(write=False)
        self.xs = xa
        self.bsets: tuple[frozenset, ...] = tuple(frozen)
        self.n_points = int(n_points)

    def __len__(self) -> int:
        return int(self.xs.size)

    def __iter__(self) -> Iterator[tuple[int, frozenset]]:
        return ((int(x), b) for x, b in zip(self.xs, self.bsets))

    def __repr__(self) -> str:
        return f"GraphSample(n={len(self)}, points={self.n_points})"


def draw_graph_sample(
    marginal: np.ndarray, graph: ManipulationGraph, n: int, seed: int
) -> GraphSample:
    """n iid point draws from the marginal, each paired with its true successor set."""
    m = np.asarray(marginal, dtype=float)
    if m.ndim != 1 or m.shape[0] != graph.size:
        raise DomainMismatchError("marginal length does not match graph size")
    if (m < 0).any() or not np.all(np.isfinite(m)):
        raise ValueError("marginal must be finite nonnegative")
    total = float(m.sum())
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"marginal sums to {total!r}, expected 1")
    cum = np.cumsum(m)
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random(n)
    xs = np.minimum(np.searchsorted(cum, u, side="right"), graph.size - 1)
    nsets = graph.neighbor_sets()
    return GraphSample(xs, [nsets[int(x)] for x in xs], n_points=graph.size)


def write_graph_sample(sample: GraphSample, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for x, b in sample:
            fh.write(f"{x}\t{','.join(str(v) for v in sorted(b))}\n")


def read_graph_sample(path, n_points: int) -> GraphSample:
    xs: list[int] = []
    bsets: list[frozenset] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 2 tab-separated fields")
            xs.append(int(parts[0]))
            field = parts[1].strip()
            bsets.append(frozenset(int(v) for v in field.split(",")) if field else frozenset())
    return GraphSample(np.asarray(xs, dtype=np.int64), bsets, n_points=n_points)


class GraphClass:
    """An ordered collection of distinct candidate graphs over one domain."""

    def __init__(self, graphs: Sequence[ManipulationGraph]):
        gs = tuple(graphs)
        if not gs:
            raise EmptyClassError("graph class needs at least one candidate")
        size = gs[0].size
        seen = set()
        for g in gs:
            if g.size != size:
                raise DomainMismatchError("candidate graphs live on different domains")
            key = g.adj.tobytes()
            if key in seen:
                raise ValueError("candidate graphs must be distinct")
            seen.add(key)
        self.graphs = gs

    def __len__(self) -> int:
        return len(self.graphs)

    def __iter__(self) -> Iterator[ManipulationGraph]:
        return iter(self.graphs)

    def __getitem__(self, i: int) -> ManipulationGraph:
        return self.graphs[i]

    def __repr__(self) -> str:
        return f"GraphClass({len(self.graphs)} graphs over n={self.graphs[0].size})"


def graph_loss(h: Hypothesis, candidate: ManipulationGraph, x: int, observed: frozenset) -> int:
    """Pointwise disagreement loss at a rejected point.

    Charged exactly when h(x) = 0 and precisely one of these holds:
    (a) some observed target is accepted while no candidate successor is,
    (b) no observed target is accepted while some candidate successor is.
    Equivalently: 1{h(x)=0} * |accepted-in-observed - accepted-in-candidate|.
    """
    if h.size != candidate.size:
        raise DomainMismatchError("hypothesis and graph domain sizes differ")
    if h(x):
        return 0
    labels = h.labels
    obs_hit = any(labels[int(b)] for b in observed)
    cand_hit = bool((candidate.adj[x] & labels).any())
    return int(obs_hit != cand_hit)


def true_graph_loss(
    h: Hypothesis,
    candidate: ManipulationGraph,
    marginal: np.ndarray,
    reference: ManipulationGraph,
) -> float:
    """Expected graph loss when observed target sets come from the reference graph.

    Equals the expected absolute difference of the component losses of h
    under the reference and candidate graphs.
    """
    m = np.asarray(marginal, dtype=float)
    if m.shape != (reference.size,):
        raise DomainMismatchError("marginal length does not match graph size")
    c_ref = component_vector(h, reference)
    c_cand = component_vector(h, candidate)
    return float(m @ (c_ref != c_cand))


def empirical_graph_loss(
    h: Hypothesis,
    candidate: ManipulationGraph,
    S: GraphSample,
    normalized: bool = True,
) -> float:
    """Graph loss summed over sample items; mean by default, raw sum otherwise."""
    if len(S) == 0:
        raise EmptySampleError("empirical graph loss over an empty sample")
    if h.size != S.n_points or candidate.size != S.n_points:
        raise DomainMismatchError("sample domain size mismatch")
    labels = h.labels
    reach = (candidate.adj & labels[None, :]).any(axis=1)
    hits = 0
    for x, b in S:
        if labels[x]:
            continue
        obs_hit = any(labels[int(v)] for v in b)
        hits += int(obs_hit != bool(reach[x]))
    return hits / len(S) if normalized else float(hits)


def hpx_distance(
    g1: ManipulationGraph,
    g2: ManipulationGraph,
    H: HypothesisClass,
    marginal: np.ndarray,
) -> float:
    """Class-and-marginal distance between graphs.

    The largest, over class members, expected absolute difference between
    the member's component losses under the two graphs. A pseudometric: two
    distinct graphs are at distance zero when no member's component loss can
    tell them apart on the marginal's support.
    """
    if len(H) == 0:
        raise EmptyClassError("distance over an empty class")
    if g1.size != g2.size:
        raise DomainMismatchError("graphs live on different domains")
    m = np.asarray(marginal, dtype=float)
    if m.shape != (g1.size,):
        raise DomainMismatchError("marginal length does not match graph size")
    c1 = class_component_matrix(H, g1)
    c2 = class_component_matrix(H, g2)
    per_member = (c1 != c2).astype(float) @ m
    return float(per_member.max())


def empirical_distance(
    g1: ManipulationGraph,
    g2: ManipulationGraph,
    H: HypothesisClass,
    S: GraphSample,
    normalized: bool = True,
    validate: bool = True,
) -> float:
    """Empirical counterpart of the distance on a sample drawn from g1.

    The sample's observed target sets must come from g1; this precondition
    is checked by default. Value: max over members of the (mean) graph loss
    of g2 against the sample.
    """
    if len(H) == 0:
        raise EmptyClassError("distance over an empty class")
    if len(S) == 0:
        raise EmptySampleError("empirical distance over an empty sample")
    if validate:
        nsets = g1.neighbor_sets()
        for x, b in S:
            if b != nsets[x]:
                raise DomainMismatchError(
                    f"sample target set at point {x} does not match the reference graph"
                )
    counts = np.bincount(S.xs, minlength=S.n_points)
    c1 = class_component_matrix(H, g1)
    c2 = class_component_matrix(H, g2)
    per_member_hits = (c1 != c2).astype(np.int64) @ counts
    best = int(per_member_hits.max())
    return best / len(S) if normalized else float(best)


def _sample_group_counts(S: GraphSample) -> tuple[list[tuple[int, frozenset]], np.ndarray]:
    groups: dict[tuple[int, frozenset], int] = {}
    order: list[tuple[int, frozenset]] = []
    counts: list[int] = []
    for x, b in S:
        key = (x, b)
        if key in groups:
            counts[groups[key]] += 1
        else:
            groups[key] = len(order)
            order.append(key)
            counts.append(1)
    return order, np.asarray(counts, dtype=np.int64)


def _grouped_obs(H: HypothesisClass, S: GraphSample) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Distinct sample items: their points, multiplicities, and per-member
    observed-side component indicators (rejected point with an accepted
    observed target)."""
    order, counts = _sample_group_counts(S)
    L = H.labels_matrix()
    nm = L.shape[0]
    obs = np.empty((nm, len(order)), dtype=bool)
    for k, (x, b) in enumerate(order):
        idx = list(b)
        hit = L[:, idx].any(axis=1) if idx else np.zeros(nm, dtype=bool)
        obs[:, k] = ~L[:, x] & hit
    xs = np.asarray([x for x, _ in order], dtype=np.int64)
    return xs, counts, obs


def empirical_sample_distance(
    candidate: ManipulationGraph,
    H: HypothesisClass,
    S: GraphSample,
    normalized: bool = True,
) -> float:
    """Largest, over members, (mean) graph loss of the candidate on the sample.

    The sample's own observed target sets are the reference, so no reference
    graph is needed; graph ERM minimizes exactly this quantity.
    """
    if len(H) == 0:
        raise EmptyClassError("distance over an empty class")
    if len(S) == 0:
        raise EmptySampleError("empirical distance over an empty sample")
    if candidate.size != S.n_points:
        raise DomainMismatchError("sample domain size mismatch")
    xs, counts, obs = _grouped_obs(H, S)
    comp = class_component_matrix(H, candidate)[:, xs]
    best = int(((obs != comp).astype(np.int64) @ counts).max())
    return best / len(S) if normalized else float(best)


@dataclass(frozen=True)
class GraphLearnerOutput:
    """Selected candidate graph plus the empirical distance it achieved.

    ``tie_count`` counts candidates achieving the optimum; ties are resolved
    by the lowest class index. A tie count above 1 flags degeneracy (e.g. a
    hypothesis class that cannot distinguish the candidates).
    """

    graph: ManipulationGraph
    index: int
    empirical_value: float
    tie_count: int


def graph_erm(G: GraphClass, H: HypothesisClass, S: GraphSample) -> GraphLearnerOutput:
    """Pick the candidate minimizing the empirical distance to the sample.

    The sample's own observed target sets are the reference; no reference
    graph is required. Integer hit counts make tie detection exact.
    """
    if len(H) == 0:
        raise EmptyClassError("graph ERM over an empty hypothesis class")
    if len(S) == 0:
        raise EmptySampleError("graph ERM over an empty sample")
    xs, counts, obs = _grouped_obs(H, S)
    best_hits: Optional[int] = None
    best_idx = -1
    ties = 0
    for gi, g in enumerate(G):
        comp = class_component_matrix(H, g)[:, xs]
        per_member = (obs != comp).astype(np.int64) @ counts
        hits = int(per_member.max())
        if best_hits is None or hits < best_hits:
            best_hits, best_idx, ties = hits, gi, 1
        elif hits == best_hits:
            ties += 1
    return GraphLearnerOutput(G[best_idx], best_idx, best_hits / len(S), ties)


@dataclass(frozen=True)
class SurrogateBoundReport:
    """Exact loss transfer quantities for one hypothesis and a surrogate graph.

    upper1 = binary + surrogate_component + distance,
    upper2 = 2 * surrogate_strategic + distance,
    lower = surrogate_strategic / 2 - distance (as asserted),
    lower_tight = surrogate_strategic / 2 - distance / 2 (reported only).
    The chain lower <= true_strategic <= upper1 <= upper2 is validated at
    construction up to numeric tolerance.
    """

    true_strategic: float
    binary: float
    surrogate_component: float
    surrogate_strategic: float
    distance: float
    upper1: float
    upper2: float
    lower: float
    lower_tight: float

    def __post_init__(self):
        checks = (
            ("lower <= true_strategic", self.lower, self.true_strategic),
            ("true_strategic <= upper1", self.true_strategic, self.upper1),
            ("upper1 <= upper2", self.upper1, self.upper2),
        )
        for name, lo, hi in checks:
            if lo > hi + BOUND_TOL:
                raise BoundViolationError(f"{name} failed: {lo!r} > {hi!r}")

    def min_slack(self) -> float:
        return min(
            self.true_strategic - self.lower,
            self.upper1 - self.true_strategic,
            self.upper2 - self.upper1,
        )


def surrogate_bounds(
    h: Hypothesis,
    true_graph: ManipulationGraph,
    candidate: ManipulationGraph,
    H: HypothesisClass,
    P: LabeledDistribution,
) -> SurrogateBoundReport:
    """Evaluate the loss transfer chain for h with the candidate as surrogate.

    h must belong to H: the distance term is a supremum over the class, so
    the chain is only guaranteed for members.
    """
    if H.index_of(h) is None:
        raise NotInClassError("hypothesis is not a member of the supplied class")
    marginal = P.marginal()
    true_strategic = expected_loss(LossKind.strategic(true_graph), h, P)
    binary = expected_loss(LossKind.binary(), h, P)
    surrogate_component = expected_loss(LossKind.component(candidate), h, P)
    surrogate_strategic = expected_loss(LossKind.strategic(candidate), h, P)
    distance = hpx_distance(true_graph, candidate, H, marginal)
    return SurrogateBoundReport(
        true_strategic=true_strategic,
        binary=binary,
        surrogate_component=surrogate_component,
        surrogate_strategic=surrogate_strategic,
        distance=distance,
        upper1=binary + surrogate_component + distance,
        upper2=2.0 * surrogate_strategic + distance,
        lower=0.5 * surrogate_strategic - distance,
        lower_tight=0.5 * surrogate_strategic - 0.5 * distance,
    )
