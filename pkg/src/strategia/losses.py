"""Pointwise and expected losses for classification under a manipulation graph.

Three pointwise losses:

* binary: h(x) != y.
* strategic: charged when h(x) != y, or when h(x) = 0 and some successor of x
  is labeled 1 (a rejected agent that can move to an accepted point will).
  The two failure cases are not mutually exclusive.
* strategic component: only the second case above; it ignores the label, so
  its expectation is taken over the point marginal.

The strategic loss is dominated pointwise by binary + component, which is
what the surrogate bounds in graphdist build on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .domain import (
    CostModel,
    FiniteDomain,
    Hypothesis,
    HypothesisClass,
    LabeledDistribution,
    LabeledSample,
    ManipulationGraph,
)
from .errors import (
    DomainMismatchError,
    EmptyClassError,
    EmptySampleError,
    UndefinedBurdenError,
)


@dataclass(frozen=True)
class LossKind:
    """Tagged loss selector: binary, strategic(graph), or component(graph)."""

    kind: str
    graph: Optional[ManipulationGraph] = None

    _KINDS = ("binary", "strategic", "component")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValueError(f"unknown loss kind {self.kind!r}")
        if self.kind == "binary" and self.graph is not None:
            raise ValueError("binary loss takes no graph")
        if self.kind != "binary" and self.graph is None:
            raise ValueError(f"{self.kind} loss needs a manipulation graph")

    @classmethod
    def binary(cls) -> "LossKind":
        return cls("binary")

    @classmethod
    def strategic(cls, graph: ManipulationGraph) -> "LossKind":
        return cls("strategic", graph)

    @classmethod
    def component(cls, graph: ManipulationGraph) -> "LossKind":
        return cls("component", graph)

    def __repr__(self) -> str:
        return f"LossKind({self.kind})"


def _check_pair(h: Hypothesis, graph: ManipulationGraph) -> None:
    if h.size != graph.size:
        raise DomainMismatchError(
            f"hypothesis over {h.size} points, graph over {graph.size}"
        )


def reach_positive(h: Hypothesis, graph: ManipulationGraph) -> np.ndarray:
    """Boolean vector: point x has some successor labeled 1 by h."""
    _check_pair(h, graph)
    return (graph.adj & h.labels[None, :]).any(axis=1)


def component_vector(h: Hypothesis, graph: ManipulationGraph) -> np.ndarray:
    """Pointwise strategic component loss of h as a boolean vector."""
    return ~h.labels & reach_positive(h, graph)


def class_component_matrix(H: HypothesisClass, graph: ManipulationGraph) -> np.ndarray:
    """Component loss vectors for every member, shape (len(H), n)."""
    L = H.labels_matrix()
    if L.shape[1] != graph.size:
        raise DomainMismatchError("class and graph domain sizes differ")
    reach = (L.astype(np.uint8) @ graph.adj.T.astype(np.uint8)) > 0
    return ~L & reach


def binary_loss(h: Hypothesis, x: int, y: int) -> int:
    return int(h(x) != y)


def strategic_loss(h: Hypothesis, x: int, y: int, graph: ManipulationGraph) -> int:
    _check_pair(h, graph)
    if h(x) != y:
        return 1
    if h(x) == 0 and bool((graph.adj[x] & h.labels).any()):
        return 1
    return 0


def strategic_component_loss(h: Hypothesis, x: int, graph: ManipulationGraph) -> int:
    _check_pair(h, graph)
    return int(h(x) == 0 and bool((graph.adj[x] & h.labels).any()))


def loss_table(kind: LossKind, h: Hypothesis) -> np.ndarray:
    """Pointwise loss of h on every (point, label) cell, shape (n, 2) uint8."""
    n = h.size
    table = np.empty((n, 2), dtype=np.uint8)
    if kind.kind == "binary":
        table[:, 0] = h.labels
        table[:, 1] = ~h.labels
        return table
    comp = component_vector(h, kind.graph)
    if kind.kind == "component":
        table[:, 0] = comp
        table[:, 1] = comp
        return table
    table[:, 0] = h.labels | comp
    table[:, 1] = ~h.labels | comp
    return table


def expected_loss(kind: LossKind, h: Hypothesis, P: LabeledDistribution) -> float:
    """Exact expectation of the pointwise loss under P.

    The component kind is an expectation over the point marginal only; the
    label plays no role in it.
    """
    if h.size != P.size:
        raise DomainMismatchError("hypothesis and distribution domain sizes differ")
    if kind.kind == "component":
        comp = component_vector(h, kind.graph)
        return float(P.marginal() @ comp)
    return float(P.weights.ravel() @ loss_table(kind, h).ravel())


def empirical_loss(kind: LossKind, h: Hypothesis, S: LabeledSample) -> float:
    """Mean pointwise loss over the sample items."""
    if len(S) == 0:
        raise EmptySampleError("empirical loss over an empty sample")
    if h.size != S.n_points:
        raise DomainMismatchError("hypothesis and sample domain sizes differ")
    hits = int(S.counts().ravel() @ loss_table(kind, h).ravel())
    return hits / len(S)


def effective_hypothesis(h: Hypothesis, graph: ManipulationGraph) -> Hypothesis:
    """The labeling agents actually receive after best response.

    A point is effectively accepted when h accepts it, or when it has some
    successor h accepts (the agent moves there). No descriptor is carried
    over since the result is generally not in the original family.
    """
    return Hypothesis(h.labels | reach_positive(h, graph))


def is_incentive_compatible(h: Hypothesis, graph: ManipulationGraph) -> bool:
    """True when no point has any incentive to move, i.e. component loss is 0 everywhere."""
    return not component_vector(h, graph).any()


@dataclass(frozen=True)
class SocialBurden:
    """Cost borne by truly positive points to get accepted.

    ``conditional`` is the expectation of the min acceptance cost given y=1;
    ``numerator`` is the same sum left unnormalized by the positive mass.
    Either may be math.inf when some positive-mass point cannot reach any
    accepted point.
    """

    conditional: float
    numerator: float


def _unit_edge_costs(h: Hypothesis, graph: ManipulationGraph) -> np.ndarray:
    """Shortest-path edge counts from every point to the nearest accepted point."""
    n = graph.size
    dist = np.full(n, math.inf)
    frontier = [int(i) for i in np.flatnonzero(h.labels)]
    for i in frontier:
        dist[i] = 0.0
    steps = 0
    # BFS backwards: who can reach the current frontier in one more hop.
    adj = graph.adj
    while frontier:
        steps += 1
        nxt = []
        for j in frontier:
            for i in np.flatnonzero(adj[:, j]):
                if dist[i] > steps:
                    dist[i] = float(steps)
                    nxt.append(int(i))
        frontier = nxt
    return dist


def social_burden(
    h: Hypothesis,
    P: LabeledDistribution,
    graph: Optional[ManipulationGraph] = None,
    cost_model: Optional[CostModel] = None,
) -> SocialBurden:
    """Expected minimum acceptance cost over truly positive points.

    With a cost model, the cost at x is min over accepted points x' of
    cost(x, x') (zero when x itself is accepted). Without one, unit edge
    costs are used: the cost is the shortest-path hop count in the graph to
    the nearest accepted point, so a graph is required.
    """
    if h.size != P.size:
        raise DomainMismatchError("hypothesis and distribution domain sizes differ")
    positive_mass = float(P.weights[:, 1].sum())
    if positive_mass <= 0.0:
        raise UndefinedBurdenError("no positive-label mass: burden undefined")
    n = h.size
    if cost_model is not None:
        accepted = h.positives()
        costs = np.full(n, math.inf)
        for x in range(n):
            for xp in accepted:
                c = cost_model.cost(x, int(xp))
                if c < costs[x]:
                    costs[x] = c
    else:
        if graph is None:
            raise ValueError("social_burden needs a graph when no cost model is given")
        _check_pair(h, graph)
        costs = _unit_edge_costs(h, graph)
    numerator = 0.0
    for x in range(n):
        w = float(P.weights[x, 1])
        if w > 0.0:
            numerator += w * float(costs[x])
    return SocialBurden(conditional=numerator / positive_mass, numerator=numerator)


def approximation_error(H: HypothesisClass, P: LabeledDistribution, kind: LossKind) -> float:
    """Least achievable expected loss over the class."""
    if len(H) == 0:
        raise EmptyClassError("approximation error over an empty class")
    return min(expected_loss(kind, h, P) for h in H)
