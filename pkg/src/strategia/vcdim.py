"""Loss sets, loss classes, and brute-force VC dimension.

A hypothesis h and a loss turn into the subset of evaluation points the loss
charges; a class turns into a set system. VC dimension is computed by
exhaustive shattering search over a bitmask representation, ascending by
candidate size, short-circuiting on the first witness at each size, and
stopping at the first size with no shattered set. Desk-scale caps keep the
search honest: the default ground limit is 40 elements and the default
dimension cap is 6 ("at least cap" is reported when the cap is reached).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from .domain import FiniteDomain, Hypothesis, HypothesisClass, ManipulationGraph
from .errors import CapacityError, DomainMismatchError
from .losses import LossKind, component_vector, loss_table

DEFAULT_CAP = 6
DEFAULT_GROUND_LIMIT = 40
SHATTER_CANDIDATE_LIMIT = 30


class SetSystem:
    """A finite ground sequence plus a deduplicated family of subsets.

    Ground elements are opaque hashable ids; sets are stored as sorted index
    tuples into the ground, first occurrence kept, so systems built from
    deterministic sweeps are reproducible.
    """

    def __init__(self, ground: Sequence, sets: Iterable[Iterable[int]]):
        self.ground: tuple = tuple(ground)
        n = len(self.ground)
        seen: dict[tuple[int, ...], int] = {}
        kept: list[tuple[int, ...]] = []
        masks: list[int] = []
        for s in sets:
            idx = tuple(sorted(set(int(i) for i in s)))
            if idx and (idx[0] < 0 or idx[-1] >= n):
                raise ValueError(f"set {idx} out of ground range 0..{n - 1}")
            if idx not in seen:
                seen[idx] = len(kept)
                kept.append(idx)
                m = 0
                for i in idx:
                    m |= 1 << i
                masks.append(m)
        self.sets: tuple[tuple[int, ...], ...] = tuple(kept)
        self.masks: tuple[int, ...] = tuple(masks)

    def __len__(self) -> int:
        return len(self.sets)

    def restrict_ground_size(self) -> int:
        return len(self.ground)

    def __repr__(self) -> str:
        return f"SetSystem(ground={len(self.ground)}, sets={len(self.sets)})"


@dataclass(frozen=True)
class VcReport:
    """Result of a brute-force VC computation.

    ``dimension`` is exact when ``capped`` is False; otherwise the dimension
    is at least ``dimension`` (= the cap). ``witness`` is the lexicographically
    smallest shattered set of the largest size found, as ground indices.
    """

    dimension: int
    witness: tuple[int, ...]
    capped: bool = False


def loss_set(h: Hypothesis, kind: LossKind) -> frozenset:
    """Ground elements charged by the loss for h.

    Binary and strategic kinds give subsets of (point, label) pairs; the
    component kind gives a subset of points.
    """
    if kind.kind == "component":
        comp = component_vector(h, kind.graph)
        return frozenset(int(x) for x in np.flatnonzero(comp))
    table = loss_table(kind, h)
    return frozenset((int(x), int(y)) for x, y in zip(*np.nonzero(table)))


def pair_ground(n: int) -> tuple[tuple[int, int], ...]:
    """The canonical (point, label) ground ordering: point-major, label minor."""
    return tuple((x, y) for x in range(n) for y in (0, 1))


def loss_class(H: HypothesisClass, kind: LossKind) -> SetSystem:
    """The set system of loss sets over the class, deduplicated.

    Ground is the full (point, label) grid for binary/strategic kinds and
    the point set for the component kind.
    """
    if len(H) == 0:
        return SetSystem((), ())
    n = H.members[0].size
    if kind.kind == "component":
        ground: tuple = tuple(range(n))
        sets = []
        for h in H:
            comp = component_vector(h, kind.graph)
            sets.append(tuple(int(x) for x in np.flatnonzero(comp)))
        return SetSystem(ground, sets)
    ground = pair_ground(n)
    sets = []
    for h in H:
        flat = loss_table(kind, h).ravel()
        sets.append(tuple(int(i) for i in np.flatnonzero(flat)))
    return SetSystem(ground, sets)


def class_system(H: HypothesisClass) -> SetSystem:
    """The class itself as a set system of positive sets over the points."""
    if len(H) == 0:
        return SetSystem((), ())
    n = H.members[0].size
    return SetSystem(tuple(range(n)), (tuple(int(i) for i in h.positives()) for h in H))


def _shattered_mask(masks: Sequence[int], cand_mask: int, k: int) -> bool:
    want = 1 << k
    traces = set()
    for m in masks:
        traces.add(m & cand_mask)
        if len(traces) == want:
            return True
    return False


def is_shattered(system: SetSystem, candidate: Iterable[int]) -> bool:
    """Whether the family realizes all 2^k traces on the candidate ground indices."""
    cand = sorted(set(int(i) for i in candidate))
    n = len(system.ground)
    if cand and (cand[0] < 0 or cand[-1] >= n):
        raise ValueError(f"candidate {cand} out of ground range")
    k = len(cand)
    if k > SHATTER_CANDIDATE_LIMIT:
        raise CapacityError(
            f"candidate of size {k} exceeds shattering check limit {SHATTER_CANDIDATE_LIMIT}"
        )
    if len(system.sets) == 0:
        return False
    if len(system.sets) < (1 << k):
        return False
    cand_mask = 0
    for i in cand:
        cand_mask |= 1 << i
    return _shattered_mask(system.masks, cand_mask, k)


def vc_dimension(
    system: SetSystem,
    cap: int = DEFAULT_CAP,
    ground_limit: int = DEFAULT_GROUND_LIMIT,
) -> VcReport:
    """Exact VC dimension by ascending brute force, capped at ``cap``.

    Empty systems have dimension -1; any nonempty system shatters the empty
    set, so a system with a single distinct set has dimension 0. Candidates
    of each size are enumerated in lexicographic order and the first witness
    short-circuits the size, which makes the reported witness the
    lexicographically smallest among those of maximum found size.
    """
    if cap < 0:
        raise ValueError(f"cap must be >= 0, got {cap}")
    n = len(system.ground)
    if n > ground_limit:
        raise CapacityError(
            f"ground of {n} elements exceeds brute-force limit {ground_limit}; "
            "reduce the instance or raise ground_limit explicitly"
        )
    if len(system.sets) == 0:
        return VcReport(dimension=-1, witness=())
    best_k = 0
    best_witness: tuple[int, ...] = ()
    masks = system.masks
    for k in range(1, min(cap, n) + 1):
        if len(masks) < (1 << k):
            # growth pruning: fewer sets than required traces
            return VcReport(dimension=best_k, witness=best_witness)
        found = None
        for cand in combinations(range(n), k):
            cand_mask = 0
            for i in cand:
                cand_mask |= 1 << i
            if _shattered_mask(masks, cand_mask, k):
                found = cand
                break
        if found is None:
            return VcReport(dimension=best_k, witness=best_witness)
        best_k, best_witness = k, found
    if best_k >= cap:
        return VcReport(dimension=cap, witness=best_witness, capped=True)
    return VcReport(dimension=best_k, witness=best_witness)


def _graph_point_loss(
    labels: np.ndarray,
    cand_reach_row: bool,
    observed: frozenset,
) -> int:
    # loss charged when, at a rejected point, observed targets and candidate
    # successors disagree on whether an accepted point is reachable
    a = any(labels[b] for b in observed)
    return int(a != cand_reach_row)


def graph_loss_class(
    H: HypothesisClass,
    G: Sequence[ManipulationGraph],
    domain: FiniteDomain,
    ground_pairs: Sequence[tuple[int, frozenset]],
) -> SetSystem:
    """Loss sets of every (hypothesis, candidate graph) pair over (x, B) ground pairs.

    Ground elements are (point, observed target set) pairs; the loss for a
    pair charges the element when the hypothesis rejects the point and
    exactly one of the observed set and the candidate successor set contains
    an accepted point. Members are enumerated hypothesis-major in class
    order, then graph order, first distinct loss set kept.
    """
    ground = []
    for x, B in ground_pairs:
        domain.check_index(int(x))
        bset = frozenset(int(b) for b in B)
        for b in bset:
            domain.check_index(b)
        ground.append((int(x), bset))
    ground_t = tuple(ground)
    sets = []
    for h in H:
        if h.size != domain.size:
            raise DomainMismatchError("hypothesis size does not match domain")
        labels = h.labels
        for g in G:
            if g.size != domain.size:
                raise DomainMismatchError("graph size does not match domain")
            reach = (g.adj & labels[None, :]).any(axis=1)
            s = []
            for idx, (x, bset) in enumerate(ground_t):
                if labels[x]:
                    continue
                if _graph_point_loss(labels, bool(reach[x]), bset):
                    s.append(idx)
            sets.append(tuple(s))
    return SetSystem(ground_t, sets)
