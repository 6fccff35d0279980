"""Wasserstein and bottleneck distances between persistence diagrams.

Both distances use the L-inf ground metric with diagonal augmentation: every
off-diagonal point may be matched either to a point of the other diagram or
to its closest diagonal projection at cost (death - birth) / 2.  Wasserstein
is solved exactly by an optimal assignment on the (|A|+|B|)-square augmented
cost matrix; bottleneck by binary search over candidate costs with a
bipartite feasibility matching.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .geometry import ParameterError
from .persistence import PersistenceDiagram

DIAG = None  # marker for "matched to the diagonal" in assignment lists


@dataclass(frozen=True)
class Matching:
    """Assignment between two diagrams; DIAG (None) marks diagonal matches."""

    assignments: tuple  # of (index_in_a | None, index_in_b | None)
    cost: float

    def pair_costs(self, a: np.ndarray, b: np.ndarray):
        """Recompute the L-inf cost of every assignment from the raw pairs."""
        out = []
        for ia, ib in self.assignments:
            if ia is None and ib is None:
                out.append(0.0)
            elif ia is None:
                out.append(0.5 * (b[ib, 1] - b[ib, 0]))
            elif ib is None:
                out.append(0.5 * (a[ia, 1] - a[ia, 0]))
            else:
                out.append(
                    max(abs(a[ia, 0] - b[ib, 0]), abs(a[ia, 1] - b[ib, 1]))
                )
        return out


def _prepare(a: PersistenceDiagram, b: PersistenceDiagram, ignore_scale_cap: bool):
    if a.dim != b.dim:
        raise ParameterError("diagram dimension mismatch: %d vs %d" % (a.dim, b.dim))
    if not ignore_scale_cap and a.scale_cap != b.scale_cap:
        raise ParameterError(
            "diagrams computed at different scale caps (%g vs %g); "
            "pass ignore_scale_cap=True to compare anyway" % (a.scale_cap, b.scale_cap)
        )
    # Essential (infinite-death) classes: dropped when counts agree, else the
    # distance is +inf.
    if a.infinite_count() != b.infinite_count():
        return None, None
    return a.finite_pairs(), b.finite_pairs()


def _augmented_cost_matrix(pa: np.ndarray, pb: np.ndarray):
    na, nb = pa.shape[0], pb.shape[0]
    size = na + nb
    cost = np.zeros((size, size))
    if na and nb:
        cost[:na, :nb] = np.maximum(
            np.abs(pa[:, None, 0] - pb[None, :, 0]),
            np.abs(pa[:, None, 1] - pb[None, :, 1]),
        )
    diag_a = 0.5 * (pa[:, 1] - pa[:, 0])
    diag_b = 0.5 * (pb[:, 1] - pb[:, 0])
    big = np.inf
    cost[:na, nb:] = big
    cost[na:, :nb] = big
    cost[np.arange(na), nb + np.arange(na)] = diag_a
    cost[na + np.arange(nb), np.arange(nb)] = diag_b
    return cost


def wasserstein(
    a: PersistenceDiagram,
    b: PersistenceDiagram,
    p: float = 2.0,
    ignore_scale_cap: bool = False,
):
    """Degree-p Wasserstein distance and an optimal matching."""
    if p < 1:
        raise ParameterError("p must be >= 1")
    pa, pb = _prepare(a, b, ignore_scale_cap)
    if pa is None:
        return math.inf, Matching(assignments=(), cost=math.inf)
    na, nb = pa.shape[0], pb.shape[0]
    if na == 0 and nb == 0:
        return 0.0, Matching(assignments=(), cost=0.0)
    cost = _augmented_cost_matrix(pa, pb)
    finite = np.isfinite(cost)
    powed = np.where(finite, np.power(cost, p, where=finite), np.inf)
    rows, cols = linear_sum_assignment(powed)
    total = float(powed[rows, cols].sum())
    value = total ** (1.0 / p)
    assignments = []
    for r, c in zip(rows, cols):
        ia = int(r) if r < na else None
        ib = int(c) if c < nb else None
        if ia is None and ib is None:
            continue
        assignments.append((ia, ib))
    return value, Matching(assignments=tuple(assignments), cost=value)


def bottleneck(
    a: PersistenceDiagram,
    b: PersistenceDiagram,
    ignore_scale_cap: bool = False,
):
    """Bottleneck distance (minimal possible largest single-pair cost)."""
    pa, pb = _prepare(a, b, ignore_scale_cap)
    if pa is None:
        return math.inf, Matching(assignments=(), cost=math.inf)
    na, nb = pa.shape[0], pb.shape[0]
    if na == 0 and nb == 0:
        return 0.0, Matching(assignments=(), cost=0.0)
    cost = _augmented_cost_matrix(pa, pb)
    candidates = np.unique(cost[np.isfinite(cost)])
    lo, hi = 0, candidates.size - 1
    # smallest candidate cost admitting a perfect matching over edges <= c
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(cost, candidates[mid]) is not None:
            hi = mid
        else:
            lo = mid + 1
    value = float(candidates[lo])
    match = _feasible(cost, candidates[lo])
    size = na + nb
    assignments = []
    for r in range(size):
        c = int(match[r])
        ia = r if r < na else None
        ib = c if c < nb else None
        if ia is None and ib is None:
            continue
        assignments.append((ia, ib))
    return value, Matching(assignments=tuple(assignments), cost=value)


def _feasible(cost, c):
    """Perfect matching using only entries with cost <= c, or None."""
    size = cost.shape[0]
    mask = cost <= c
    graph = csr_matrix(mask.astype(np.int8))
    match = maximum_bipartite_matching(graph, perm_type="column")
    if np.any(match < 0):
        return None
    return match


# ---------------------------------------------------------------------------
# Exhaustive oracle
# ---------------------------------------------------------------------------

BRUTE_FORCE_LIMIT = 8


def brute_force_match(a: PersistenceDiagram, b: PersistenceDiagram, p=2.0):
    """Enumerate every augmented matching; p = math.inf gives bottleneck."""
    pa, pb = _prepare(a, b, ignore_scale_cap=True)
    if pa is None:
        return math.inf, Matching(assignments=(), cost=math.inf)
    na, nb = pa.shape[0], pb.shape[0]
    if na + nb > BRUTE_FORCE_LIMIT:
        raise ParameterError(
            "brute_force_match is limited to |A|+|B| <= %d" % BRUTE_FORCE_LIMIT
        )
    diag_a = 0.5 * (pa[:, 1] - pa[:, 0])
    direct = np.zeros((na, nb))
    if na and nb:
        direct = np.maximum(
            np.abs(pa[:, None, 0] - pb[None, :, 0]),
            np.abs(pa[:, None, 1] - pb[None, :, 1]),
        )
    diag_b = 0.5 * (pb[:, 1] - pb[:, 0])

    best_value = math.inf
    best_assign = ()
    for k in range(min(na, nb) + 1):
        for sub_a in itertools.combinations(range(na), k):
            for sub_b in itertools.permutations(range(nb), k):
                costs = [direct[i, j] for i, j in zip(sub_a, sub_b)]
                costs += [diag_a[i] for i in range(na) if i not in sub_a]
                costs += [diag_b[j] for j in range(nb) if j not in sub_b]
                if math.isinf(p):
                    value = max(costs) if costs else 0.0
                else:
                    value = sum(c**p for c in costs) ** (1.0 / p)
                if value < best_value:
                    best_value = value
                    assign = list(zip(sub_a, sub_b))
                    assign += [(i, None) for i in range(na) if i not in sub_a]
                    assign += [(None, j) for j in range(nb) if j not in sub_b]
                    best_assign = tuple(assign)
    if best_value is math.inf and na == 0 and nb == 0:
        best_value = 0.0
    return float(best_value), Matching(assignments=best_assign, cost=float(best_value))
