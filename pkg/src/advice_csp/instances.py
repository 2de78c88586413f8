"""Boolean parity-constraint instances, graphs, planted generators, evaluation.

Variables take values in {-1, +1}.  A Max k-Lin constraint asks that the
product of k distinct variables equal a right-hand side in {-1, +1}; each
constraint carries a nonnegative weight.  Max-Cut graphs are the special
case of arity 2 with every right-hand side equal to -1 and unit weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConstructionError, InputError, InternalError

Constraint = tuple[tuple[int, ...], int, float]

_MAX_RESTARTS = 100


def _as_pm1(values, n=None, what="assignment"):
    """Validate and return a +-1 integer vector."""
    x = np.asarray(values)
    if x.ndim != 1:
        raise InputError(f"{what} must be one-dimensional")
    if n is not None and x.shape[0] != n:
        raise InputError(f"{what} has length {x.shape[0]}, expected {n}")
    xi = x.astype(np.int64, copy=False)
    if not np.array_equal(xi, x) or not np.all(np.abs(xi) == 1):
        raise InputError(f"{what} entries must be -1 or +1")
    return xi.astype(np.int8)


@dataclass(frozen=True, eq=False)
class KLinInstance:
    """Max k-Lin instance: parity constraints with +-1 right-hand sides.

    ``k`` is the maximum arity; individual constraints may use fewer
    indices (mixed unary/binary instances arise from the 3-Lin reduction).
    Constraints are kept verbatim, duplicates included.
    """

    k: int
    n: int
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise InputError("arity and variable count must be >= 1")
        for idx, rhs, w in self.constraints:
            if not 1 <= len(idx) <= self.k:
                raise InputError(f"constraint arity {len(idx)} outside 1..{self.k}")
            if len(set(idx)) != len(idx):
                raise InputError(f"repeated index in constraint {idx}")
            if any(i < 0 or i >= self.n for i in idx):
                raise InputError(f"index out of range in constraint {idx}")
            if rhs not in (-1, 1):
                raise InputError(f"right-hand side must be -1 or +1, got {rhs}")
            if not (math.isfinite(w) and w >= 0):
                raise InputError(f"weight must be finite and nonnegative, got {w}")

    @property
    def m(self) -> int:
        return len(self.constraints)

    @cached_property
    def total_weight(self) -> float:
        return float(sum(w for _, _, w in self.constraints))

    @cached_property
    def _arity_groups(self):
        """Constraints grouped by arity as index/rhs/weight arrays."""
        groups = {}
        by_arity: dict[int, list[int]] = {}
        for pos, (idx, _, _) in enumerate(self.constraints):
            by_arity.setdefault(len(idx), []).append(pos)
        for arity, positions in by_arity.items():
            idx = np.array([self.constraints[p][0] for p in positions], dtype=np.int64)
            rhs = np.array([self.constraints[p][1] for p in positions], dtype=np.int8)
            w = np.array([self.constraints[p][2] for p in positions], dtype=np.float64)
            groups[arity] = (np.array(positions, dtype=np.int64), idx, rhs, w)
        return groups


@dataclass(frozen=True, eq=False)
class GraphInstance:
    """Undirected multigraph given by its edge list (u < v per edge)."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge ({u},{v}) out of range")

    @cached_property
    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        if not self.edges:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        e = np.array(self.edges, dtype=np.int64)
        return e[:, 0], e[:, 1]

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        u, v = self.edge_arrays
        np.add.at(deg, u, 1)
        np.add.at(deg, v, 1)
        return deg

    @property
    def regular_degree(self) -> int | None:
        """The common degree d, or None if the graph is irregular."""
        deg = self.degrees
        if self.n == 0 or np.all(deg == deg[0]):
            return int(deg[0]) if self.n else 0
        return None

    @cached_property
    def adjacency(self) -> list[np.ndarray]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return [np.array(sorted(a), dtype=np.int64) for a in nbrs]


@dataclass(frozen=True, eq=False)
class PlantedInstance:
    """A generated instance together with its planted assignment."""

    instance: KLinInstance | GraphInstance
    x_star: np.ndarray
    planted_value: float
    noise_rate: float

    def __post_init__(self):
        object.__setattr__(self, "x_star", _as_pm1(self.x_star, what="planted assignment"))
        if isinstance(self.instance, GraphInstance):
            got = cut_value(self.instance, self.x_star)
        else:
            got, _ = evaluate(self.instance, self.x_star)
        if abs(got - self.planted_value) > 1e-9 * max(1.0, abs(self.planted_value)):
            raise InputError(
                f"planted value {self.planted_value} does not match evaluation {got}"
            )


@dataclass(frozen=True, eq=False)
class QpMatrix:
    """Symmetric zero-diagonal coefficient matrix of a +-1 quadratic form."""

    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InputError("coefficient matrix must be square")
        if not np.all(np.isfinite(a)):
            raise InputError("coefficient matrix must be finite")
        if not np.allclose(a, a.T, atol=1e-12, rtol=0):
            raise InputError("coefficient matrix must be symmetric")
        if np.any(np.abs(np.diag(a)) > 0):
            raise InputError("coefficient matrix must have zero diagonal")
        object.__setattr__(self, "a", a)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def frobenius(self) -> float:
        return float(np.linalg.norm(self.a))

    def form_value(self, x) -> float:
        """The quadratic form over ordered pairs at a point in [-1,1]^n."""
        x = np.asarray(x, dtype=np.float64)
        return float(x @ self.a @ x)


def evaluate(instance: KLinInstance, x) -> tuple[float, float]:
    """Satisfied weight and satisfied fraction of an assignment.

    The fraction is satisfied weight over total weight; an instance with
    no constraints evaluates to (0.0, 1.0).
    """
    xv = _as_pm1(x, instance.n)
    if instance.m == 0:
        return 0.0, 1.0
    sat = 0.0
    for _, idx, rhs, w in instance._arity_groups.values():
        prods = xv[idx].prod(axis=1, dtype=np.int64)
        sat += float(w[prods == rhs].sum())
    total = instance.total_weight
    if total <= 0:
        raise InputError("total weight must be positive for a nonempty instance")
    return sat, sat / total


def satisfied_mask(instance: KLinInstance, x) -> np.ndarray:
    """Boolean mask over constraints, in instance order."""
    xv = _as_pm1(x, instance.n)
    mask = np.zeros(instance.m, dtype=bool)
    for positions, idx, rhs, _ in instance._arity_groups.values():
        prods = xv[idx].prod(axis=1, dtype=np.int64)
        mask[positions] = prods == rhs
    return mask


def cut_value(graph: GraphInstance, x) -> int:
    """Number of edges cut by the +-1 side assignment (+1 side is S)."""
    xv = _as_pm1(x, graph.n)
    u, v = graph.edge_arrays
    return int(np.count_nonzero(xv[u] != xv[v]))


def graph_to_klin(graph: GraphInstance) -> KLinInstance:
    """View a graph as a Max-Cut 2-Lin instance (all rhs -1, unit weights)."""
    cons = tuple(((u, v), -1, 1.0) for u, v in graph.edges)
    return KLinInstance(k=2, n=graph.n, constraints=cons)


def to_quadratic_matrix(instance: KLinInstance | GraphInstance) -> QpMatrix:
    """Coefficient matrix of the satisfied-weight identity for arity-2 instances.

    Parallel constraints merge additively: a_ij = a_ji = sum of rhs * weight
    over constraints on {i, j}.  For any assignment x the satisfied weight
    equals W/2 + <x, A x>/4, with the form summed over ordered pairs.
    """
    if isinstance(instance, GraphInstance):
        instance = graph_to_klin(instance)
    a = np.zeros((instance.n, instance.n), dtype=np.float64)
    for idx, rhs, w in instance.constraints:
        if len(idx) != 2:
            raise InputError("quadratic matrix requires every constraint to have arity 2")
        i, j = idx
        a[i, j] += rhs * w
        a[j, i] += rhs * w
    return QpMatrix(a)


def quadratic_identity_value(instance: KLinInstance, qp: QpMatrix, x) -> float:
    """Satisfied weight reconstructed from the quadratic form identity."""
    return instance.total_weight / 2.0 + qp.form_value(np.asarray(x, dtype=np.float64)) / 4.0


def _pair_swap_repair(
    pairs: np.ndarray, rng, bipartite: bool, max_sweeps: int = 500
) -> bool:
    """Rewire a stub pairing in place until it is simple; False if stuck.

    A conflicted pair (self-loop or duplicate edge) swaps its second
    endpoint with a uniformly random other pair; repeats until clean.
    Bipartite pairings hold (left, right) rows, where orientation matters
    and self-loops are impossible.
    """
    mpairs = pairs.shape[0]
    for _ in range(max_sweeps):
        key = pairs if bipartite else np.sort(pairs, axis=1)
        bad = np.zeros(mpairs, dtype=bool)
        if not bipartite:
            bad |= key[:, 0] == key[:, 1]
        order = np.lexsort((key[:, 1], key[:, 0]))
        sk = key[order]
        same = np.all(sk[1:] == sk[:-1], axis=1)
        bad[order[1:][same]] = True
        bad[order[:-1][same]] = True
        bad_idx = np.flatnonzero(bad)
        if bad_idx.size == 0:
            return True
        others = rng.integers(0, mpairs, size=bad_idx.size)
        for b, c in zip(bad_idx, others):
            pairs[b, 1], pairs[c, 1] = pairs[c, 1], pairs[b, 1]
    return False


def _random_regular_pairing(nodes: np.ndarray, d: int, rng) -> list[tuple[int, int]]:
    """Simple d-regular graph on the given nodes via repaired stub pairing."""
    if d == 0:
        return []
    half = nodes.shape[0]
    if (half * d) % 2 != 0:
        raise ConstructionError(f"{d}-regular graph on {half} vertices needs an even stub count")
    if d > half - 1:
        raise ConstructionError(f"degree {d} impossible on {half} vertices")
    for _ in range(_MAX_RESTARTS):
        stubs = np.repeat(np.arange(half), d)
        rng.shuffle(stubs)
        pairs = stubs.reshape(-1, 2)
        if _pair_swap_repair(pairs, rng, bipartite=False):
            return [(int(nodes[min(a, b)]), int(nodes[max(a, b)])) for a, b in pairs]
    raise ConstructionError("regular pairing failed after restart cap")


def _random_biregular_pairing(left: np.ndarray, right: np.ndarray, d: int, rng) -> list[tuple[int, int]]:
    """Simple d-regular bipartite pairing between two equal-size sides."""
    if d == 0:
        return []
    half = left.shape[0]
    if d > half:
        raise ConstructionError(f"cross degree {d} impossible with {half} vertices per side")
    for _ in range(_MAX_RESTARTS):
        lstubs = np.repeat(np.arange(half), d)
        rstubs = np.repeat(np.arange(half), d)
        rng.shuffle(rstubs)
        pairs = np.stack([lstubs, rstubs], axis=1)
        # Self-loops are impossible across sides; only duplicates need repair.
        if _pair_swap_repair(pairs, rng, bipartite=True):
            return [(int(left[a]), int(right[b])) for a, b in pairs]
    raise ConstructionError("bipartite pairing failed after restart cap")


def plant_bipartite_regular(n: int, d: int, gamma: float, seed: int) -> PlantedInstance:
    """Plant a balanced cut in a d-regular graph.

    Vertices 0..n/2-1 form the planted side S* (assignment +1), the rest
    T* (-1).  Every vertex gets ceil((1-gamma)*d) cross edges and the
    remainder inside its own side, so gamma=0 yields a bipartite d-regular
    graph whose planted cut is exactly optimal.
    """
    if n < 2 or n % 2 != 0:
        raise InputError("vertex count must be even and >= 2")
    if d < 1:
        raise InputError("degree must be >= 1")
    if not 0.0 <= gamma <= 1.0:
        raise InputError("intra-side fraction must lie in [0, 1]")
    if d >= n // 2:
        raise ConstructionError(f"degree {d} too large for {n} vertices")
    half = n // 2
    d_cross = math.ceil((1.0 - gamma) * d)
    d_intra = d - d_cross
    if (half * d_intra) % 2 != 0:
        raise ConstructionError(
            f"intra-side degree {d_intra} on {half} vertices has odd stub parity"
        )
    rng = np.random.default_rng(seed)
    left = np.arange(half)
    right = np.arange(half, n)
    edges: list[tuple[int, int]] = []
    edges += _random_biregular_pairing(left, right, d_cross, rng)
    edges += _random_regular_pairing(left, d_intra, rng)
    edges += _random_regular_pairing(right, d_intra, rng)
    graph = GraphInstance(n=n, edges=tuple(sorted(edges)))
    if graph.regular_degree != d:
        raise InternalError(f"generator produced a non-{d}-regular graph")
    x_star = np.concatenate([np.ones(half, dtype=np.int8), -np.ones(half, dtype=np.int8)])
    return PlantedInstance(
        instance=graph,
        x_star=x_star,
        planted_value=float(half * d_cross),
        noise_rate=gamma,
    )


def plant_klin(n: int, k: int, m: int, delta: float, seed: int) -> PlantedInstance:
    """Plant an assignment in a random unweighted Max k-Lin instance.

    Each constraint picks a uniform tuple of k distinct variables; its
    right-hand side matches the planted assignment except with probability
    delta, so the planted fraction concentrates at 1 - delta.
    """
    if m < 1:
        raise InputError("constraint count must be >= 1")
    if k > n:
        raise InputError(f"arity {k} exceeds variable count {n}")
    if not 0.0 <= delta <= 1.0:
        raise InputError("noise rate must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    x_star = rng.choice(np.array([-1, 1], dtype=np.int8), size=n)
    idx = np.empty((m, k), dtype=np.int64)
    pending = np.arange(m)
    while pending.size:
        draw = rng.integers(0, n, size=(pending.size, k))
        if k > 1:
            ok = np.all(np.diff(np.sort(draw, axis=1), axis=1) != 0, axis=1)
        else:
            ok = np.ones(pending.size, dtype=bool)
        idx[pending[ok]] = draw[ok]
        pending = pending[~ok]
    rhs = x_star[idx].prod(axis=1, dtype=np.int64)
    flips = rng.random(m) < delta
    rhs[flips] *= -1
    cons = tuple(
        (tuple(int(j) for j in idx[c]), int(rhs[c]), 1.0) for c in range(m)
    )
    instance = KLinInstance(k=k, n=n, constraints=cons)
    return PlantedInstance(
        instance=instance,
        x_star=x_star,
        planted_value=float(m - int(flips.sum())),
        noise_rate=delta,
    )
