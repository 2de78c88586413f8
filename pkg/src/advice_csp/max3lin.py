"""Max 3-Lin with label advice via reduction to weighted Max 2-Lin.

Variable pairs covered by at least t = ceil(8 * eps^-2 * ln(1/delta))
constraints are heavy.  For each heavy pair the advice votes a relative
sign sigma_ij and the reduction emits one pair constraint plus one unary
constraint per covering source; for each light constraint the advice
votes an absolute sign sigma_i at each of its three variables and the
reduction emits one unary constraint per (variable, source).  A vote that
sums to zero keeps rhs +1 but is flagged and counted as always violated.
Solving the reduced instance and returning its assignment unchanged is
the whole algorithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .advice import LabelAdvice
from .errors import InputError
from .instances import KLinInstance, evaluate, satisfied_mask
from .twolin_sdp import TwoLinConfig, solve_2lin

Pair = tuple[int, int]


@dataclass(frozen=True, eq=False)
class PairIncidence:
    """Constraint indices per unordered variable pair, with heavy flags."""

    threshold: int
    by_pair: dict[Pair, list[int]]
    heavy_pairs: tuple[Pair, ...]

    def is_heavy(self, pair: Pair) -> bool:
        key = (min(pair), max(pair))
        return len(self.by_pair.get(key, ())) >= self.threshold


@dataclass(frozen=True, eq=False)
class LightSets:
    """Light-constraint indices per variable (constraints containing it)."""

    by_var: dict[int, list[int]]
    light_mask: np.ndarray


@dataclass(frozen=True, eq=False)
class ReducedInstance:
    """The reduced 2-Lin instance with its bookkeeping.

    ``source[r]`` is the index of the original constraint represented by
    reduced constraint r; ``flagged[r]`` marks zero-vote constraints that
    count as violated no matter the assignment.
    """

    psi: KLinInstance
    source: np.ndarray
    flagged: np.ndarray
    threshold: int
    heavy_pairs: tuple[Pair, ...]
    heavy_mask: np.ndarray
    sigma_by_pair: dict[Pair, int]
    sigma_by_var: dict[int, int]

    @property
    def m(self) -> int:
        return self.psi.m


def compute_threshold(delta: float, epsilon: float) -> int:
    """t = ceil(8 * eps^-2 * ln(1/delta)), the heavy-pair cutoff."""
    if not 0.0 < delta <= 0.5:
        raise InputError(f"delta must lie in (0, 1/2], got {delta}")
    if not 0.0 < epsilon <= 1.0:
        raise InputError(f"epsilon must lie in (0, 1], got {epsilon}")
    return max(1, math.ceil(8.0 * math.log(1.0 / delta) / (epsilon * epsilon)))


def _require_arity3(phi: KLinInstance):
    for idx, _, _ in phi.constraints:
        if len(idx) != 3:
            raise InputError("this pipeline requires arity-3 constraints")


def classify_constraints(phi: KLinInstance, t: int) -> tuple[PairIncidence, LightSets]:
    """Split constraints into heavy and light by pair coverage.

    A pair is heavy when it appears in at least t constraints; a
    constraint is heavy when any of its three pairs is heavy.
    """
    _require_arity3(phi)
    if t < 1:
        raise InputError("threshold must be >= 1")
    by_pair: dict[Pair, list[int]] = {}
    for pos, (idx, _, _) in enumerate(phi.constraints):
        i, j, k = idx
        for a, b in ((i, j), (i, k), (j, k)):
            key = (a, b) if a < b else (b, a)
            by_pair.setdefault(key, []).append(pos)
    heavy_pairs = tuple(sorted(p for p, lst in by_pair.items() if len(lst) >= t))
    heavy_mask = np.zeros(phi.m, dtype=bool)
    for p in heavy_pairs:
        heavy_mask[by_pair[p]] = True
    by_var: dict[int, list[int]] = {}
    for pos, (idx, _, _) in enumerate(phi.constraints):
        if heavy_mask[pos]:
            continue
        for i in idx:
            by_var.setdefault(i, []).append(pos)
    incidence = PairIncidence(threshold=t, by_pair=by_pair, heavy_pairs=heavy_pairs)
    return incidence, LightSets(by_var=by_var, light_mask=~heavy_mask)


def _third_variable(idx: tuple[int, ...], pair: Pair) -> int:
    for i in idx:
        if i not in pair:
            return i
    raise InputError(f"constraint {idx} does not extend pair {pair}")


def create_h_constraints(
    pair: Pair, members: list[int], advice: LabelAdvice, phi: KLinInstance
):
    """Representatives for one heavy pair.

    The advice votes sigma = sgn(sum over members of rhs * label of the
    third variable); each member contributes the pair constraint
    x_i x_j = sigma and the unary pinning x_k = sigma * rhs.
    """
    labels = advice.values
    i, j = pair
    vote = 0
    thirds = []
    for pos in members:
        idx, rhs, _ = phi.constraints[pos]
        k = _third_variable(idx, pair)
        thirds.append((pos, k, rhs))
        vote += rhs * int(labels[k])
    flagged = vote == 0
    sigma = 1 if vote >= 0 else -1
    constraints, sources = [], []
    for pos, k, rhs in thirds:
        constraints.append(((i, j), sigma, 1.0))
        sources.append(pos)
        constraints.append(((k,), sigma * rhs, 1.0))
        sources.append(pos)
    return constraints, sources, flagged, sigma


def create_l_constraints(
    var: int, members: list[int], advice: LabelAdvice, phi: KLinInstance
):
    """Representatives for one variable's light constraints.

    The advice votes sigma = sgn(sum over members of rhs * product of the
    other two labels); each member contributes one copy of x_var = sigma.
    """
    labels = advice.values
    vote = 0
    for pos in members:
        idx, rhs, _ = phi.constraints[pos]
        others = [i for i in idx if i != var]
        vote += rhs * int(labels[others[0]]) * int(labels[others[1]])
    flagged = vote == 0
    sigma = 1 if vote >= 0 else -1
    constraints = [((var,), sigma, 1.0) for _ in members]
    return constraints, list(members), flagged, sigma


def build_psi(
    phi: KLinInstance, advice: LabelAdvice, delta: float, epsilon: float
) -> ReducedInstance:
    """Assemble the reduced weighted 2-Lin instance with unit multiplicities.

    Heavy pairs emit in sorted pair order, then variables in ascending
    order emit their light representatives, so the construction is a
    deterministic function of (instance, advice).
    """
    _require_arity3(phi)
    if advice.n != phi.n:
        raise InputError(f"advice length {advice.n} does not match n={phi.n}")
    t = compute_threshold(delta, epsilon)
    incidence, lights = classify_constraints(phi, t)
    constraints: list = []
    sources: list[int] = []
    flags: list[bool] = []
    sigma_by_pair: dict[Pair, int] = {}
    sigma_by_var: dict[int, int] = {}
    for pair in incidence.heavy_pairs:
        cons, src, flagged, sigma = create_h_constraints(
            pair, incidence.by_pair[pair], advice, phi
        )
        sigma_by_pair[pair] = sigma if not flagged else 0
        constraints.extend(cons)
        sources.extend(src)
        flags.extend([flagged] * len(cons))
    for var in sorted(lights.by_var):
        cons, src, flagged, sigma = create_l_constraints(
            var, lights.by_var[var], advice, phi
        )
        sigma_by_var[var] = sigma if not flagged else 0
        constraints.extend(cons)
        sources.extend(src)
        flags.extend([flagged] * len(cons))
    psi = KLinInstance(k=2, n=phi.n, constraints=tuple(constraints))
    return ReducedInstance(
        psi=psi,
        source=np.array(sources, dtype=np.int64),
        flagged=np.array(flags, dtype=bool),
        threshold=t,
        heavy_pairs=incidence.heavy_pairs,
        heavy_mask=~lights.light_mask,
        sigma_by_pair=sigma_by_pair,
        sigma_by_var=sigma_by_var,
    )


def conservative_psi_value(reduced: ReducedInstance, x) -> float:
    """Satisfied weight of the reduced instance, counting flagged as violated."""
    if reduced.m == 0:
        return 0.0
    sat = satisfied_mask(reduced.psi, x) & ~reduced.flagged
    weights = np.array([w for _, _, w in reduced.psi.constraints])
    return float(weights[sat].sum())


@dataclass(eq=False)
class Max3LinDiagnostics:
    threshold: int
    heavy_pair_count: int
    heavy_constraint_count: int
    light_constraint_count: int
    psi_size: int
    sigma_zero_count: int
    psi_value: float
    psi_fraction: float
    unsat_total: int
    unsat_heavy: int
    unsat_light: int
    heavy_implication_violations: int
    in_guarantee: bool


@dataclass(eq=False)
class Max3LinResult:
    assignment: np.ndarray
    satisfied_fraction: float
    diagnostics: Max3LinDiagnostics


def _heavy_implication_violations(
    phi: KLinInstance, reduced: ReducedInstance, x_hat: np.ndarray
) -> int:
    """Count heavy sources where a satisfied representative couple fails to
    imply the source; algebraically this must always be zero.

    Heavy representatives are emitted in adjacent (pair, unary) couples
    sharing a source, so the scan walks them two at a time.
    """
    sat_psi = satisfied_mask(reduced.psi, x_hat) & ~reduced.flagged
    sat_phi = satisfied_mask(phi, x_hat)
    violations = 0
    r = 0
    while r < reduced.m:
        src = int(reduced.source[r])
        is_couple = (
            reduced.heavy_mask[src]
            and len(reduced.psi.constraints[r][0]) == 2
            and r + 1 < reduced.m
            and int(reduced.source[r + 1]) == src
        )
        if is_couple:
            if sat_psi[r] and sat_psi[r + 1] and not sat_phi[src]:
                violations += 1
            r += 2
        else:
            r += 1
    return violations


def solve_max3lin_with_advice(
    phi: KLinInstance,
    advice: LabelAdvice,
    delta: float,
    epsilon: float | None = None,
    seed=0,
    config: TwoLinConfig | None = None,
) -> Max3LinResult:
    """End-to-end advice pipeline for nearly satisfiable Max 3-Lin.

    ``epsilon`` defaults to the advice's own parameter.  The reduced
    instance feeds the 2-Lin solver with the advice labels as its hint;
    the 2-Lin solution is returned unchanged as the 3-Lin answer.
    """
    _require_arity3(phi)
    eps = advice.epsilon if epsilon is None else epsilon
    reduced = build_psi(phi, advice, delta, eps)
    if config is None:
        config = TwoLinConfig(hint=advice.values)
    x_hat, _ = solve_2lin(reduced.psi, config, seed)
    _, fraction = evaluate(phi, x_hat)
    sat_phi = satisfied_mask(phi, x_hat)
    unsat = ~sat_phi
    psi_value = conservative_psi_value(reduced, x_hat)
    psi_total = reduced.psi.total_weight if reduced.m else 1.0
    floor = math.log(1.0 / delta) / delta / eps**6 * phi.n
    diag = Max3LinDiagnostics(
        threshold=reduced.threshold,
        heavy_pair_count=len(reduced.heavy_pairs),
        heavy_constraint_count=int(reduced.heavy_mask.sum()),
        light_constraint_count=int((~reduced.heavy_mask).sum()),
        psi_size=reduced.m,
        sigma_zero_count=int(reduced.flagged.sum()),
        psi_value=psi_value,
        psi_fraction=psi_value / psi_total if reduced.m else 1.0,
        unsat_total=int(unsat.sum()),
        unsat_heavy=int((unsat & reduced.heavy_mask).sum()),
        unsat_light=int((unsat & ~reduced.heavy_mask).sum()),
        heavy_implication_violations=_heavy_implication_violations(phi, reduced, x_hat),
        in_guarantee=phi.m >= floor,
    )
    return Max3LinResult(assignment=x_hat, satisfied_fraction=fraction, diagnostics=diag)


def representative_accounting(
    phi: KLinInstance,
    reduced: ReducedInstance,
    x_hat,
    x_star,
) -> dict[str, int]:
    """The proof-side counting bound relating reduced failures to source failures.

    Returns the terms of:  unsat_phi(x_hat) <= heavy representatives unsat
    by x_hat + light sources unsat by x_star + light representatives unsat
    by x_star or x_hat.  Flagged representatives count as unsatisfied.
    """
    sat_phi_hat = satisfied_mask(phi, x_hat)
    sat_phi_star = satisfied_mask(phi, x_star)
    sat_psi_hat = satisfied_mask(reduced.psi, x_hat) & ~reduced.flagged
    sat_psi_star = satisfied_mask(reduced.psi, x_star) & ~reduced.flagged
    heavy_rep = reduced.heavy_mask[reduced.source]
    lhs = int((~sat_phi_hat).sum())
    heavy_reps_unsat = int((heavy_rep & ~sat_psi_hat).sum())
    light_sources_unsat_star = int((~sat_phi_star & ~reduced.heavy_mask).sum())
    light_reps_unsat = int((~heavy_rep & ~(sat_psi_star & sat_psi_hat)).sum())
    return {
        "unsat_phi": lhs,
        "heavy_reps_unsat_hat": heavy_reps_unsat,
        "light_sources_unsat_star": light_sources_unsat_star,
        "light_reps_unsat_either": light_reps_unsat,
        "bound": heavy_reps_unsat + light_sources_unsat_star + light_reps_unsat,
    }
