"""Deterministic simulation of subset advice by exhaustive enumeration.

Running an advice-consuming solver once per (subset, value pattern) with
subsets up to size floor(2 * epsilon * n) dominates a random advice draw,
because with high probability the true advice restricted to its subset is
among the enumerated pairs.  The run count grows like 2^(eps log(4/eps) n),
so a hard cap refuses oversized enumerations instead of truncating them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .advice import SubsetAdvice
from .errors import BudgetError, InputError
from .instances import KLinInstance, evaluate, _as_pm1

DEFAULT_CAP = 10_000_000

InnerSolver = Callable[[KLinInstance, SubsetAdvice, object], np.ndarray]


@dataclass(frozen=True)
class EnumerationBudget:
    max_subset_size: int
    projected: int
    cap: int = DEFAULT_CAP

    @property
    def within_cap(self) -> bool:
        return self.projected <= self.cap


@dataclass(frozen=True, eq=False)
class EnumerationResult:
    assignment: np.ndarray
    value: float
    subset: tuple[int, ...]
    pattern: tuple[int, ...]
    runs: int


def projected_runs(n: int, epsilon: float) -> int:
    """Exact run count: sum over t <= floor(2 eps n) of C(n, t) * 2^t."""
    if n < 1:
        raise InputError("variable count must be >= 1")
    if not 0.0 < epsilon <= 1.0:
        raise InputError(f"epsilon must lie in (0, 1], got {epsilon}")
    size = min(n, math.floor(2.0 * epsilon * n))
    return sum(math.comb(n, t) * (1 << t) for t in range(size + 1))


def budget_for(n: int, epsilon: float, cap: int = DEFAULT_CAP) -> EnumerationBudget:
    size = min(n, math.floor(2.0 * epsilon * n))
    return EnumerationBudget(max_subset_size=size, projected=projected_runs(n, epsilon), cap=cap)


def enumerate_solve(
    instance: KLinInstance,
    epsilon: float,
    inner: InnerSolver,
    seed=0,
    cap: int = DEFAULT_CAP,
) -> EnumerationResult:
    """Try every subset of size <= floor(2 eps n) and every +-1 pattern on it.

    Subsets enumerate smaller sizes first and lexicographically within a
    size; patterns enumerate in (-1, +1) product order.  Each run gets a
    seed derived from (seed, ordinal), so shared prefixes across epsilon
    values see identical runs.  The best assignment by satisfied weight
    wins; ties keep the earliest run.
    """
    n = instance.n
    budget = budget_for(n, epsilon, cap)
    if not budget.within_cap:
        raise BudgetError(
            f"enumeration needs {budget.projected} runs, over the cap of {cap}"
        )
    best_x, best_value, best_subset, best_pattern = None, -math.inf, (), ()
    ordinal = 0
    for size in range(budget.max_subset_size + 1):
        for subset in itertools.combinations(range(n), size):
            idx = np.array(subset, dtype=np.int64)
            for pattern in itertools.product((-1, 1), repeat=size):
                advice = SubsetAdvice(
                    n=n,
                    indices=idx,
                    values=np.array(pattern, dtype=np.int8),
                    epsilon=epsilon,
                )
                x = _as_pm1(inner(instance, advice, (seed, ordinal)), n, "inner result")
                value, _ = evaluate(instance, x)
                if best_x is None or value > best_value:
                    best_x, best_value = x, value
                    best_subset, best_pattern = subset, pattern
                ordinal += 1
    return EnumerationResult(
        assignment=best_x,
        value=best_value,
        subset=best_subset,
        pattern=best_pattern,
        runs=ordinal,
    )
