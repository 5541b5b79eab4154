"""Brute-force oracles over the full space of k-sized-bundle allocations.

Every rule here is implemented by exact enumeration with rational arithmetic;
nothing is approximated.  The point is oracle-grade verification at desk
scale, so an explicit budget guard refuses infeasible enumerations instead of
silently grinding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial

from .core import Allocation, Instance, format_rational, value_of
from .audit import allocation_gamma

DEFAULT_BUDGET = 10_000_000


class BudgetExceeded(RuntimeError):
    """The enumeration is larger than the configured budget."""

    def __init__(self, count: int, budget: int):
        self.count = count
        self.budget = budget
        super().__init__(
            f"enumeration of {count} allocations exceeds the budget of {budget}"
        )


def allocation_count(n: int, k: int) -> int:
    """(k*n)! / (k!)^n ordered partitions into n bundles of size k."""
    return factorial(k * n) // factorial(k) ** n


def enumerate_allocations(n: int, k: int, budget: int = DEFAULT_BUDGET):
    """Stream every allocation exactly once, in a fixed lexicographic order.

    Bundles are chosen agent by agent as lexicographic combinations of the
    remaining items.  Refuses with BudgetExceeded when the total count is
    larger than the budget.
    """
    count = allocation_count(n, k)
    if count > budget:
        raise BudgetExceeded(count, budget)

    def rec(remaining: tuple[int, ...], depth: int):
        if depth == n:
            yield ()
            return
        for combo in combinations(remaining, k):
            chosen = frozenset(combo)
            rest = tuple(g for g in remaining if g not in chosen)
            for tail in rec(rest, depth + 1):
                yield (chosen,) + tail

    yield from rec(tuple(range(n * k)), 0)


@dataclass(frozen=True)
class ObjectiveResult:
    rule: str
    optima: tuple[Allocation, ...]  # in enumeration order, all attaining the optimum
    summary: dict
    positive_agents: frozenset[int] | None = None

    @property
    def first(self) -> Allocation:
        return self.optima[0]

    def to_doc(self) -> dict:
        doc = {
            "rule": self.rule,
            "optima": [[sorted(b) for b in alloc] for alloc in self.optima],
            "summary": self.summary,
        }
        if self.positive_agents is not None:
            doc["positive_agents"] = sorted(self.positive_agents)
        return doc


def _bundle_values(inst: Instance, alloc) -> list[Fraction]:
    return [value_of(inst, i, alloc[i]) for i in inst.agents]


def max_nash_welfare(inst: Instance, budget: int = DEFAULT_BUDGET) -> ObjectiveResult:
    """k-bundle MNW: maximise how many agents get positive value, then the
    product of those agents' values.  Returns every optimum."""
    best_key = None
    optima: list[Allocation] = []
    best_positive: frozenset[int] = frozenset()
    for alloc in enumerate_allocations(inst.n, inst.k, budget):
        values = _bundle_values(inst, alloc)
        positive = [i for i in inst.agents if values[i] > 0]
        product = Fraction(1)
        for i in positive:
            product *= values[i]
        key = (len(positive), product)
        if best_key is None or key > best_key:
            best_key = key
            optima = [alloc]
            best_positive = frozenset(positive)
        elif key == best_key:
            optima.append(alloc)
    return ObjectiveResult(
        rule="mnw",
        optima=tuple(optima),
        summary={
            "positive_count": best_key[0],
            "nash_product": format_rational(best_key[1]),
        },
        positive_agents=best_positive,
    )


def leximin(inst: Instance, budget: int = DEFAULT_BUDGET) -> ObjectiveResult:
    """Lexicographically maximal ascending value vector; returns every optimum."""
    best: tuple[Fraction, ...] | None = None
    optima: list[Allocation] = []
    for alloc in enumerate_allocations(inst.n, inst.k, budget):
        vector = tuple(sorted(_bundle_values(inst, alloc)))
        if best is None or vector > best:
            best = vector
            optima = [alloc]
        elif vector == best:
            optima.append(alloc)
    return ObjectiveResult(
        rule="leximin",
        optima=tuple(optima),
        summary={"value_vector": [format_rational(v) for v in best]},
    )


def max_social_welfare(inst: Instance, budget: int = DEFAULT_BUDGET) -> ObjectiveResult:
    """All allocations maximising the utilitarian sum."""
    best: Fraction | None = None
    optima: list[Allocation] = []
    for alloc in enumerate_allocations(inst.n, inst.k, budget):
        sw = sum(_bundle_values(inst, alloc), Fraction(0))
        if best is None or sw > best:
            best = sw
            optima = [alloc]
        elif sw == best:
            optima.append(alloc)
    return ObjectiveResult(
        rule="sw",
        optima=tuple(optima),
        summary={"social_welfare": format_rational(best)},
    )


def is_pareto_optimal(
    inst: Instance, alloc: Allocation, budget: int = DEFAULT_BUDGET
) -> tuple[bool, Allocation | None]:
    """True iff no allocation weakly improves everyone and strictly improves
    someone; otherwise returns (False, dominating allocation)."""
    base = _bundle_values(inst, alloc)
    for other in enumerate_allocations(inst.n, inst.k, budget):
        values = _bundle_values(inst, other)
        if all(v >= b for v, b in zip(values, base)) and any(
            v > b for v, b in zip(values, base)
        ):
            return False, other
    return True, None


def effx_exists(
    inst: Instance,
    notion: str = "effx",
    gamma: Fraction = Fraction(1),
    budget: int = DEFAULT_BUDGET,
    exhaustive: bool = False,
):
    """Search the full allocation space for allocation-level notion-gamma >= gamma.

    Returns the first hit in enumeration order (or None), or every hit when
    exhaustive is set.  notion is one of ef, eff1, effx.
    """
    if notion not in ("ef", "eff1", "effx"):
        raise ValueError(f"unknown notion {notion!r}")
    hits: list[Allocation] = []
    for alloc in enumerate_allocations(inst.n, inst.k, budget):
        if allocation_gamma(inst, alloc, notion) >= gamma:
            if not exhaustive:
                return alloc
            hits.append(alloc)
    return hits if exhaustive else None


def audit_with_pareto(inst: Instance, alloc: Allocation, budget: int = DEFAULT_BUDGET):
    """Full audit report with the Pareto-optimality slot filled in."""
    from .audit import audit_allocation

    report = audit_allocation(inst, alloc)
    po, _ = is_pareto_optimal(inst, alloc, budget)
    return report.with_po(po)
