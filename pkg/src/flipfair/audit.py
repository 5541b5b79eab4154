"""Exact fairness audits: flip-based and removal-based envy criteria.

For an envious ordered pair (i, j) a *rational flip* is a pair of items
(a in A_i, b in A_j) with v_i(b) > v_i(a).  The flip-based criteria compare
the post-flip bundles: the exchange must leave i with at least gamma times
her (new) value for j's bundle.  EFF1 quantifies existentially over flips,
EFFX universally; both are reported as the supremum gamma in [0, 1] that the
pair satisfies, so the boolean notions are exactly "gamma = 1".

All operations are pure functions of immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import NamedTuple

from .core import Allocation, Instance, value_of

ONE = Fraction(1)

NOTIONS = ("ef", "eff1", "effx")


class ImpossibleStateError(RuntimeError):
    """An envious pair with no rational flip; cannot happen under additivity."""


class RationalFlip(NamedTuple):
    a: int  # item surrendered by the envious agent i
    b: int  # item taken from the envied agent j


@dataclass(frozen=True)
class EnvyGraph:
    """Directed graph over a subset of agents; edge (i, j) iff i envies j."""

    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]

    def out_neighbours(self, v: int) -> list[int]:
        return sorted(j for (i, j) in self.edges if i == v)

    def sources(self) -> list[int]:
        envied = {j for (_, j) in self.edges}
        return sorted(self.vertices - envied)


@dataclass(frozen=True)
class PairAudit:
    i: int
    j: int
    envies: bool
    ef: Fraction
    eff1: Fraction
    effx: Fraction
    ef1_removal: bool
    efx_removal: bool


@dataclass(frozen=True)
class AllocationAudit:
    ef: Fraction
    eff1: Fraction
    effx: Fraction
    ef1_removal: bool
    efx_removal: bool
    po: bool | None = None  # filled by the solvers module when requested


@dataclass(frozen=True)
class AuditReport:
    pairs: tuple[PairAudit, ...]  # in (i, j) lexicographic order
    allocation: AllocationAudit

    def pair(self, i: int, j: int) -> PairAudit:
        for p in self.pairs:
            if p.i == i and p.j == j:
                return p
        raise KeyError((i, j))

    def gamma(self, notion: str) -> Fraction:
        return getattr(self.allocation, notion)

    def with_po(self, po: bool) -> "AuditReport":
        return replace(self, allocation=replace(self.allocation, po=po))

    def to_doc(self) -> dict:
        from .core import format_rational as fr

        return {
            "pairs": [
                {
                    "i": p.i,
                    "j": p.j,
                    "envies": p.envies,
                    "gamma": {
                        "ef": fr(p.ef),
                        "ef1_removal": p.ef1_removal,
                        "efx_removal": p.efx_removal,
                        "eff1": fr(p.eff1),
                        "effx": fr(p.effx),
                    },
                }
                for p in self.pairs
            ],
            "allocation": {
                "ef": fr(self.allocation.ef),
                "ef1_removal": self.allocation.ef1_removal,
                "efx_removal": self.allocation.efx_removal,
                "eff1": fr(self.allocation.eff1),
                "effx": fr(self.allocation.effx),
                "po": self.allocation.po,
            },
        }


def _check_pair(inst: Instance, i: int, j: int) -> None:
    if not 0 <= i < inst.n:
        raise ValueError(f"unknown agent id {i}")
    if not 0 <= j < inst.n:
        raise ValueError(f"unknown agent id {j}")
    if i == j:
        raise ValueError("agent pair must be distinct")


def rational_flips(inst: Instance, alloc, i: int, j: int) -> list[RationalFlip]:
    """All rational flips for the ordered pair (i, j), in (a, b) lex order."""
    _check_pair(inst, i, j)
    vi = inst.values[i]
    return [
        RationalFlip(a, b)
        for a in sorted(alloc[i])
        for b in sorted(alloc[j])
        if vi[b] > vi[a]
    ]


def pair_gamma_ef(inst: Instance, alloc, i: int, j: int) -> Fraction:
    _check_pair(inst, i, j)
    own = value_of(inst, i, alloc[i])
    other = value_of(inst, i, alloc[j])
    if own >= other:
        return ONE
    return own / other


def _flip_ratios(inst: Instance, alloc, i: int, j: int) -> list[Fraction]:
    own = value_of(inst, i, alloc[i])
    other = value_of(inst, i, alloc[j])
    vi = inst.values[i]
    ratios = []
    for a, b in rational_flips(inst, alloc, i, j):
        post_own = own - vi[a] + vi[b]
        post_other = other - vi[b] + vi[a]
        # Zero denominator: the gamma-condition holds for every gamma in [0,1].
        ratios.append(ONE if post_other == 0 else post_own / post_other)
    if not ratios:
        raise ImpossibleStateError(
            f"agent {i} envies agent {j} but has no rational flip"
        )
    return ratios


def pair_gamma_eff1(inst: Instance, alloc, i: int, j: int) -> Fraction:
    """Best flip: sup of gamma satisfied by *some* rational flip, in [0, 1]."""
    _check_pair(inst, i, j)
    if value_of(inst, i, alloc[i]) >= value_of(inst, i, alloc[j]):
        return ONE
    return min(ONE, max(_flip_ratios(inst, alloc, i, j)))


def pair_gamma_effx(inst: Instance, alloc, i: int, j: int) -> Fraction:
    """Worst flip: sup of gamma satisfied by *every* rational flip, in [0, 1]."""
    _check_pair(inst, i, j)
    if value_of(inst, i, alloc[i]) >= value_of(inst, i, alloc[j]):
        return ONE
    return min(ONE, min(_flip_ratios(inst, alloc, i, j)))


def pair_ef1_removal(inst: Instance, alloc, i: int, j: int) -> bool:
    """Classic EF1: some good in A_j whose removal kills the envy."""
    _check_pair(inst, i, j)
    own = value_of(inst, i, alloc[i])
    other = value_of(inst, i, alloc[j])
    if own >= other:
        return True
    vi = inst.values[i]
    return any(own >= other - vi[g] for g in alloc[j])


def pair_efx_removal(inst: Instance, alloc, i: int, j: int) -> bool:
    """Classic EFX: every good in A_j (zero-valued included) kills the envy."""
    _check_pair(inst, i, j)
    own = value_of(inst, i, alloc[i])
    other = value_of(inst, i, alloc[j])
    if own >= other:
        return True
    vi = inst.values[i]
    return all(own >= other - vi[g] for g in alloc[j])


def audit_allocation(inst: Instance, alloc: Allocation) -> AuditReport:
    """Full deterministic audit of every ordered pair plus allocation-level mins."""
    from .core import validate_allocation

    violations = validate_allocation(inst, alloc)
    if violations:
        raise ValueError("invalid allocation: " + "; ".join(violations))
    pairs = []
    for i in inst.agents:
        own = value_of(inst, i, alloc[i])
        for j in inst.agents:
            if i == j:
                continue
            other = value_of(inst, i, alloc[j])
            pairs.append(
                PairAudit(
                    i=i,
                    j=j,
                    envies=own < other,
                    ef=pair_gamma_ef(inst, alloc, i, j),
                    eff1=pair_gamma_eff1(inst, alloc, i, j),
                    effx=pair_gamma_effx(inst, alloc, i, j),
                    ef1_removal=pair_ef1_removal(inst, alloc, i, j),
                    efx_removal=pair_efx_removal(inst, alloc, i, j),
                )
            )
    level = AllocationAudit(
        ef=min(p.ef for p in pairs),
        eff1=min(p.eff1 for p in pairs),
        effx=min(p.effx for p in pairs),
        ef1_removal=all(p.ef1_removal for p in pairs),
        efx_removal=all(p.efx_removal for p in pairs),
    )
    return AuditReport(pairs=tuple(pairs), allocation=level)


def allocation_gamma(inst: Instance, alloc, notion: str) -> Fraction:
    """Allocation-level gamma for one notion: min over ordered pairs."""
    fn = {"ef": pair_gamma_ef, "eff1": pair_gamma_eff1, "effx": pair_gamma_effx}[notion]
    return min(
        fn(inst, alloc, i, j)
        for i in inst.agents
        for j in inst.agents
        if i != j
    )


def build_envy_graph(inst: Instance, bundles, vertices) -> EnvyGraph:
    """Envy graph restricted to the given agents, from possibly partial bundles."""
    verts = frozenset(vertices)
    for v in verts:
        if not 0 <= v < inst.n:
            raise ValueError(f"unknown agent id {v}")
    edges = set()
    values = {v: value_of(inst, v, bundles[v]) for v in verts}
    for i in verts:
        for j in verts:
            if i != j and values[i] < value_of(inst, i, bundles[j]):
                edges.add((i, j))
    return EnvyGraph(vertices=verts, edges=frozenset(edges))
