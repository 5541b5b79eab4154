"""Seeded instance generators for each studied valuation family, plus classifiers.

Values are sampled on a rational grid controlled by the granularity parameter
(the denominator bound), so downstream enumeration and audits stay exact.
Every generated instance is classifier-checked before it is returned, and a
fixed seed reproduces the instance byte for byte.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .core import Instance, common_top_n, serialize_instance, top_items

FAMILIES = ("general", "ordered", "top-n-agreement", "rho-bounded", "identical", "binary")


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: int
    k: int
    seed: int
    rho: Fraction | None = None  # bound, only for top-n-agreement / rho-bounded
    granularity: int = 10

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 2 or self.k < 1:
            raise ValueError(f"need n >= 2 and k >= 1, got n={self.n}, k={self.k}")
        if self.granularity < 1:
            raise ValueError("granularity must be a positive integer")
        if self.rho is not None and self.rho < 1:
            raise ValueError(f"rho bound must be >= 1, got {self.rho}")
        if self.family in ("top-n-agreement", "rho-bounded") and self.rho is None:
            raise ValueError(f"family {self.family!r} needs a rho bound")


@dataclass(frozen=True)
class Classification:
    identical: bool
    binary: bool
    ordered: bool
    top_n_agreement: bool
    ambiguous_top_n: bool  # some agent ties between her n-th and (n+1)-th values
    top_n_items: frozenset[int] | None
    rho: Fraction | None  # over T^n under agreement, else individualized; None if unbounded


def individual_rho(inst: Instance) -> Fraction | None:
    """max over agents of (top value / n-th best value); None when the n-th
    best value of some agent is zero."""
    worst: Fraction | None = None
    for i in inst.agents:
        values = sorted(inst.values[i], reverse=True)
        if values[inst.n - 1] == 0:
            return None
        ratio = values[0] / values[inst.n - 1]
        worst = ratio if worst is None else max(worst, ratio)
    return worst


def classify(inst: Instance) -> Classification:
    rows = inst.values
    identical = all(row == rows[0] for row in rows)
    binary = all(v in (0, 1) for row in rows for v in row)

    # ordered: some common permutation sorts every agent non-increasingly,
    # i.e. the "must come strictly before" relation is acyclic
    edges = {
        (x, y)
        for x in inst.items
        for y in inst.items
        if x != y and any(rows[i][x] > rows[i][y] for i in inst.agents)
    }
    ordered = _is_dag(list(inst.items), edges)

    ambiguous = False
    for i in inst.agents:
        values = sorted(rows[i], reverse=True)
        if inst.m > inst.n and values[inst.n - 1] == values[inst.n]:
            ambiguous = True
            break
    witness = None if ambiguous else common_top_n(inst)
    agreement = witness is not None

    if agreement:
        rho: Fraction | None = None
        for i in inst.agents:
            in_top = [rows[i][g] for g in witness]
            low = min(in_top)
            if low == 0:
                rho = None
                break
            ratio = max(in_top) / low
            rho = ratio if rho is None or ratio > rho else rho
    else:
        rho = individual_rho(inst)
    return Classification(
        identical=identical,
        binary=binary,
        ordered=ordered,
        top_n_agreement=agreement,
        ambiguous_top_n=ambiguous,
        top_n_items=witness,
        rho=rho,
    )


def _is_dag(verts, edges) -> bool:
    indeg = {v: 0 for v in verts}
    for (_, j) in edges:
        indeg[j] += 1
    ready = [v for v in verts if indeg[v] == 0]
    seen = 0
    adj: dict[int, list[int]] = {v: [] for v in verts}
    for (i, j) in edges:
        adj[i].append(j)
    while ready:
        v = ready.pop()
        seen += 1
        for j in adj[v]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
    return seen == len(verts)


def _grid_value(rng: random.Random, granularity: int, lo=0, hi=20) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, granularity))


def generate(spec: FamilySpec) -> Instance:
    """Deterministic instance provably inside the requested family."""
    rng = random.Random(spec.seed)
    n, k, m, G = spec.n, spec.k, spec.n * spec.k, spec.granularity

    if spec.family == "general":
        rows = [[_grid_value(rng, G) for _ in range(m)] for _ in range(n)]
    elif spec.family == "identical":
        row = [_grid_value(rng, G) for _ in range(m)]
        rows = [list(row) for _ in range(n)]
    elif spec.family == "binary":
        rows = [[Fraction(rng.randint(0, 1)) for _ in range(m)] for _ in range(n)]
    elif spec.family == "ordered":
        perm = list(range(m))
        rng.shuffle(perm)
        rows = []
        for _ in range(n):
            draws = sorted((_grid_value(rng, G) for _ in range(m)), reverse=True)
            row = [Fraction(0)] * m
            for rank, g in enumerate(perm):
                row[g] = draws[rank]
            rows.append(row)
    elif spec.family == "top-n-agreement":
        top = rng.sample(range(m), n)
        rows = [_bounded_row(rng, m, top, spec.rho, G) for _ in range(n)]
    elif spec.family == "rho-bounded":
        rows = [
            _bounded_row(rng, m, rng.sample(range(m), n), spec.rho, G) for _ in range(n)
        ]
    else:  # pragma: no cover - guarded by FamilySpec
        raise ValueError(spec.family)

    inst = Instance(n=n, k=k, values=tuple(tuple(r) for r in rows))
    _check_membership(spec, inst)
    return inst


def _bounded_row(rng, m, top, rho, G):
    """Top items in [1, rho], the rest strictly below the top minimum by >= 1/G."""
    row = [Fraction(0)] * m
    for g in top:
        row[g] = 1 + Fraction(rng.randint(0, G), G) * (rho - 1)
    low = min(row[g] for g in top)
    cap = int((low - Fraction(1, G)) * G)  # numerator bound for r/G <= low - 1/G
    for g in range(m):
        if g not in top:
            row[g] = Fraction(rng.randint(0, cap), G)
    return row


def _check_membership(spec: FamilySpec, inst: Instance) -> None:
    label = classify(inst)
    if spec.family == "identical":
        ok = label.identical
    elif spec.family == "binary":
        ok = label.binary
    elif spec.family == "ordered":
        ok = label.ordered
    elif spec.family == "top-n-agreement":
        ok = label.top_n_agreement and label.rho is not None and label.rho <= spec.rho
    elif spec.family == "rho-bounded":
        realized = individual_rho(inst)
        ok = realized is not None and realized <= spec.rho
    else:
        ok = True
    if not ok:  # pragma: no cover - construction guarantees membership
        raise RuntimeError(
            f"generated instance failed the {spec.family} classifier "
            f"(spec={spec}, got {label})"
        )


def sidecar(spec: FamilySpec, inst: Instance) -> dict:
    """The metadata emitted next to a generated instance."""
    from .core import format_rational

    label = classify(inst)
    return {
        "family": spec.family,
        "rho": format_rational(label.rho) if label.rho is not None else None,
        "seed": spec.seed,
    }


def instance_bytes(inst: Instance) -> bytes:
    return serialize_instance(inst).encode()
