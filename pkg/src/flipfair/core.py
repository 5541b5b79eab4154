"""Exact-arithmetic data model: instances, allocations, parsing, validation.

Every value in the system is a ``fractions.Fraction``.  There is no floating
point anywhere in the computation path; files carry values as integers or
``"p/q"`` strings and all comparisons downstream are exact.

Items are 0-indexed ids ``0..m-1`` and agents are 0-indexed ids ``0..n-1``,
both in files and in reports.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

# optional sign, digits, optional /digits
_RATIONAL_RE = re.compile(r"^-?[0-9]+(?:/[0-9]+)?$")


class InstanceError(ValueError):
    """Malformed instance document.  Carries the offending row/column when known."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None):
        self.row = row
        self.col = col
        if row is not None and col is not None:
            message = f"{message} (row {row}, column {col})"
        elif row is not None:
            message = f"{message} (row {row})"
        super().__init__(message)


class AllocationError(ValueError):
    """Malformed allocation document."""


def parse_rational(text) -> Fraction:
    """Parse an exact rational from an int or a ``p/q`` / integer string."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational literal: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, str):
        if not _RATIONAL_RE.match(text):
            raise ValueError(f"not a rational literal: {text!r}")
        if "/" in text:
            p, q = text.split("/")
            if int(q) == 0:
                raise ValueError(f"zero denominator: {text!r}")
            return Fraction(int(p), int(q))
        return Fraction(int(text))
    raise ValueError(f"not a rational literal: {text!r}")


def format_rational(value: Fraction) -> str:
    """Canonical reduced string form: ``"p"`` for integers, else ``"p/q"``."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Instance:
    """n agents, bundle size k, and an n x (k*n) matrix of non-negative values.

    Immutable after construction; safe to share across workers.
    """

    n: int
    k: int
    values: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if self.n < 2:
            raise InstanceError(f"need at least 2 agents, got n={self.n}")
        if self.k < 1:
            raise InstanceError(f"need bundle size at least 1, got k={self.k}")
        if len(self.values) != self.n:
            raise InstanceError(
                f"expected {self.n} valuation rows, got {len(self.values)}"
            )
        m = self.n * self.k
        for i, row in enumerate(self.values):
            if len(row) != m:
                raise InstanceError(
                    f"expected {m} items (k*n), row has {len(row)}", row=i
                )
            for g, v in enumerate(row):
                if not isinstance(v, Fraction):
                    raise InstanceError("values must be Fractions", row=i, col=g)
                if v < 0:
                    raise InstanceError(f"negative value {v}", row=i, col=g)

    @property
    def m(self) -> int:
        """Total number of items, always exactly k*n."""
        return self.n * self.k

    @property
    def agents(self) -> range:
        return range(self.n)

    @property
    def items(self) -> range:
        return range(self.m)

    def value(self, agent: int, item: int) -> Fraction:
        return self.values[agent][item]


def make_instance(n: int, k: int, rows) -> Instance:
    """Build an Instance from nested iterables of Fractions or rational literals."""
    values = tuple(
        tuple(v if isinstance(v, Fraction) else parse_rational(v) for v in row)
        for row in rows
    )
    return Instance(n=n, k=k, values=values)


# An allocation is an ordered partition of the items into n bundles of size
# exactly k; a bundle is a frozenset of item ids.
Allocation = tuple[frozenset[int], ...]


@dataclass(frozen=True)
class PartialAllocation:
    """Intermediate state: bundles of size <= k plus the pool of loose items."""

    bundles: tuple[frozenset[int], ...]
    pool: frozenset[int]

    def replace_bundle(self, agent: int, bundle: frozenset[int]) -> "PartialAllocation":
        new = list(self.bundles)
        new[agent] = bundle
        return PartialAllocation(bundles=tuple(new), pool=self.pool)


def allocation_from_lists(lists) -> Allocation:
    return tuple(frozenset(int(g) for g in b) for b in lists)


def allocation_to_lists(alloc: Allocation) -> list[list[int]]:
    return [sorted(b) for b in alloc]


def parse_instance(text: str) -> Instance:
    """Parse the instance file format and return a validated Instance.

    Raises InstanceError with row/column location on malformed documents,
    arity violations (m != k*n), negative values, n < 2 or k < 1.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed document: {exc}") from exc
    if not isinstance(doc, dict):
        raise InstanceError("malformed document: expected a JSON object")
    for key in ("n", "k", "values"):
        if key not in doc:
            raise InstanceError(f"malformed document: missing key {key!r}")
    n, k, rows = doc["n"], doc["k"], doc["values"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise InstanceError("malformed document: n must be an integer")
    if not isinstance(k, int) or isinstance(k, bool):
        raise InstanceError("malformed document: k must be an integer")
    if n < 2:
        raise InstanceError(f"need at least 2 agents, got n={n}")
    if k < 1:
        raise InstanceError(f"need bundle size at least 1, got k={k}")
    if not isinstance(rows, list) or len(rows) != n:
        raise InstanceError(f"expected {n} valuation rows")
    m = n * k
    values = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != m:
            got = len(row) if isinstance(row, list) else "non-list"
            raise InstanceError(f"expected m=k*n={m} items, got {got}", row=i)
        parsed_row = []
        for g, literal in enumerate(row):
            try:
                v = parse_rational(literal)
            except ValueError as exc:
                raise InstanceError(str(exc), row=i, col=g) from exc
            if v < 0:
                raise InstanceError(f"negative value {format_rational(v)}", row=i, col=g)
            parsed_row.append(v)
        values.append(tuple(parsed_row))
    return Instance(n=n, k=k, values=tuple(values))


def instance_to_doc(inst: Instance) -> dict:
    return {
        "n": inst.n,
        "k": inst.k,
        "values": [
            [v.numerator if v.denominator == 1 else format_rational(v) for v in row]
            for row in inst.values
        ],
    }


def serialize_instance(inst: Instance) -> str:
    """Canonical JSON form; parse_instance(serialize_instance(x)) == x."""
    return json.dumps(instance_to_doc(inst))


def parse_allocation(text: str) -> Allocation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AllocationError(f"malformed document: {exc}") from exc
    if not isinstance(doc, dict) or "bundles" not in doc:
        raise AllocationError("malformed document: expected {\"bundles\": [[...], ...]}")
    bundles = doc["bundles"]
    if not isinstance(bundles, list):
        raise AllocationError("bundles must be a list of lists")
    for b in bundles:
        if not isinstance(b, list) or not all(
            isinstance(g, int) and not isinstance(g, bool) for g in b
        ):
            raise AllocationError("each bundle must be a list of item ids")
    return allocation_from_lists(bundles)


def serialize_allocation(alloc: Allocation) -> str:
    return json.dumps({"bundles": allocation_to_lists(alloc)})


def value_of(inst: Instance, agent: int, bundle) -> Fraction:
    """Exact value of a bundle for an agent; the empty bundle is worth 0."""
    if not 0 <= agent < inst.n:
        raise ValueError(f"unknown agent id {agent}")
    total = Fraction(0)
    row = inst.values[agent]
    for g in bundle:
        if not 0 <= g < inst.m:
            raise ValueError(f"unknown item id {g}")
        total += row[g]
    return total


def ranked_items(inst: Instance, agent: int) -> list[int]:
    """Item ids ordered by (value descending, id ascending) for one agent."""
    row = inst.values[agent]
    return sorted(inst.items, key=lambda g: (-row[g], g))


def top_items(inst: Instance, agent: int, count: int) -> frozenset[int]:
    """The agent's `count` most valuable items under the deterministic ranking."""
    return frozenset(ranked_items(inst, agent)[:count])


def common_top_n(inst: Instance) -> frozenset[int] | None:
    """The common set of the n most valuable items, or None.

    Requires every agent to separate strictly between her n-th and (n+1)-th
    values (otherwise the top-n set is ambiguous) and all agents' sets to
    coincide.
    """
    witness: frozenset[int] | None = None
    for i in inst.agents:
        values = sorted(inst.values[i], reverse=True)
        if inst.m > inst.n and values[inst.n - 1] == values[inst.n]:
            return None
        own = top_items(inst, i, inst.n)
        if witness is None:
            witness = own
        elif witness != own:
            return None
    return witness


def validate_allocation(inst: Instance, alloc) -> list[str]:
    """Return the list of violated allocation invariants; ok iff empty."""
    violations = []
    if len(alloc) != inst.n:
        violations.append(f"expected {inst.n} bundles, got {len(alloc)}")
    seen: dict[int, int] = {}
    for i, bundle in enumerate(alloc):
        if len(bundle) != inst.k:
            violations.append(f"bundle {i} has {len(bundle)} items, expected {inst.k}")
        for g in bundle:
            if not 0 <= g < inst.m:
                violations.append(f"item {g} is not a valid item id")
            elif g in seen:
                violations.append(f"item {g} duplicated across bundles {seen[g]} and {i}")
            else:
                seen[g] = i
    for g in inst.items:
        if g not in seen:
            violations.append(f"item {g} missing from allocation")
    return violations
