"""Allocation procedures: round-robin picking and envy-cycle elimination.

All algorithms are deterministic given (instance, script).  Item ties break
toward the lowest item id everywhere.  Specific discretionary runs are
reproduced via a SelectionScript: an ordered list of explicit choices (which unenvied agent
to select, which envy cycle to rotate, which tied item to drop in a swap)
keyed by a global decision counter that advances at every choice point.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .core import Allocation, Instance, PartialAllocation, top_items, value_of


class ScriptError(ValueError):
    """A scripted choice was illegal at its step, or the script did not fit the run."""


class InvariantViolation(AssertionError):
    """A debug-mode algorithm invariant failed."""


@dataclass(frozen=True)
class PickSequence:
    """k rounds, each a full permutation of the agents."""

    rounds: tuple[tuple[int, ...], ...]

    @classmethod
    def constant(cls, order, k: int) -> "PickSequence":
        return cls(tuple(tuple(order) for _ in range(k)))

    def validate(self, inst: Instance) -> None:
        if len(self.rounds) != inst.k:
            raise ValueError(f"expected {inst.k} rounds, got {len(self.rounds)}")
        for r, rnd in enumerate(self.rounds):
            if sorted(rnd) != list(inst.agents):
                raise ValueError(f"round {r} is not a permutation of the agents: {rnd}")

    @classmethod
    def from_doc(cls, doc) -> "PickSequence":
        return cls(tuple(tuple(int(a) for a in rnd) for rnd in doc))

    def to_doc(self) -> list[list[int]]:
        return [list(rnd) for rnd in self.rounds]


@dataclass(frozen=True)
class SelectionScript:
    """Explicit choices, keyed by decision step.

    choice kinds: {"agent": id} to select an unenvied agent, {"cycle": [ids]}
    to pick the envy cycle to rotate, {"drop_item": id} to pick the dropped
    item among an agent's minimum-value items.
    """

    entries: tuple[tuple[int, str, object], ...]  # (step, kind, value)

    @classmethod
    def from_doc(cls, doc) -> "SelectionScript":
        entries = []
        for row in doc:
            step = int(row["step"])
            choice = row["choice"]
            if len(choice) != 1:
                raise ScriptError(f"step {step}: choice must have exactly one key")
            kind, value = next(iter(choice.items()))
            if kind == "agent":
                entries.append((step, "agent", int(value)))
            elif kind == "cycle":
                entries.append((step, "cycle", tuple(int(a) for a in value)))
            elif kind == "drop_item":
                entries.append((step, "drop_item", int(value)))
            else:
                raise ScriptError(f"step {step}: unknown choice kind {kind!r}")
        return cls(tuple(entries))

    def to_doc(self) -> list[dict]:
        out = []
        for step, kind, value in self.entries:
            v = list(value) if kind == "cycle" else value
            out.append({"step": step, "choice": {kind: v}})
        return out

    @classmethod
    def of(cls, *choices) -> "SelectionScript":
        """Build from (step, kind, value) triples."""
        return cls(tuple(choices))


class _Decisions:
    """Cursor over the script; the step counter advances at every choice point."""

    def __init__(self, script: SelectionScript | None):
        self.remaining: dict[int, tuple[str, object]] = {}
        if script is not None:
            for step, kind, value in script.entries:
                if step in self.remaining:
                    raise ScriptError(f"duplicate script entry for step {step}")
                self.remaining[step] = (kind, value)
        self.step = 0

    def take(self, kind: str):
        entry = self.remaining.pop(self.step, None)
        step = self.step
        self.step += 1
        if entry is None:
            return None
        got_kind, value = entry
        if got_kind != kind:
            raise ScriptError(
                f"step {step}: script provides a {got_kind} choice but a {kind} "
                f"decision occurs here"
            )
        return value

    def finish(self) -> None:
        if self.remaining:
            steps = sorted(self.remaining)
            raise ScriptError(f"script entries for steps {steps} were never reached")


@dataclass(frozen=True)
class PrivilegedState:
    """Snapshot of the swap algorithm's state, checkable against its invariants:
    privileged agents hold exactly k items, nobody outside envies anyone inside,
    and the envy graph restricted to the privileged set is acyclic."""

    privileged: frozenset[int]
    pool: frozenset[int]
    bundles: tuple[frozenset[int], ...]

    def check(self, inst: Instance) -> None:
        for p in self.privileged:
            if len(self.bundles[p]) != inst.k:
                raise InvariantViolation(f"privileged agent {p} does not hold k items")
        outside = [i for i in inst.agents if i not in self.privileged]
        for i in outside:
            own = value_of(inst, i, self.bundles[i])
            for j in sorted(self.privileged):
                if own < value_of(inst, i, self.bundles[j]):
                    raise InvariantViolation(
                        f"envy from non-privileged {i} to privileged {j}"
                    )
        _topological(
            sorted(self.privileged),
            _envy_edges(inst, self.bundles, sorted(self.privileged)),
        )


@dataclass(frozen=True)
class TraceEvent:
    index: int
    op: str  # get | swap | pass | rotate
    agent: int | None
    item: int | None
    dropped: int | None
    cycle: tuple[int, ...] | None
    edges: tuple[tuple[int, int], ...]  # envy edges of the graph consulted, pre-op
    privileged: tuple[int, ...]  # P before the op
    bundles: tuple[tuple[int, ...], ...]  # bundles after the op
    state: str  # hash of (bundles, pool, P) after the op


@dataclass(frozen=True)
class AlgorithmRun:
    allocation: Allocation
    trace: tuple[TraceEvent, ...]

    @property
    def counts(self) -> dict[str, int]:
        return operation_counter(self.trace)


def operation_counter(trace) -> dict[str, int]:
    """Counts of get/swap/pass (and rotate) operations in a run trace."""
    counts = {"get": 0, "swap": 0, "pass": 0, "rotate": 0}
    for event in trace:
        counts[event.op] += 1
    counts["iterations"] = counts["get"] + counts["swap"] + counts["pass"]
    return counts


def trace_json_lines(run: AlgorithmRun) -> list[str]:
    """One JSON line per trace event, for fixture matching."""
    lines = []
    for e in run.trace:
        lines.append(
            json.dumps(
                {
                    "step": e.index,
                    "op": e.op,
                    "agent": e.agent,
                    "item": e.item,
                    "dropped": e.dropped,
                    "cycle": list(e.cycle) if e.cycle else None,
                    "P": list(e.privileged),
                    "state": e.state,
                }
            )
        )
    return lines


def _state_hash(bundles, pool, privileged) -> str:
    doc = {
        "bundles": [sorted(b) for b in bundles],
        "pool": sorted(pool),
        "P": sorted(privileged),
    }
    return hashlib.sha256(json.dumps(doc).encode()).hexdigest()[:16]


def _favourite(inst: Instance, agent: int, pool) -> int:
    """Most valuable available item; ties to the lowest item id."""
    row = inst.values[agent]
    return min(pool, key=lambda g: (-row[g], g))


def _check_order(order, n: int) -> tuple[int, ...]:
    order = tuple(int(a) for a in order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"order must be a permutation of the {n} agents: {order}")
    return order


def generalized_round_robin(inst: Instance, seq: PickSequence) -> Allocation:
    """Round r follows seq.rounds[r]; every agent picks her favourite available item."""
    seq.validate(inst)
    pool = set(inst.items)
    bundles: list[set[int]] = [set() for _ in inst.agents]
    for rnd in seq.rounds:
        for agent in rnd:
            g = _favourite(inst, agent, pool)
            bundles[agent].add(g)
            pool.discard(g)
    return tuple(frozenset(b) for b in bundles)


def round_robin(inst: Instance, order) -> Allocation:
    """k rounds in the same agent order."""
    order = _check_order(order, inst.n)
    return generalized_round_robin(inst, PickSequence.constant(order, inst.k))


def balanced_round_robin_k2(inst: Instance, order) -> Allocation:
    """One round in the given order, one more in reverse; EFFX for k=2."""
    if inst.k != 2:
        raise ValueError(f"balanced round-robin needs k=2, got k={inst.k}")
    order = _check_order(order, inst.n)
    seq = PickSequence((order, tuple(reversed(order))))
    return generalized_round_robin(inst, seq)


# ---------------------------------------------------------------------------
# envy-cycle machinery


def _envy_edges(inst: Instance, bundles, verts) -> set[tuple[int, int]]:
    values = {v: value_of(inst, v, bundles[v]) for v in verts}
    return {
        (i, j)
        for i in verts
        for j in verts
        if i != j and values[i] < value_of(inst, i, bundles[j])
    }


def _sources(verts, edges) -> list[int]:
    envied = {j for (_, j) in edges}
    return sorted(v for v in verts if v not in envied)


def _find_cycle(verts, edges) -> list[int] | None:
    """First directed cycle by DFS from the lowest-id vertex; None if acyclic."""
    adj = {v: sorted(j for (i, j) in edges if i == v) for v in verts}
    done: set[int] = set()
    for start in sorted(verts):
        if start in done:
            continue
        stack = [(start, iter(adj[start]))]
        on_path = [start]
        on_path_set = {start}
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt in on_path_set:
                    return on_path[on_path.index(nxt) :]
                if nxt in done:
                    continue
                stack.append((nxt, iter(adj[nxt])))
                on_path.append(nxt)
                on_path_set.add(nxt)
                advanced = True
                break
            if not advanced:
                stack.pop()
                done.add(on_path.pop())
                on_path_set.discard(node)
    return None


def _validate_cycle(choice, verts, edges) -> tuple[int, ...]:
    cycle = tuple(int(a) for a in choice)
    if len(cycle) < 2 or len(set(cycle)) != len(cycle):
        raise ScriptError(f"scripted cycle {cycle} is not a simple cycle")
    for idx, v in enumerate(cycle):
        if v not in verts:
            raise ScriptError(f"scripted cycle {cycle} leaves the current vertex set")
        nxt = cycle[(idx + 1) % len(cycle)]
        if (v, nxt) not in edges:
            raise ScriptError(f"scripted cycle {cycle} is missing envy edge ({v}, {nxt})")
    return cycle


def _rotate(bundles, cycle) -> None:
    """Allocate the bundles backwards along the cycle; every member gains."""
    first = bundles[cycle[0]]
    for idx in range(len(cycle) - 1):
        bundles[cycle[idx]] = bundles[cycle[idx + 1]]
    bundles[cycle[-1]] = first


def eliminate_envy_cycles(inst: Instance, partial: PartialAllocation, vertices) -> PartialAllocation:
    """Rotate envy cycles among the given agents until a source vertex exists.

    Returns the input unchanged when an unenvied agent already exists.
    """
    verts = sorted(set(int(v) for v in vertices))
    for v in verts:
        if not 0 <= v < inst.n:
            raise ValueError(f"unknown agent id {v}")
    bundles = list(partial.bundles)
    guard = 0
    while True:
        edges = _envy_edges(inst, bundles, verts)
        if _sources(verts, edges):
            break
        cycle = _find_cycle(verts, edges)
        if cycle is None:  # no source and no cycle is impossible in a finite digraph
            raise RuntimeError("no source and no cycle in the envy graph")
        _rotate(bundles, cycle)
        guard += 1
        if guard > 10_000:
            raise RuntimeError("envy cycle elimination failed to terminate")
    return PartialAllocation(bundles=tuple(bundles), pool=partial.pool)


def _drop_candidate(inst: Instance, agent: int, bundle, decisions: _Decisions) -> int:
    """The item an agent surrenders in a swap: one of her minimum-value items.

    Tie-break: prefer dropping an item outside her own top-n set, then the
    highest item id.  A scripted drop_item may pick any minimum-value item.
    """
    row = inst.values[agent]
    low = min(row[g] for g in bundle)
    candidates = [g for g in bundle if row[g] == low]
    scripted = decisions.take("drop_item")
    if scripted is not None:
        if scripted not in candidates:
            raise ScriptError(
                f"drop_item {scripted} is not a minimum-value item of agent {agent}"
            )
        return scripted
    own_top = top_items(inst, agent, inst.n)
    outside = [g for g in candidates if g not in own_top]
    return max(outside if outside else candidates)


def _select_source(verts, edges, bundles, decisions: _Decisions) -> int:
    """Pick an unenvied agent: scripted choice wins, else smaller bundle, then id.

    A scripted choice may name any current source, which is how scripted
    reproductions override the smaller-bundle default.
    """
    srcs = _sources(verts, edges)
    scripted = decisions.take("agent")
    if scripted is not None:
        if scripted not in srcs:
            raise ScriptError(f"agent {scripted} is not an unenvied agent (sources: {srcs})")
        return scripted
    return min(srcs, key=lambda a: (len(bundles[a]), a))


def _ensure_source(inst, bundles, verts, decisions, trace, privileged) -> set[tuple[int, int]]:
    """Rotate envy cycles until the graph on verts has a source; returns its edges."""
    guard = 0
    while True:
        edges = _envy_edges(inst, bundles, verts)
        if _sources(verts, edges):
            return edges
        cycle_edges = edges
        scripted = decisions.take("cycle")
        if scripted is not None:
            cycle = _validate_cycle(scripted, set(verts), cycle_edges)
        else:
            cycle = _find_cycle(verts, cycle_edges)
            if cycle is None:
                raise RuntimeError("no source and no cycle in the envy graph")
        _rotate(bundles, cycle)
        trace.append(
            TraceEvent(
                index=len(trace),
                op="rotate",
                agent=None,
                item=None,
                dropped=None,
                cycle=tuple(cycle),
                edges=tuple(sorted(cycle_edges)),
                privileged=tuple(sorted(privileged)),
                bundles=tuple(tuple(sorted(b)) for b in bundles),
                state="",
            )
        )
        guard += 1
        if guard > 10_000:
            raise RuntimeError("envy cycle elimination failed to terminate")


def run_ece_k(inst: Instance, script: SelectionScript | None = None) -> AlgorithmRun:
    """Envy cycle elimination for bundles of size k (agents retire at k items).

    Each iteration: restore a source among the active agents by rotating envy
    cycles if needed, select an unenvied active agent (ties favour smaller
    bundles; a script may name any source), and give her her favourite item
    from the pool.  Agents holding k items become inactive.
    """
    n, k = inst.n, inst.k
    bundles: list[frozenset[int]] = [frozenset() for _ in inst.agents]
    pool = set(inst.items)
    active = set(inst.agents)
    decisions = _Decisions(script)
    trace: list[TraceEvent] = []
    while pool:
        edges = _ensure_source(inst, bundles, sorted(active), decisions, trace, ())
        j = _select_source(sorted(active), edges, bundles, decisions)
        g = _favourite(inst, j, pool)
        bundles[j] = bundles[j] | {g}
        pool.discard(g)
        if len(bundles[j]) == k:
            active.discard(j)
        trace.append(
            TraceEvent(
                index=len(trace),
                op="get",
                agent=j,
                item=g,
                dropped=None,
                cycle=None,
                edges=tuple(sorted(edges)),
                privileged=(),
                bundles=tuple(tuple(sorted(b)) for b in bundles),
                state=_state_hash(bundles, pool, ()),
            )
        )
    decisions.finish()
    return AlgorithmRun(allocation=tuple(bundles), trace=tuple(trace))


def ece_k(inst: Instance, script: SelectionScript | None = None) -> Allocation:
    return run_ece_k(inst, script).allocation


def _topological(verts, edges) -> list[int]:
    """Topological order of the privileged graph; ties to the lowest agent id."""
    verts = sorted(verts)
    indeg = {v: 0 for v in verts}
    for (_, j) in edges:
        indeg[j] += 1
    order = []
    ready = sorted(v for v in verts if indeg[v] == 0)
    while ready:
        v = ready.pop(0)
        order.append(v)
        for (a, b) in sorted(edges):
            if a == v:
                indeg[b] -= 1
                if indeg[b] == 0:
                    ready.append(b)
        ready.sort()
    if len(order) != len(verts):
        raise InvariantViolation("the privileged envy graph has a cycle")
    return order


def _reachable(start, edges) -> set[int]:
    seen = {start}
    frontier = [start]
    while frontier:
        v = frontier.pop()
        for (a, b) in edges:
            if a == v and b not in seen:
                seen.add(b)
                frontier.append(b)
    return seen


def _check_swap_invariants(inst, bundles, pool, privileged, start_values, gets_done, witness):
    PrivilegedState(
        privileged=frozenset(privileged),
        pool=frozenset(pool),
        bundles=tuple(bundles),
    ).check(inst)
    for i in inst.agents:
        if value_of(inst, i, bundles[i]) < start_values[i]:
            raise InvariantViolation(f"agent {i} lost value within an iteration")
    if gets_done >= inst.n:
        for i in inst.agents:
            if bundles[i]:
                ranked = sorted(inst.values[i], reverse=True)
                if value_of(inst, i, bundles[i]) < ranked[inst.n - 1]:
                    raise InvariantViolation(f"agent {i} holds less than her n-th best value")
    if witness is not None:
        for i, b in enumerate(bundles):
            if len(b & witness) > 1:
                raise InvariantViolation(f"bundle {i} holds two common top-n items")


def run_ece_swaps(
    inst: Instance,
    script: SelectionScript | None = None,
    debug: bool = False,
) -> AlgorithmRun:
    """Envy cycle elimination with item swaps and privileged agents.

    Per iteration the privileged agents, scanned in topological order of their
    envy graph, get the first chance to swap their least-valued item for the
    pool maximum; a successful swapper leaves the privileged set together with
    every privileged agent reachable from her.  Otherwise a locally unenvied
    agent among the rest gets an item (bundle not full), swaps (profitable), or
    passes and becomes privileged.
    """
    from .core import common_top_n

    n, k = inst.n, inst.k
    bundles: list[frozenset[int]] = [frozenset() for _ in inst.agents]
    pool = set(inst.items)
    privileged: set[int] = set()
    decisions = _Decisions(script)
    trace: list[TraceEvent] = []
    gets_done = 0
    witness = common_top_n(inst) if debug else None
    cap = 1000 + 100 * n * inst.m * (inst.m + 1)
    iterations = 0
    while pool:
        iterations += 1
        if iterations > cap:
            raise RuntimeError("ece_swaps exceeded its iteration cap")
        start_values = [value_of(inst, i, bundles[i]) for i in inst.agents]
        swapped = False
        if privileged:
            p_verts = sorted(privileged)
            p_edges = _envy_edges(inst, bundles, p_verts)
            for p in _topological(p_verts, p_edges):
                row = inst.values[p]
                low = min(row[g] for g in bundles[p])
                g_star = _favourite(inst, p, pool)
                if low < row[g_star]:
                    g = _drop_candidate(inst, p, bundles[p], decisions)
                    bundles[p] = (bundles[p] - {g}) | {g_star}
                    pool.discard(g_star)
                    pool.add(g)
                    updated = _envy_edges(inst, bundles, p_verts)
                    privileged -= _reachable(p, updated)
                    swapped = True
                    trace.append(
                        TraceEvent(
                            index=len(trace),
                            op="swap",
                            agent=p,
                            item=g_star,
                            dropped=g,
                            cycle=None,
                            edges=tuple(sorted(p_edges)),
                            privileged=tuple(p_verts),
                            bundles=tuple(tuple(sorted(b)) for b in bundles),
                            state=_state_hash(bundles, pool, privileged),
                        )
                    )
                    break
        if not swapped:
            rest = sorted(set(inst.agents) - privileged)
            edges = _ensure_source(inst, bundles, rest, decisions, trace, privileged)
            j = _select_source(rest, edges, bundles, decisions)
            g_star = _favourite(inst, j, pool)
            if len(bundles[j]) < k:
                bundles[j] = bundles[j] | {g_star}
                pool.discard(g_star)
                gets_done += 1
                op, item, dropped = "get", g_star, None
            else:
                row = inst.values[j]
                low = min(row[g] for g in bundles[j])
                if low < row[g_star]:
                    g = _drop_candidate(inst, j, bundles[j], decisions)
                    bundles[j] = (bundles[j] - {g}) | {g_star}
                    pool.discard(g_star)
                    pool.add(g)
                    op, item, dropped = "swap", g_star, g
                else:
                    privileged.add(j)
                    op, item, dropped = "pass", None, None
            trace.append(
                TraceEvent(
                    index=len(trace),
                    op=op,
                    agent=j,
                    item=item,
                    dropped=dropped,
                    cycle=None,
                    edges=tuple(sorted(edges)),
                    privileged=tuple(sorted(privileged)),
                    bundles=tuple(tuple(sorted(b)) for b in bundles),
                    state=_state_hash(bundles, pool, privileged),
                )
            )
        if debug:
            _check_swap_invariants(
                inst, bundles, pool, privileged, start_values, gets_done, witness
            )
    decisions.finish()
    return AlgorithmRun(allocation=tuple(bundles), trace=tuple(trace))


def ece_swaps(
    inst: Instance,
    script: SelectionScript | None = None,
    debug: bool = False,
) -> Allocation:
    return run_ece_swaps(inst, script, debug).allocation
