"""Bundled reference scenarios with machine-checkable expected outcomes.

Each fixture packages a concrete instance (symbolic constants instantiated
with declared values, constraints asserted at build time), any distinguished
allocations, an optional selection script, and a list of expected facts that
exactly one library operation can check.  ``check_fixture`` re-derives every
fact; the CLI ``reproduce`` command is a thin wrapper around it.

The default instantiations are also written out as a versioned JSON corpus
(instance file + expected-facts file per fixture).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .core import (
    Allocation,
    Instance,
    allocation_from_lists,
    allocation_to_lists,
    format_rational,
    instance_to_doc,
    make_instance,
    parse_rational,
    value_of,
)
from . import audit as _audit
from . import algorithms as _alg
from . import generators as _gen
from . import solvers as _sol

F = Fraction

CORPUS_VERSION = "v1"


class FixtureError(ValueError):
    """A fixture was instantiated with constants outside their valid range."""


@dataclass(frozen=True)
class Fact:
    kind: str
    label: str
    args: dict


@dataclass(frozen=True)
class Fixture:
    name: str
    constants: dict
    instance: Instance
    allocations: dict[str, Allocation]
    script: _alg.SelectionScript | None
    facts: tuple[Fact, ...]


@dataclass(frozen=True)
class FactResult:
    label: str
    passed: bool
    detail: str


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise FixtureError(message)


def _rs(value: Fraction) -> str:
    return format_rational(value)


# ---------------------------------------------------------------------------
# builders; constants default to the instantiations the acceptance suite pins


def build_ex1(C=F(10), eps=F(1, 100)) -> Fixture:
    """Identical values (2C, 1+2e, 1, e): flip-fair up to one flip, yet not EF1."""
    _require(C > 1, "ex1 needs C > 1")
    _require(0 < eps < F(1, 2), "ex1 needs 0 < eps < 1/2")
    row = [2 * C, 1 + 2 * eps, 1, eps]
    inst = make_instance(2, 2, [row, row])
    shaded = allocation_from_lists([[0, 1], [2, 3]])
    facts = (
        Fact("alloc_gamma", "shaded allocation has EFF1 gamma = 1",
             {"alloc": "shaded", "notion": "eff1", "equals": "1"}),
        Fact("alloc_removal", "shaded allocation fails removal-based EF1",
             {"alloc": "shaded", "notion": "ef1", "equals": False}),
        Fact("pair_removal", "agent 1 vs 0 fails removal-based EF1",
             {"alloc": "shaded", "notion": "ef1", "i": 1, "j": 0, "equals": False}),
    )
    return Fixture("ex1", {"C": _rs(C), "eps": _rs(eps)}, inst,
                   {"shaded": shaded}, None, facts)


def build_ex2(eps=F(1, 10)) -> Fixture:
    """Removal-EFX allocation that a single rational flip still leaves envied."""
    _require(0 < eps < 1, "ex2 needs 0 < eps < 1")
    inst = make_instance(2, 2, [[10, 6, 4, 1], [10 + eps, 10, 1, 2]])
    shaded = allocation_from_lists([[0, 3], [1, 2]])
    violating = (11 + eps) / 12
    facts = (
        Fact("alloc_removal", "shaded allocation satisfies removal-based EFX",
             {"alloc": "shaded", "notion": "efx", "equals": True}),
        Fact("alloc_gamma", "shaded allocation has EFFX gamma < 1",
             {"alloc": "shaded", "notion": "effx", "less_than": "1"}),
        Fact("pair_gamma", f"violating flip yields exactly {_rs(violating)}",
             {"alloc": "shaded", "notion": "effx", "i": 1, "j": 0,
              "equals": _rs(violating)}),
    )
    return Fixture("ex2", {"eps": _rs(eps)}, inst, {"shaded": shaded}, None, facts)


def build_ex3(C=F(10), eps=F(1, 100)) -> Fixture:
    """Identical values (2C, 1+e, 1, e): flip-fair for every flip, yet not EFX."""
    _require(C > 1, "ex3 needs C > 1")
    _require(0 < eps < F(1, 2), "ex3 needs 0 < eps < 1/2")
    row = [2 * C, 1 + eps, 1, eps]
    inst = make_instance(2, 2, [row, row])
    shaded = allocation_from_lists([[0, 3], [1, 2]])
    swapped = allocation_from_lists([[1, 2], [0, 3]])
    facts = (
        Fact("alloc_gamma", "shaded allocation has EFFX gamma = 1",
             {"alloc": "shaded", "notion": "effx", "equals": "1"}),
        Fact("alloc_removal", "shaded allocation fails removal-based EFX",
             {"alloc": "shaded", "notion": "efx", "equals": False}),
        Fact("exists", "exactly two EFFX allocations: shaded and its agent swap",
             {"notion": "effx", "gamma": "1",
              "exhaustive_equals": [allocation_to_lists(shaded),
                                    allocation_to_lists(swapped)]}),
    )
    return Fixture("ex3", {"C": _rs(C), "eps": _rs(eps)}, inst,
                   {"shaded": shaded, "swapped": swapped}, None, facts)


def build_genrr(C=F(100), eps=F(1, 100)) -> Fixture:
    """Identical values (3C, 1+e, 1, 1-e, e, 0): every picking sequence fails EFFX."""
    _require(C > 1, "genrr needs C > 1")
    _require(0 < eps < F(1, 2), "genrr needs 0 < eps < 1/2")
    row = [3 * C, 1 + eps, 1, 1 - eps, eps, 0]
    inst = make_instance(2, 3, [row, row])
    witness = allocation_from_lists([[0, 4, 5], [1, 2, 3]])
    bound = F(11, 10) / C
    facts = (
        Fact("round_robin", "same-order picking yields the alternating split",
             {"order": [0, 1], "equals": [[0, 2, 4], [1, 3, 5]]}),
        Fact("genrr_case", "sequence (01)(01)(10) yields its predicted split",
             {"rounds": [[0, 1], [0, 1], [1, 0]], "equals": [[0, 2, 5], [1, 3, 4]]}),
        Fact("genrr_case", "sequence (01)(10)(01) yields its predicted split",
             {"rounds": [[0, 1], [1, 0], [0, 1]], "equals": [[0, 3, 4], [1, 2, 5]]}),
        Fact("genrr_all_sequences_below",
             f"all 8 picking sequences give EFFX gamma < {_rs(bound)}",
             {"notion": "effx", "bound": _rs(bound)}),
        Fact("exists", "an EFFX allocation exists and the search finds it",
             {"notion": "effx", "gamma": "1",
              "first_equals": allocation_to_lists(witness)}),
    )
    return Fixture("genrr", {"C": _rs(C), "eps": _rs(eps)}, inst,
                   {"witness": witness}, None, facts)


def _ece_bad_script(k: int) -> _alg.SelectionScript:
    # agent 0 first, then 1, then 2 repeatedly, the 1<->2 cycle rotation,
    # then agent 1 takes item k+1
    entries = [(0, "agent", 0), (1, "agent", 1)]
    step = 2
    for _ in range(k - 1):
        entries.append((step, "agent", 2))
        step += 1
    entries.append((step, "cycle", (1, 2)))
    entries.append((step + 1, "agent", 1))
    return _alg.SelectionScript.of(*entries)


def build_ece_bad(k=3, C=F(100), eps=F(1, 100)) -> Fixture:
    """Cycle elimination without swaps can be arbitrarily unfair to one agent."""
    _require(k >= 3, "ece_bad needs k >= 3")
    _require(C > 1, "ece_bad needs C > 1")
    _require(0 < eps < F(1, k - 1), "ece_bad needs 0 < eps < 1/(k-1)")
    m = 3 * k
    unit = F(1, k - 1)
    v1 = [F(1)] + [eps] * (m - 1)
    v2 = [C, F(1), unit + eps] + [unit] * (k - 2) + [F(1)] * (2 * k - 1)
    v3 = [F(1), F(1)] + [unit] * (k - 2) + [unit - eps, eps] + [F(0)] * (2 * k - 2)
    inst = make_instance(3, k, [v1, v2, v3])
    # worst flip: drop the (1/(k-1) + eps)-item for a late unit item
    gamma = (3 - unit) / (C + (k - 2) + unit + eps)
    facts = (
        Fact("ece_final_bundle", "agent 1 ends with items 2..k+1",
             {"agent": 1, "equals": list(range(2, k + 2))}),
        Fact("ece_pair_gamma",
             f"agent 1's EFFX gamma toward the C-side bundle is {_rs(gamma)} < 3/C",
             {"notion": "effx", "i": 1, "j": 0, "equals": _rs(gamma),
              "below": _rs(3 / C)}),
        Fact("ece_rotation_graph",
             "the run rotates the 1<->2 cycle with the expected envy graphs",
             {"rotation": 0,
              "pre_edges": [[1, 0], [1, 2], [2, 0], [2, 1]],
              "post_edges": [[1, 0]],
              "cycle": [1, 2]}),
    )
    return Fixture("ece_bad", {"k": k, "C": _rs(C), "eps": _rs(eps)}, inst,
                   {}, _ece_bad_script(k), facts)


def build_ece_23(eps=F(1, 1000)) -> Fixture:
    """Ordered identical values where cycle elimination lands near 2/3-EFFX."""
    _require(0 < eps < F(1, 3), "ece_23 needs 0 < eps < 1/3")
    row = [1 + 2 * eps, 1 + eps, 1, 1 - 2 * eps, 1 - 3 * eps, 0]
    inst = make_instance(2, 3, [row, row])
    expected = allocation_from_lists([[0, 3, 4], [1, 2, 5]])
    gamma = (2 + 2 * eps) / (3 - 4 * eps)
    gamma_args = {"notion": "effx", "equals": _rs(gamma)}
    if gamma <= F(2, 3) + F(1, 100):  # the window closes in on 2/3 as eps shrinks
        gamma_args["between"] = ["2/3", _rs(F(2, 3) + F(1, 100))]
    facts = (
        Fact("ece_equals", "the default run produces the near-2/3 split",
             {"equals": allocation_to_lists(expected)}),
        Fact("ece_alloc_gamma", f"the output has EFFX gamma = {_rs(gamma)}",
             gamma_args),
    )
    return Fixture("ece_23", {"eps": _rs(eps)}, inst, {"expected": expected}, None, facts)


def build_mnw_tight(k=3, c=F(2)) -> Fixture:
    """Nash-welfare optimum that is exactly (k+1)/(2k-1)-fair up to one flip."""
    _require(k >= 2, "mnw_tight needs k >= 2")
    _require(c > 0, "mnw_tight needs c > 0")
    inst = make_instance(2, k, [[c] * k + [F(0)] * k, [F(2)] * k + [F(1)] * k])
    optimum = allocation_from_lists([list(range(k)), list(range(k, 2 * k))])
    gamma = F(k + 1, 2 * k - 1)
    facts = (
        Fact("mnw_unique", "the Nash-welfare optimum is unique: first half / second half",
             {"equals": allocation_to_lists(optimum)}),
        Fact("alloc_gamma", f"the optimum has EFF1 gamma = {_rs(gamma)}",
             {"alloc": "optimum", "notion": "eff1", "equals": _rs(gamma)}),
        Fact("pair_gamma", f"agent 1 vs 0 has EFF1 gamma = {_rs(gamma)}",
             {"alloc": "optimum", "notion": "eff1", "i": 1, "j": 0,
              "equals": _rs(gamma)}),
    )
    return Fixture("mnw_tight", {"k": k, "c": _rs(c)}, inst,
                   {"optimum": optimum}, None, facts)


def mnw_tight_direct(k: int, c=F(2)) -> dict:
    """Closed-form check for large k: the Nash product over the number z of
    first-half items kept by agent 0 is z*c*(2(k-z)+z), uniquely maximal at z=k."""
    products = [(z, z * c * (2 * (k - z) + z)) for z in range(k + 1)]
    best = max(p for _, p in products)
    unique = [p for _, p in products].count(best) == 1 and products[k][1] == best
    inst = make_instance(2, k, [[c] * k + [F(0)] * k, [F(2)] * k + [F(1)] * k])
    optimum = allocation_from_lists([list(range(k)), list(range(k, 2 * k))])
    return {
        "products": products,
        "unique_argmax_at_k": unique,
        "eff1": _audit.pair_gamma_eff1(inst, optimum, 1, 0),
    }


def build_appD1(n=3, k=3, x=F(0)) -> Fixture:
    """Four item types; welfare maximisation leaves one agent at 1/(k-1)-EFF1."""
    _require(n >= 3, "appD1 needs n >= 3")
    _require(k >= 2, "appD1 needs k >= 2")
    _require(0 <= x <= k, "appD1 needs 0 <= x <= k")
    m = n * k
    a = list(range(k))
    b = list(range(k, 2 * k))
    c_items = list(range(2 * k, 2 * k + n - 2))
    rows = []
    vi = [F(0)] * m
    for g in a:
        vi[g] = k - x
    for g in b:
        vi[g] = x
    rows.append(vi)
    vj = [F(0)] * m
    for g in a:
        vj[g] = F(1)
    for g in c_items:
        vj[g] = F(k * k, n - 2)
    rows.append(vj)
    for _ in range(n - 2):
        vl = [F(0)] * m
        for g in c_items:
            vl[g] = F(k * (k + 1), n - 2)
        rows.append(vl)
    inst = make_instance(n, k, rows)
    gamma = F(1, k - 1)
    facts = (
        Fact("sw_optima_bundle", "every welfare optimum gives agent 0 all type-a items",
             {"agent": 0, "equals": a}),
        Fact("sw_optima_pair_gamma",
             f"agent 1's EFF1 gamma toward agent 0 is {_rs(gamma)} in every optimum",
             {"notion": "eff1", "i": 1, "j": 0, "equals": _rs(gamma)}),
    )
    return Fixture("appD1", {"n": n, "k": k, "x": _rs(x)}, inst, {}, None, facts)


def build_appD2() -> Fixture:
    """Ordered 3x9 matrix whose unique leximin outcome fails EFFX at 32/33."""
    inst = make_instance(
        3,
        3,
        [
            [50, 17, 16, 14, 2, 1, 0, 0, 0],
            [46, 17, 16, 15, 3, 3, 0, 0, 0],
            [33, 17, 15, 15, 11, 4, 3, 1, 1],
        ],
    )
    leximin_alloc = allocation_from_lists([[0, 7, 8], [2, 3, 5], [1, 4, 6]])
    witness = allocation_from_lists([[0, 7, 8], [2, 3, 6], [1, 4, 5]])
    facts = (
        Fact("leximin_unique", "the unique leximin optimum yields values (50, 34, 31)",
             {"equals": allocation_to_lists(leximin_alloc),
              "vector": ["31", "34", "50"]}),
        Fact("alloc_gamma", "the leximin allocation has EFFX gamma = 32/33",
             {"alloc": "leximin", "notion": "effx", "equals": "32/33"}),
        Fact("effx_witness_flip", "the worst flip trades item 6 for item 5",
             {"alloc": "leximin", "i": 2, "j": 1, "flip": [6, 5]}),
        Fact("exists", "an EFFX allocation exists, including the explicit witness",
             {"notion": "effx", "gamma": "1",
              "contains": allocation_to_lists(witness)}),
        Fact("classify", "all three agents rank the items identically",
             {"flag": "ordered", "equals": True}),
    )
    return Fixture("appD2", {}, inst,
                   {"leximin": leximin_alloc, "witness": witness}, None, facts)


_BUILDERS = {
    "ex1": build_ex1,
    "ex2": build_ex2,
    "ex3": build_ex3,
    "genrr": build_genrr,
    "ece_bad": build_ece_bad,
    "ece_23": build_ece_23,
    "mnw_tight": build_mnw_tight,
    "appD1": build_appD1,
    "appD2": build_appD2,
}


def fixture_names() -> list[str]:
    return list(_BUILDERS)


def load_fixture(name: str) -> Fixture:
    """The registered fixture at its default constants."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {fixture_names()}") from None
    return builder()


# ---------------------------------------------------------------------------
# fact checking


def _named_alloc(fx: Fixture, args) -> Allocation:
    return fx.allocations[args["alloc"]]


def _eq_report(got, expected) -> tuple[bool, str]:
    return got == expected, f"got {got}, expected {expected}"


def _check_pair_gamma(fx, args):
    fn = {
        "ef": _audit.pair_gamma_ef,
        "eff1": _audit.pair_gamma_eff1,
        "effx": _audit.pair_gamma_effx,
    }[args["notion"]]
    got = fn(fx.instance, _named_alloc(fx, args), args["i"], args["j"])
    return _eq_report(_rs(got), args["equals"])


def _check_pair_removal(fx, args):
    fn = {"ef1": _audit.pair_ef1_removal, "efx": _audit.pair_efx_removal}[args["notion"]]
    got = fn(fx.instance, _named_alloc(fx, args), args["i"], args["j"])
    return _eq_report(got, args["equals"])


def _check_alloc_gamma(fx, args):
    got = _audit.allocation_gamma(fx.instance, _named_alloc(fx, args), args["notion"])
    if "equals" in args:
        return _eq_report(_rs(got), args["equals"])
    if "less_than" in args:
        bound = parse_rational(args["less_than"])
        return got < bound, f"got {_rs(got)}, expected < {args['less_than']}"
    raise ValueError("alloc_gamma fact needs equals or less_than")


def _check_alloc_removal(fx, args):
    report = _audit.audit_allocation(fx.instance, _named_alloc(fx, args))
    got = getattr(report.allocation, args["notion"] + "_removal")
    return _eq_report(got, args["equals"])


def _check_round_robin(fx, args):
    got = _alg.round_robin(fx.instance, args["order"])
    return _eq_report(allocation_to_lists(got), args["equals"])


def _check_genrr_case(fx, args):
    seq = _alg.PickSequence.from_doc(args["rounds"])
    got = _alg.generalized_round_robin(fx.instance, seq)
    return _eq_report(allocation_to_lists(got), args["equals"])


def _check_genrr_all_sequences_below(fx, args):
    from itertools import product

    bound = parse_rational(args["bound"])
    orders = [tuple(p) for p in _permutations(fx.instance.n)]
    worst = None
    for rounds in product(orders, repeat=fx.instance.k):
        alloc = _alg.generalized_round_robin(fx.instance, _alg.PickSequence(rounds))
        gamma = _audit.allocation_gamma(fx.instance, alloc, args["notion"])
        worst = gamma if worst is None or gamma > worst else worst
        if gamma >= bound:
            return False, f"sequence {rounds} reaches gamma {_rs(gamma)} >= {args['bound']}"
    return True, f"worst sequence gamma {_rs(worst)} < {args['bound']}"


def _permutations(n):
    from itertools import permutations

    return permutations(range(n))


def _check_exists(fx, args):
    gamma = parse_rational(args["gamma"])
    if "first_equals" in args:
        got = _sol.effx_exists(fx.instance, args["notion"], gamma)
        expected = allocation_from_lists(args["first_equals"])
        return _eq_report(got, expected)
    hits = _sol.effx_exists(fx.instance, args["notion"], gamma, exhaustive=True)
    if "exhaustive_equals" in args:
        expected = [allocation_from_lists(a) for a in args["exhaustive_equals"]]
        return _eq_report(hits, expected)
    if "contains" in args:
        expected = allocation_from_lists(args["contains"])
        return expected in hits, f"{len(hits)} hits, witness present: {expected in hits}"
    raise ValueError("exists fact needs first_equals, exhaustive_equals or contains")


def _check_ece_final_bundle(fx, args):
    run = _alg.run_ece_k(fx.instance, fx.script)
    got = sorted(run.allocation[args["agent"]])
    return _eq_report(got, args["equals"])


def _check_ece_pair_gamma(fx, args):
    run = _alg.run_ece_k(fx.instance, fx.script)
    fn = {
        "ef": _audit.pair_gamma_ef,
        "eff1": _audit.pair_gamma_eff1,
        "effx": _audit.pair_gamma_effx,
    }[args["notion"]]
    got = fn(fx.instance, run.allocation, args["i"], args["j"])
    ok, detail = _eq_report(_rs(got), args["equals"])
    if ok and "below" in args:
        bound = parse_rational(args["below"])
        ok = got < bound
        detail += f"; below {args['below']}: {ok}"
    return ok, detail


def _check_ece_rotation_graph(fx, args):
    run = _alg.run_ece_k(fx.instance, fx.script)
    rotations = [ev for ev in run.trace if ev.op == "rotate"]
    idx = args["rotation"]
    if idx >= len(rotations):
        return False, f"run has only {len(rotations)} rotations"
    ev = rotations[idx]
    pre = sorted([list(e) for e in ev.edges])
    if pre != sorted(args["pre_edges"]):
        return False, f"pre-rotation edges {pre}"
    if list(ev.cycle) != args["cycle"]:
        return False, f"rotated cycle {ev.cycle}"
    after = run.trace[ev.index + 1]
    post = sorted([list(e) for e in after.edges])
    return post == sorted(args["post_edges"]), f"post-rotation edges {post}"


def _check_ece_equals(fx, args):
    got = _alg.ece_k(fx.instance, fx.script)
    return _eq_report(allocation_to_lists(got), args["equals"])


def _check_ece_alloc_gamma(fx, args):
    alloc = _alg.ece_k(fx.instance, fx.script)
    got = _audit.allocation_gamma(fx.instance, alloc, args["notion"])
    ok, detail = _eq_report(_rs(got), args["equals"])
    if ok and "between" in args:
        lo, hi = (parse_rational(s) for s in args["between"])
        ok = lo <= got <= hi
        detail += f"; within [{args['between'][0]}, {args['between'][1]}]: {ok}"
    return ok, detail


def _check_mnw_unique(fx, args):
    result = _sol.max_nash_welfare(fx.instance)
    if len(result.optima) != 1:
        return False, f"{len(result.optima)} optima"
    return _eq_report(allocation_to_lists(result.optima[0]), args["equals"])


def _check_leximin_unique(fx, args):
    result = _sol.leximin(fx.instance)
    if len(result.optima) != 1:
        return False, f"{len(result.optima)} optima"
    if result.summary["value_vector"] != args["vector"]:
        return False, f"vector {result.summary['value_vector']}"
    return _eq_report(allocation_to_lists(result.optima[0]), args["equals"])


def _check_sw_optima_bundle(fx, args):
    result = _sol.max_social_welfare(fx.instance)
    expected = frozenset(args["equals"])
    bad = [a for a in result.optima if a[args["agent"]] != expected]
    return not bad, f"{len(result.optima)} optima, {len(bad)} without the bundle"


def _check_sw_optima_pair_gamma(fx, args):
    result = _sol.max_social_welfare(fx.instance)
    fn = {
        "ef": _audit.pair_gamma_ef,
        "eff1": _audit.pair_gamma_eff1,
        "effx": _audit.pair_gamma_effx,
    }[args["notion"]]
    gammas = {
        _rs(fn(fx.instance, a, args["i"], args["j"])) for a in result.optima
    }
    return gammas == {args["equals"]}, f"gammas across optima: {sorted(gammas)}"


def _check_effx_witness_flip(fx, args):
    inst, alloc = fx.instance, _named_alloc(fx, args)
    i, j = args["i"], args["j"]
    vi = inst.values[i]
    own = value_of(inst, i, alloc[i])
    other = value_of(inst, i, alloc[j])
    best = None
    for a, b in _audit.rational_flips(inst, alloc, i, j):
        post_own = own - vi[a] + vi[b]
        post_other = other - vi[b] + vi[a]
        ratio = F(1) if post_other == 0 else post_own / post_other
        if best is None or ratio < best[0]:
            best = (ratio, [a, b])
    if best is None:
        return False, "no rational flips"
    return _eq_report(best[1], args["flip"])


def _check_classify(fx, args):
    label = _gen.classify(fx.instance)
    got = getattr(label, args["flag"])
    return _eq_report(got, args["equals"])


_CHECKERS = {
    "pair_gamma": _check_pair_gamma,
    "pair_removal": _check_pair_removal,
    "alloc_gamma": _check_alloc_gamma,
    "alloc_removal": _check_alloc_removal,
    "round_robin": _check_round_robin,
    "genrr_case": _check_genrr_case,
    "genrr_all_sequences_below": _check_genrr_all_sequences_below,
    "exists": _check_exists,
    "ece_final_bundle": _check_ece_final_bundle,
    "ece_pair_gamma": _check_ece_pair_gamma,
    "ece_rotation_graph": _check_ece_rotation_graph,
    "ece_equals": _check_ece_equals,
    "ece_alloc_gamma": _check_ece_alloc_gamma,
    "mnw_unique": _check_mnw_unique,
    "leximin_unique": _check_leximin_unique,
    "sw_optima_bundle": _check_sw_optima_bundle,
    "sw_optima_pair_gamma": _check_sw_optima_pair_gamma,
    "effx_witness_flip": _check_effx_witness_flip,
    "classify": _check_classify,
}


def check_fixture(fixture: Fixture) -> list[FactResult]:
    """Execute every expected fact; failures are results, not exceptions."""
    results = []
    for fact in fixture.facts:
        try:
            passed, detail = _CHECKERS[fact.kind](fixture, fact.args)
        except Exception as exc:  # a crash is a failed fact with the error attached
            passed, detail = False, f"error: {exc}"
        results.append(FactResult(label=fact.label, passed=passed, detail=detail))
    return results


def fixture_passes(fixture: Fixture) -> bool:
    return all(r.passed for r in check_fixture(fixture))


# ---------------------------------------------------------------------------
# corpus files


def fixture_to_docs(fx: Fixture) -> tuple[dict, dict]:
    instance_doc = instance_to_doc(fx.instance)
    facts_doc = {
        "name": fx.name,
        "constants": fx.constants,
        "allocations": {
            name: allocation_to_lists(alloc) for name, alloc in fx.allocations.items()
        },
        "script": fx.script.to_doc() if fx.script else None,
        "facts": [
            {"kind": f.kind, "label": f.label, "args": f.args} for f in fx.facts
        ],
    }
    return instance_doc, facts_doc


def corpus_dir() -> Path:
    return Path(__file__).parent / "corpus" / CORPUS_VERSION


def write_corpus(root: Path | None = None) -> list[Path]:
    """Write every registered fixture (default constants) as JSON files."""
    root = Path(root) if root is not None else corpus_dir()
    root.mkdir(parents=True, exist_ok=True)
    written = []
    for name in fixture_names():
        fx = load_fixture(name)
        instance_doc, facts_doc = fixture_to_docs(fx)
        inst_path = root / f"{name}.instance.json"
        facts_path = root / f"{name}.facts.json"
        inst_path.write_text(json.dumps(instance_doc, indent=1) + "\n")
        facts_path.write_text(json.dumps(facts_doc, indent=1) + "\n")
        written.extend([inst_path, facts_path])
    return written
