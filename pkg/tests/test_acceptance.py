"""Acceptance suite: one test per criterion, exact rational tolerances.

Fixture reproduction asserts the exact expected values (tolerance 0); the
property suites run >= 1000 seeded random instances each unless a smaller
count is stated.  Every test prints one PASS line on success.
"""

import random
from fractions import Fraction

from flipfair.core import (
    allocation_from_lists,
    make_instance,
    serialize_instance,
    validate_allocation,
    value_of,
)
from flipfair.audit import (
    allocation_gamma,
    audit_allocation,
    pair_gamma_ef,
    pair_gamma_eff1,
    pair_gamma_effx,
    pair_ef1_removal,
    pair_efx_removal,
)
from flipfair.algorithms import (
    balanced_round_robin_k2,
    ece_k,
    round_robin,
    run_ece_k,
    run_ece_swaps,
)
from flipfair.solvers import (
    effx_exists,
    is_pareto_optimal,
    leximin,
    max_nash_welfare,
    max_social_welfare,
)
from flipfair.generators import FamilySpec, classify, generate
from flipfair.fixtures import (
    build_ece_23,
    build_ex2,
    load_fixture,
    mnw_tight_direct,
)

from naive_audit import naive_load, naive_pair

F = Fraction


def ok(criterion: str, detail: str = ""):
    print(f"ACCEPTANCE {criterion}: PASS" + (f" ({detail})" if detail else ""))


def random_instance(rng, n, k, lo=0, hi=12, qmax=4):
    rows = [
        [F(rng.randint(lo, hi), rng.randint(1, qmax)) for _ in range(n * k)]
        for _ in range(n)
    ]
    return make_instance(n, k, rows)


def random_allocation(rng, inst):
    items = list(inst.items)
    rng.shuffle(items)
    return tuple(frozenset(items[i * inst.k : (i + 1) * inst.k]) for i in inst.agents)


# -- criterion 1: fixture reproduction (exact, tolerance 0) ------------------


def test_c1_ex1():
    fx = load_fixture("ex1")
    alloc = fx.allocations["shaded"]
    assert allocation_gamma(fx.instance, alloc, "eff1") == 1
    assert pair_ef1_removal(fx.instance, alloc, 1, 0) is False
    assert audit_allocation(fx.instance, alloc).allocation.ef1_removal is False
    ok("1.ex1", "EFF1 gamma = 1 and EF1 removal false")


def test_c1_ex2():
    fx = build_ex2(eps=F(1, 10))
    alloc = fx.allocations["shaded"]
    assert pair_efx_removal(fx.instance, alloc, 1, 0) is True
    assert audit_allocation(fx.instance, alloc).allocation.efx_removal is True
    gamma = allocation_gamma(fx.instance, alloc, "effx")
    assert gamma < 1
    assert gamma == F(111, 120)
    ok("1.ex2", "EFX removal true, violating flip = 111/120 exactly")


def test_c1_ex3():
    fx = load_fixture("ex3")
    alloc = fx.allocations["shaded"]
    assert allocation_gamma(fx.instance, alloc, "effx") == 1
    assert pair_efx_removal(fx.instance, alloc, 1, 0) is False
    hits = effx_exists(fx.instance, "effx", F(1), exhaustive=True)
    assert hits == [fx.allocations["shaded"], fx.allocations["swapped"]]
    ok("1.ex3", "EFFX gamma = 1, EFX removal false, exactly 2 EFFX allocations")


def test_c1_genrr():
    from itertools import product

    fx = load_fixture("genrr")
    bound = F(11, 1000)
    from flipfair.algorithms import PickSequence, generalized_round_robin

    for rounds in product(((0, 1), (1, 0)), repeat=3):
        alloc = generalized_round_robin(fx.instance, PickSequence(rounds))
        assert allocation_gamma(fx.instance, alloc, "effx") < bound
    found = effx_exists(fx.instance, "effx", F(1))
    assert found == allocation_from_lists([[0, 4, 5], [1, 2, 3]])
    ok("1.genrr", "all 8 sequences below 11/1000; EFFX witness found")


def test_c1_ece_bad():
    fx = load_fixture("ece_bad")
    run = run_ece_k(fx.instance, fx.script)
    assert run.allocation[1] == frozenset({2, 3, 4})
    gamma = pair_gamma_effx(fx.instance, run.allocation, 1, 0)
    assert gamma == F(5, 2) / (F(203, 2) + F(1, 100)) == F(250, 10151)
    assert gamma < F(3, 100)
    ok("1.ece_bad", "scripted run yields bundle {2,3,4} with gamma 250/10151 < 3/100")


def test_c1_ece_23():
    fx = build_ece_23(eps=F(1, 1000))
    alloc = ece_k(fx.instance)
    assert alloc == allocation_from_lists([[0, 3, 4], [1, 2, 5]])
    gamma = allocation_gamma(fx.instance, alloc, "effx")
    assert gamma == F(1001, 1498)
    assert F(2, 3) <= gamma <= F(2, 3) + F(1, 100)
    ok("1.ece_23", "EFFX gamma = 1001/1498 within [2/3, 2/3 + 1/100]")


def test_c1_mnw_tight():
    fx = load_fixture("mnw_tight")
    result = max_nash_welfare(fx.instance)
    assert result.optima == (fx.allocations["optimum"],)
    assert allocation_gamma(fx.instance, fx.allocations["optimum"], "eff1") == F(4, 5)

    # k = 4 via the direct argument over z: products z*c*(2(k-z)+z)
    direct = mnw_tight_direct(4, F(2))
    assert direct["unique_argmax_at_k"]
    assert direct["eff1"] == F(5, 7)
    ok("1.mnw_tight", "unique optimum, gamma 4/5 at k=3 and 5/7 at k=4")


def test_c1_appD1():
    fx = load_fixture("appD1")
    result = max_social_welfare(fx.instance)
    assert all(a[0] == frozenset({0, 1, 2}) for a in result.optima)
    for alloc in result.optima:
        assert pair_gamma_eff1(fx.instance, alloc, 1, 0) == F(1, 2)
    ok("1.appD1", "SW optimum hands agent 0 all type-a items; EFF1 gamma = 1/2")


def test_c1_appD2():
    fx = load_fixture("appD2")
    result = leximin(fx.instance)
    assert result.optima == (fx.allocations["leximin"],)
    assert result.summary["value_vector"] == ["31", "34", "50"]
    assert allocation_gamma(fx.instance, fx.allocations["leximin"], "effx") == F(32, 33)
    hits = effx_exists(fx.instance, "effx", F(1), exhaustive=True)
    assert fx.allocations["witness"] in hits
    assert classify(fx.instance).ordered
    ok("1.appD2", "unique leximin (50,34,31), EFFX 32/33, witness found, ordered")


# -- criterion 2: property suites (seeded, >= 1000 instances unless stated) --


def test_c2_round_robin_always_eff1():
    rng = random.Random(2001)
    for _ in range(1000):
        n, k = rng.randint(2, 4), rng.randint(1, 4)
        inst = random_instance(rng, n, k)
        order = list(inst.agents)
        rng.shuffle(order)
        alloc = round_robin(inst, order)
        assert validate_allocation(inst, alloc) == []
        assert allocation_gamma(inst, alloc, "eff1") == 1
    ok("2.round_robin", "EFF1 gamma = 1 on 1000 random instances")


def test_c2_balanced_round_robin_k2_always_effx():
    rng = random.Random(2002)
    for _ in range(1000):
        n = rng.randint(2, 4)
        inst = random_instance(rng, n, 2)
        order = list(inst.agents)
        rng.shuffle(order)
        alloc = balanced_round_robin_k2(inst, order)
        assert allocation_gamma(inst, alloc, "effx") == 1
    ok("2.brr2", "EFFX gamma = 1 on 1000 random k=2 instances")


def test_c2_warmup_ef_or_one_over_k():
    rng = random.Random(2003)
    for _ in range(1000):
        n, k = rng.randint(2, 4), rng.randint(1, 4)
        inst = random_instance(rng, n, k)
        alloc = random_allocation(rng, inst)
        for i in inst.agents:
            for j in inst.agents:
                if i == j:
                    continue
                envies = value_of(inst, i, alloc[i]) < value_of(inst, i, alloc[j])
                if envies:
                    assert pair_gamma_eff1(inst, alloc, i, j) >= F(1, k)
                if k == 2:
                    assert pair_gamma_eff1(inst, alloc, i, j) == 1
    ok("2.warmup", "every pair EF or 1/k-EFF1; k=2 pairs always EFF1")


def test_c2_gamma_ef_implies_gamma_effx():
    rng = random.Random(2004)
    for _ in range(1000):
        n, k = rng.randint(2, 4), rng.randint(1, 3)
        inst = random_instance(rng, n, k)
        alloc = random_allocation(rng, inst)
        for i in inst.agents:
            for j in inst.agents:
                if i != j:
                    assert pair_gamma_effx(inst, alloc, i, j) >= pair_gamma_ef(
                        inst, alloc, i, j
                    )
    ok("2.ef_implies_effx", "gamma-EF implies gamma-EFFX on 1000 random allocations")


def test_c2_ece_k_ordered_half_effx():
    rng = random.Random(2005)
    for _ in range(1000):
        spec = FamilySpec(
            family="ordered",
            n=rng.randint(2, 3),
            k=rng.randint(1, 4),
            seed=rng.randint(0, 10**9),
            granularity=rng.randint(1, 10),
        )
        inst = generate(spec)
        alloc = ece_k(inst)
        assert allocation_gamma(inst, alloc, "effx") >= F(1, 2)
    ok("2.ece_ordered", "EFFX gamma >= 1/2 on 1000 ordered instances")


def test_c2_ece_swaps_top_n_agreement():
    rng = random.Random(2006)
    for _ in range(1000):
        spec = FamilySpec(
            family="top-n-agreement",
            n=rng.randint(2, 4),
            k=rng.choice([2, 3]),
            seed=rng.randint(0, 10**9),
            rho=F(rng.randint(2, 6), rng.randint(1, 2)),
            granularity=rng.randint(2, 10),
        )
        inst = generate(spec)
        run = run_ece_swaps(inst, debug=True)  # invariants must never fire
        assert run.counts["get"] == inst.n * inst.k
        label = classify(inst)
        bound = min(F(1, 3), 1 / (label.rho + 1))
        assert allocation_gamma(inst, run.allocation, "ef") >= bound
    ok("2.ece_swaps_topn", "EF gamma >= min{1/3, 1/(rho+1)}; invariants quiet; gets = k*n")


def test_c2_ece_swaps_rho_bounded():
    rng = random.Random(2007)
    from flipfair.generators import individual_rho

    for _ in range(1000):
        spec = FamilySpec(
            family="rho-bounded",
            n=rng.randint(2, 4),
            k=rng.choice([2, 3]),
            seed=rng.randint(0, 10**9),
            rho=F(rng.randint(2, 6), rng.randint(1, 2)),
            granularity=rng.randint(2, 10),
        )
        inst = generate(spec)
        alloc = run_ece_swaps(inst).allocation
        rho = individual_rho(inst)
        assert allocation_gamma(inst, alloc, "ef") >= 1 / (rho + 2)
    ok("2.ece_swaps_rho", "EF gamma >= 1/(rho+2) on 1000 rho-bounded instances")


def test_c2_mnw_optima_half_eff1_and_po():
    rng = random.Random(2008)
    for _ in range(200):
        n, k = rng.choice([2, 3]), rng.choice([2, 3])
        inst = random_instance(rng, n, k, lo=0, hi=8, qmax=3)
        result = max_nash_welfare(inst)
        for alloc in result.optima:
            assert allocation_gamma(inst, alloc, "eff1") >= F(1, 2)
            assert is_pareto_optimal(inst, alloc)[0]
    ok("2.mnw", "200 instances: every MNW optimum 1/2-EFF1 and Pareto optimal")


def test_c2_effx_existence_known_families():
    rng = random.Random(2009)
    for trial in range(1000):
        kind = trial % 3
        if kind == 0:  # two agents
            inst = random_instance(rng, 2, rng.randint(1, 3))
        elif kind == 1:  # identical valuations
            spec = FamilySpec(
                "identical", rng.randint(2, 3), rng.randint(1, 2), seed=rng.randint(0, 10**9)
            )
            inst = generate(spec)
        else:  # binary valuations
            spec = FamilySpec(
                "binary", rng.randint(2, 3), rng.randint(1, 2), seed=rng.randint(0, 10**9)
            )
            inst = generate(spec)
        assert effx_exists(inst, "effx", F(1)) is not None
    ok("2.effx_exists", "EFFX exists on 1000 n=2 / identical / binary instances")


# -- criterion 3: oracle self-consistency ------------------------------------


def test_c3_independent_audit_agreement():
    from flipfair.solvers import enumerate_allocations

    rng = random.Random(3001)
    for _ in range(100):
        inst = random_instance(rng, 2, 2, lo=0, hi=10, qmax=6)
        n, k, values = naive_load(serialize_instance(inst))
        assert (n, k) == (2, 2)
        for alloc in enumerate_allocations(2, 2):
            bundles = [sorted(b) for b in alloc]
            for i, j in ((0, 1), (1, 0)):
                naive = naive_pair(values, bundles, i, j)
                report = audit_allocation(inst, alloc).pair(i, j)
                assert naive["envies"] == report.envies
                for notion in ("ef", "eff1", "effx"):
                    mine = getattr(report, notion)
                    assert (naive[notion].numerator, naive[notion].denominator) == (
                        mine.numerator,
                        mine.denominator,
                    )
                assert naive["ef1_removal"] == report.ef1_removal
                assert naive["efx_removal"] == report.efx_removal
    ok("3.oracle_consistency", "100 instances, all allocations, verdicts bit-for-bit")


# -- criterion 4: explicit non-reproducibility note ---------------------------


def test_c4_no_empirical_experiments_note():
    # The source material contains no empirical experiments or large-scale
    # numbers; everything quantitative is covered by the exact fixtures and
    # the seeded property suites above, at the stated instance sizes.
    ok("4.note", "no empirical experiments exist to reproduce; coverage is exact")
