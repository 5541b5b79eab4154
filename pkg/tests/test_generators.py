import random
from fractions import Fraction

import pytest

from flipfair.core import make_instance
from flipfair.generators import (
    FAMILIES,
    Classification,
    FamilySpec,
    classify,
    generate,
    individual_rho,
    instance_bytes,
    sidecar,
)

F = Fraction


def test_spec_validation():
    with pytest.raises(ValueError):
        FamilySpec("nope", 2, 2, seed=1)
    with pytest.raises(ValueError):
        FamilySpec("general", 1, 2, seed=1)
    with pytest.raises(ValueError):
        FamilySpec("general", 2, 2, seed=1, granularity=0)
    with pytest.raises(ValueError):
        FamilySpec("rho-bounded", 2, 2, seed=1, rho=F(1, 2))
    with pytest.raises(ValueError):
        FamilySpec("top-n-agreement", 2, 2, seed=1)  # rho required


def test_identical_rows_equal():
    inst = generate(FamilySpec("identical", 2, 2, seed=7))
    assert inst.values[0] == inst.values[1]
    assert classify(inst).identical


def test_binary_entries():
    inst = generate(FamilySpec("binary", 3, 2, seed=1))
    assert all(v in (0, 1) for row in inst.values for v in row)
    assert classify(inst).binary


def test_ordered_common_permutation():
    inst = generate(FamilySpec("ordered", 3, 3, seed=42))
    label = classify(inst)
    assert label.ordered
    # independent check: sorting items by agent 0's values must sort everyone
    order = sorted(inst.items, key=lambda g: (-inst.values[0][g], g))
    # ties can shuffle equal-valued blocks, so verify pairwise monotonicity
    for i in inst.agents:
        for x in inst.items:
            for y in inst.items:
                if inst.values[i][x] > inst.values[i][y]:
                    assert order.index(x) < order.index(y) or any(
                        inst.values[j][y] > inst.values[j][x] for j in inst.agents
                    ) is False


def test_generate_classify_roundtrip_all_families():
    for family in FAMILIES:
        for seed in (1, 2, 3, 11):
            rho = F(3) if family in ("top-n-agreement", "rho-bounded") else None
            spec = FamilySpec(family, 3, 2, seed=seed, rho=rho)
            inst = generate(spec)
            label = classify(inst)
            if family == "identical":
                assert label.identical
            elif family == "binary":
                assert label.binary
            elif family == "ordered":
                assert label.ordered
            elif family == "top-n-agreement":
                assert label.top_n_agreement
                assert label.rho is not None and label.rho <= rho
            elif family == "rho-bounded":
                assert individual_rho(inst) is not None
                assert individual_rho(inst) <= rho


def test_rho_bound_respected_exactly():
    rng = random.Random(3)
    for _ in range(100):
        rho = F(rng.randint(2, 6))
        spec = FamilySpec("rho-bounded", 3, 2, seed=rng.randint(0, 10**6), rho=rho)
        assert individual_rho(generate(spec)) <= rho
        spec2 = FamilySpec("top-n-agreement", 3, 2, seed=rng.randint(0, 10**6), rho=rho)
        label = classify(generate(spec2))
        assert label.top_n_agreement and label.rho <= rho


def test_seeded_determinism_bytes():
    for family in FAMILIES:
        rho = F(2) if family in ("top-n-agreement", "rho-bounded") else None
        spec = FamilySpec(family, 3, 3, seed=12345, rho=rho)
        assert instance_bytes(generate(spec)) == instance_bytes(generate(spec))
    a = generate(FamilySpec("general", 3, 3, seed=1))
    b = generate(FamilySpec("general", 3, 3, seed=2))
    assert instance_bytes(a) != instance_bytes(b)


def test_classify_genrr_ordered():
    C, e = F(100), F(1, 100)
    row = [3 * C, 1 + e, 1, 1 - e, e, 0]
    inst = make_instance(2, 3, [row, row])
    label = classify(inst)
    assert label.ordered and label.identical
    assert label.top_n_agreement and label.top_n_items == frozenset({0, 1})


def test_classify_appD2_ordered():
    inst = make_instance(
        3,
        3,
        [
            [50, 17, 16, 14, 2, 1, 0, 0, 0],
            [46, 17, 16, 15, 3, 3, 0, 0, 0],
            [33, 17, 15, 15, 11, 4, 3, 1, 1],
        ],
    )
    label = classify(inst)
    assert label.ordered
    assert not label.identical


def test_classify_not_ordered():
    inst = make_instance(2, 1, [[2, 1], [1, 2]])
    assert not classify(inst).ordered


def test_classify_mnw_tight_individualized_rho():
    k, c = 3, 2
    inst = make_instance(2, k, [[c] * k + [0] * k, [2] * k + [1] * k])
    label = classify(inst)
    # ties at the n-th/(n+1)-th values make the common top-n ambiguous
    assert label.ambiguous_top_n and not label.top_n_agreement
    assert label.rho == 1  # individualized: both agents' top-2 items tie in value
    assert individual_rho(inst) == 1


def test_individual_rho_none_when_unbounded():
    inst = make_instance(2, 1, [[5, 0], [5, 0]])
    assert individual_rho(inst) is None


def test_sidecar_shape():
    spec = FamilySpec("top-n-agreement", 2, 2, seed=9, rho=F(2))
    inst = generate(spec)
    doc = sidecar(spec, inst)
    assert doc["family"] == "top-n-agreement"
    assert doc["seed"] == 9
    assert doc["rho"] is not None
