"""Command-line front end.

Subcommands: solve, audit, oracle, reproduce, gen, experiment.  Every command
is non-interactive, prints a single JSON document on stdout and is
byte-deterministic given its flags; all randomness flows from --seed.  Gamma
values appear as exact rational strings with decimal approximations alongside.

Exit codes: 0 success, 2 usage or input error, 3 enumeration budget refusal,
4 fixture reproduction failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .core import (
    AllocationError,
    InstanceError,
    allocation_to_lists,
    format_rational,
    instance_to_doc,
    parse_allocation,
    parse_instance,
    parse_rational,
)
from .audit import allocation_gamma, audit_allocation
from .algorithms import (
    PickSequence,
    ScriptError,
    SelectionScript,
    balanced_round_robin_k2,
    ece_k,
    ece_swaps,
    generalized_round_robin,
    round_robin,
)
from .solvers import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    effx_exists,
    is_pareto_optimal,
    leximin,
    max_nash_welfare,
    max_social_welfare,
)
from .generators import FamilySpec, classify, generate, sidecar
from .fixtures import FixtureError, check_fixture, fixture_names, load_fixture

ALGORITHMS = ("rr", "brr2", "genrr", "ece", "ece-swaps")


def _read(path: str) -> str:
    return Path(path).read_text()


def _load_instance(path: str):
    return parse_instance(_read(path))


def _parse_order(text: str | None, n: int):
    if text is None:
        return list(range(n))
    return [int(part) for part in text.split(",")]


def _load_script(path: str | None):
    if path is None:
        return None
    return SelectionScript.from_doc(json.loads(_read(path)))


def _audit_doc(report) -> dict:
    doc = report.to_doc()
    for pair_doc, pair in zip(doc["pairs"], report.pairs):
        pair_doc["gamma_approx"] = {
            "ef": float(pair.ef),
            "eff1": float(pair.eff1),
            "effx": float(pair.effx),
        }
    level = report.allocation
    doc["allocation"]["gamma_approx"] = {
        "ef": float(level.ef),
        "eff1": float(level.eff1),
        "effx": float(level.effx),
    }
    return doc


def _run_algorithm(args, inst):
    if args.alg == "rr":
        return round_robin(inst, _parse_order(args.order, inst.n))
    if args.alg == "brr2":
        return balanced_round_robin_k2(inst, _parse_order(args.order, inst.n))
    if args.alg == "genrr":
        if args.sequence is None:
            raise ValueError("--sequence is required for genrr")
        seq = PickSequence.from_doc(json.loads(_read(args.sequence)))
        return generalized_round_robin(inst, seq)
    if args.alg == "ece":
        return ece_k(inst, _load_script(args.script))
    if args.alg == "ece-swaps":
        return ece_swaps(inst, _load_script(args.script))
    raise ValueError(f"unknown algorithm {args.alg!r}")


def _cmd_solve(args):
    inst = _load_instance(args.instance)
    alloc = _run_algorithm(args, inst)
    report = audit_allocation(inst, alloc)
    return {
        "command": "solve",
        "alg": args.alg,
        "allocation": {"bundles": allocation_to_lists(alloc)},
        "audit": _audit_doc(report),
    }, 0


def _cmd_audit(args):
    inst = _load_instance(args.instance)
    alloc = parse_allocation(_read(args.allocation))
    report = audit_allocation(inst, alloc)
    return {"command": "audit", "audit": _audit_doc(report)}, 0


def _cmd_oracle(args):
    inst = _load_instance(args.instance)
    budget = args.budget
    if args.rule in ("mnw", "leximin", "sw"):
        solver = {"mnw": max_nash_welfare, "leximin": leximin, "sw": max_social_welfare}
        result = solver[args.rule](inst, budget)
        doc = {
            "command": "oracle",
            "rule": args.rule,
            "summary": result.summary,
            "optimum": [sorted(b) for b in result.first],
            "optima_count": len(result.optima),
        }
        if result.positive_agents is not None:
            doc["positive_agents"] = sorted(result.positive_agents)
        if args.all_optima:
            doc["optima"] = [[sorted(b) for b in a] for a in result.optima]
        return doc, 0
    if args.rule == "po":
        if args.allocation is None:
            raise ValueError("oracle po needs --allocation")
        alloc = parse_allocation(_read(args.allocation))
        po, certificate = is_pareto_optimal(inst, alloc, budget)
        return {
            "command": "oracle",
            "rule": "po",
            "pareto_optimal": po,
            "certificate": allocation_to_lists(certificate) if certificate else None,
        }, 0
    if args.rule == "exists":
        gamma = parse_rational(args.gamma)
        doc = {
            "command": "oracle",
            "rule": "exists",
            "notion": args.notion,
            "gamma": format_rational(gamma),
        }
        if args.all_optima:
            hits = effx_exists(inst, args.notion, gamma, budget, exhaustive=True)
            doc["count"] = len(hits)
            doc["all"] = [[sorted(b) for b in a] for a in hits]
        else:
            found = effx_exists(inst, args.notion, gamma, budget)
            doc["found"] = allocation_to_lists(found) if found is not None else None
        return doc, 0
    raise ValueError(f"unknown oracle rule {args.rule!r}")


def _reproduce_one(name: str) -> dict:
    fixture = load_fixture(name)
    results = check_fixture(fixture)
    return {
        "fixture": name,
        "constants": fixture.constants,
        "facts": [
            {"label": r.label, "pass": r.passed, "detail": r.detail} for r in results
        ],
        "pass": all(r.passed for r in results),
    }


def _cmd_reproduce(args):
    names = fixture_names() if args.name == "all" else [args.name]
    reports = [_reproduce_one(name) for name in names]
    ok = all(r["pass"] for r in reports)
    doc = {"command": "reproduce", "pass": ok}
    doc["fixtures" if args.name == "all" else "fixture"] = (
        reports if args.name == "all" else reports[0]
    )
    return doc, 0 if ok else 4


def _family_spec(args) -> FamilySpec:
    rho = parse_rational(args.rho) if args.rho is not None else None
    return FamilySpec(
        family=args.family,
        n=args.n,
        k=args.k,
        seed=args.seed,
        rho=rho,
        granularity=args.granularity,
    )


def _cmd_gen(args):
    spec = _family_spec(args)
    inst = generate(spec)
    instance_doc = instance_to_doc(inst)
    side = sidecar(spec, inst)
    if args.out:
        out = Path(args.out)
        out.write_text(json.dumps(instance_doc) + "\n")
        out.with_suffix(out.suffix + ".sidecar.json").write_text(
            json.dumps(side) + "\n"
        )
    return {"command": "gen", "instance": instance_doc, "sidecar": side}, 0


def _experiment_algorithm(alg: str, inst):
    order = list(range(inst.n))
    if alg == "rr":
        return round_robin(inst, order)
    if alg == "brr2":
        return balanced_round_robin_k2(inst, order)
    if alg == "ece":
        return ece_k(inst)
    if alg == "ece-swaps":
        return ece_swaps(inst)
    raise ValueError(f"experiment cannot run algorithm {alg!r}")


def _cmd_experiment(args):
    worst = None
    rows = []
    for trial in range(args.trials):
        seed = args.seed + trial
        spec = FamilySpec(
            family=args.family,
            n=args.n,
            k=args.k,
            seed=seed,
            rho=parse_rational(args.rho) if args.rho is not None else None,
            granularity=args.granularity,
        )
        inst = generate(spec)
        alloc = _experiment_algorithm(args.alg, inst)
        gamma = allocation_gamma(inst, alloc, args.notion)
        label = classify(inst)
        rows.append(
            {
                "trial": trial,
                "seed": seed,
                "gamma": format_rational(gamma),
                "gamma_approx": float(gamma),
                "rho": format_rational(label.rho) if label.rho is not None else "",
            }
        )
        if worst is None or gamma < worst[2]:
            worst = (trial, seed, gamma)
    doc = {
        "command": "experiment",
        "family": args.family,
        "alg": args.alg,
        "notion": args.notion,
        "n": args.n,
        "k": args.k,
        "trials": args.trials,
        "seed": args.seed,
        "worst": {
            "trial": worst[0],
            "seed": worst[1],
            "gamma": format_rational(worst[2]),
            "approx": float(worst[2]),
        },
    }
    if args.report_dir:
        from .report import write_experiment_report

        meta = {
            "family": args.family,
            "alg": args.alg,
            "notion": args.notion,
            "n": args.n,
            "k": args.k,
            "trials": args.trials,
        }
        written = write_experiment_report(args.report_dir, meta, rows)
        doc["report_files"] = [str(p) for p in written]
    return doc, 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="flipfair",
        description="Fair division into fixed-size bundles: algorithms, audits, oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run an allocation algorithm and audit the result")
    solve.add_argument("--instance", required=True)
    solve.add_argument("--alg", required=True, choices=ALGORITHMS)
    solve.add_argument("--order", help="comma-separated agent order, e.g. 0,1,2")
    solve.add_argument("--sequence", help="pick-sequence JSON file for genrr")
    solve.add_argument("--script", help="selection-script JSON file for ece/ece-swaps")
    solve.set_defaults(func=_cmd_solve)

    audit = sub.add_parser("audit", help="audit a given allocation")
    audit.add_argument("--instance", required=True)
    audit.add_argument("--allocation", required=True)
    audit.set_defaults(func=_cmd_audit)

    oracle = sub.add_parser("oracle", help="exact brute-force rules and checks")
    oracle.add_argument("rule", choices=("mnw", "leximin", "sw", "po", "exists"))
    oracle.add_argument("--instance", required=True)
    oracle.add_argument("--allocation", help="allocation file, for the po rule")
    oracle.add_argument("--notion", default="effx", choices=("ef", "eff1", "effx"))
    oracle.add_argument("--gamma", default="1", help="threshold as p/q")
    oracle.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    oracle.add_argument("--all-optima", action="store_true")
    oracle.set_defaults(func=_cmd_oracle)

    reproduce = sub.add_parser("reproduce", help="re-derive a fixture's expected facts")
    reproduce.add_argument("name", help="fixture name, or 'all'")
    reproduce.set_defaults(func=_cmd_reproduce)

    gen = sub.add_parser("gen", help="generate a seeded instance from a family")
    gen.add_argument("--family", required=True)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--k", type=int, required=True)
    gen.add_argument("--rho", help="ratio bound as p/q, for the bounded families")
    gen.add_argument("--granularity", type=int, default=10)
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--out", help="also write the instance (and sidecar) to this path")
    gen.set_defaults(func=_cmd_gen)

    experiment = sub.add_parser(
        "experiment", help="seeded trials of (family, algorithm, notion); worst gamma"
    )
    experiment.add_argument("--family", required=True)
    experiment.add_argument("--alg", required=True, choices=("rr", "brr2", "ece", "ece-swaps"))
    experiment.add_argument("--notion", required=True, choices=("ef", "eff1", "effx"))
    experiment.add_argument("--trials", type=int, required=True)
    experiment.add_argument("--n", type=int, required=True)
    experiment.add_argument("--k", type=int, required=True)
    experiment.add_argument("--rho", help="ratio bound as p/q, for the bounded families")
    experiment.add_argument("--granularity", type=int, default=10)
    experiment.add_argument("--seed", type=int, required=True)
    experiment.add_argument("--report-dir", help="write trials.csv and figures here")
    experiment.set_defaults(func=_cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        doc, code = args.func(args)
    except BudgetExceeded as exc:
        print(json.dumps({"error": {"type": "budget", "message": str(exc),
                                    "count": exc.count, "budget": exc.budget}}))
        return 3
    except (
        InstanceError,
        AllocationError,
        ScriptError,
        FixtureError,
        ValueError,
        KeyError,
        OSError,
        json.JSONDecodeError,
    ) as exc:
        print(json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}))
        return 2
    print(json.dumps(doc, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
