"""Per-instance conjecture check and seeded batch runs."""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from statistics import quantiles
from typing import Any

from .errors import BudgetExceededError, MStanleyError, UnsupportedError
from .homology import QQ, Field
from .instances import InstanceSpec, RandomParams, format_instance, random_instance
from .invariants import depth_formula, depth_oracle, size
from .monomial import PrimaryDecomposition
from .splitting import decompose_two_primary, split_theorem3
from .stanley import DEFAULT_BUDGET, sdepth_exact, validate_decomposition

# a report keeps the first failure class it hits
STATUSES = ("ok", "conjecture-failure", "formula-mismatch", "invariant-violation", "budget", "error")


@dataclass
class ConjectureReport:
    instance: InstanceSpec
    size: dict[str, int] | None = None
    depth: dict[str, Any] = field(default_factory=dict)
    sdepth: dict[str, int | None] = field(default_factory=dict)
    decomposition: list[dict] = field(default_factory=list)
    conjecture_holds: bool = False
    status: str = "ok"
    errors: list[dict[str, str]] = field(default_factory=list)
    timings_ms: dict[str, float] = field(default_factory=dict)

    def fail(self, status: str, stage: str, message: str) -> None:
        if self.status == "ok":
            self.status = status
        self.errors.append({"stage": stage, "message": message})

    def to_json(self, timings: bool = True) -> dict:
        out = {
            "instance": format_instance(self.instance),
            "n": self.instance.n,
            "size": self.size,
            "depth": self.depth,
            "sdepth": self.sdepth,
            "decomposition": self.decomposition,
            "conjecture_holds": self.conjecture_holds,
            "status": self.status,
            "errors": self.errors,
        }
        if timings:
            out["timings_ms"] = {k: round(v, 3) for k, v in self.timings_ms.items()}
        return out


@contextmanager
def _stage(report: ConjectureReport, name: str):
    start = time.perf_counter()
    try:
        yield
    finally:
        report.timings_ms[name] = (time.perf_counter() - start) * 1000


def verify(dec: PrimaryDecomposition, field: Field = QQ, exact: bool = True,
           budget: int = DEFAULT_BUDGET) -> ConjectureReport:
    """Run size, both depth routes, the constructive decomposition and (optionally) the exact solver."""
    if dec.s not in (2, 3):
        raise UnsupportedError(f"verification covers two or three components, got {dec.s}")
    report = ConjectureReport(InstanceSpec.from_decomposition(dec))
    ideal = dec.ideal

    with _stage(report, "size"):
        sz = size(dec)
        report.size = {"v": sz.v, "h": sz.h, "size": sz.size}

    formula = oracle = None
    try:
        with _stage(report, "depth_formula"):
            formula = depth_formula(dec)
        with _stage(report, "depth_oracle"):
            oracle = depth_oracle(ideal, field)
    except MStanleyError as exc:
        report.fail("error", "depth", str(exc))
    if formula is not None:
        report.depth = {"formula": formula.depth_ideal, "case": formula.method, "flags": list(formula.flags)}
    if oracle is not None:
        report.depth["oracle"] = oracle.depth_ideal
    if formula is not None and oracle is not None and formula.depth_quotient != oracle.depth_quotient:
        report.fail("formula-mismatch", "depth",
                    f"formula gives {formula.depth_ideal}, oracle gives {oracle.depth_ideal}")
    depth_ideal = oracle.depth_ideal if oracle is not None else formula.depth_ideal if formula else None

    constructed = None
    try:
        with _stage(report, "decompose"):
            constructed = decompose_two_primary(dec, budget) if dec.s == 2 else split_theorem3(dec, budget)
        with _stage(report, "validate"):
            check = validate_decomposition(ideal, constructed)
        if not check:
            report.fail("invariant-violation", "validate", check.reason)
    except BudgetExceededError as exc:
        report.fail("budget", "decompose", str(exc))
    except MStanleyError as exc:
        report.fail("invariant-violation", "decompose", str(exc))
    if constructed is not None:
        report.decomposition = constructed.to_json()
        report.sdepth["constructed"] = constructed.sdepth_of

    if exact:
        try:
            with _stage(report, "sdepth_exact"):
                report.sdepth["exact"] = sdepth_exact(ideal, budget).value
        except BudgetExceededError as exc:
            report.errors.append({"stage": "sdepth_exact", "message": str(exc)})
            report.sdepth["exact"] = None

    built = report.sdepth.get("constructed")
    if built is not None and depth_ideal is not None:
        report.conjecture_holds = built >= depth_ideal
        if not report.conjecture_holds:
            report.fail("conjecture-failure", "conjecture", f"sdepth {built} < depth {depth_ideal}")
    best = report.sdepth.get("exact")
    if best is not None and built is not None and best < built:
        report.fail("invariant-violation", "sdepth_exact", f"exact sdepth {best} below constructed {built}")
    return report


@dataclass(frozen=True)
class BatchParams:
    seed: int
    count: int
    n: int
    components: int = 3
    max_exp: int = 2
    max_gens: int = 5
    exact: bool = True
    budget: int = DEFAULT_BUDGET
    field: str = "q"

    def instance_params(self, index: int) -> RandomParams:
        return RandomParams(seed=f"{self.seed}:{index}", n=self.n, s=self.components,
                            max_exp=self.max_exp, max_gens=self.max_gens)


def _run_one(args: tuple[BatchParams, int]) -> dict:
    params, index = args
    try:
        dec = random_instance(params.instance_params(index))
        report = verify(dec, Field.parse(params.field), params.exact, params.budget)
        record = report.to_json()
    except MStanleyError as exc:
        record = {"status": "error", "errors": [{"stage": "setup", "message": str(exc)}],
                  "conjecture_holds": False, "timings_ms": {}}
    record["index"] = index
    return record


def run_batch(params: BatchParams, jobs: int = 1) -> list[dict]:
    """Records in instance order, whatever the number of workers."""
    work = [(params, i) for i in range(params.count)]
    if jobs <= 1 or params.count <= 1:
        return [_run_one(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, work))


def summarize(params: BatchParams, records: list[dict], timings: bool = True) -> dict:
    statuses = {s: 0 for s in STATUSES}
    cases: dict[str, int] = {}
    gaps: dict[str, int] = {}
    for r in records:
        statuses[r["status"]] += 1
        case = r.get("depth", {}).get("case")
        if case:
            cases[case] = cases.get(case, 0) + 1
        built, depth = r.get("sdepth", {}).get("constructed"), r.get("depth", {}).get("oracle")
        if built is not None and depth is not None:
            key = str(built - depth)
            gaps[key] = gaps.get(key, 0) + 1
    summary = {
        "params": {k: v for k, v in vars(params).items()},
        "count": len(records),
        "passed": sum(1 for r in records if r["conjecture_holds"] and r["status"] == "ok"),
        "statuses": {k: v for k, v in statuses.items() if v},
        "cases": dict(sorted(cases.items())),
        "sdepth_minus_depth": dict(sorted(gaps.items(), key=lambda kv: int(kv[0]))),
    }
    if timings:
        totals = [sum(r.get("timings_ms", {}).values()) for r in records]
        if len(totals) >= 2:
            q = quantiles(totals, n=100, method="inclusive")
            summary["timing_ms"] = {"p50": round(q[49], 3), "p90": round(q[89], 3), "max": round(max(totals), 3)}
        elif totals:
            summary["timing_ms"] = {"p50": round(totals[0], 3), "p90": round(totals[0], 3),
                                    "max": round(totals[0], 3)}
    return summary


def strip_timings(record: dict) -> dict:
    return {k: v for k, v in record.items() if k not in ("timings_ms", "timing_ms")}


def write_jsonl(path, records: list[dict], timings: bool = True) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r if timings else strip_timings(r), sort_keys=True) + "\n")


def batch(params: BatchParams, jobs: int = 1, timings: bool = True) -> tuple[dict, list[dict]]:
    records = run_batch(params, jobs)
    if not timings:
        records = [strip_timings(r) for r in records]
    return summarize(params, records, timings), records
