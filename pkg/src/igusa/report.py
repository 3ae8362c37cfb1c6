"""Check records, suite reports and their JSON form."""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field

from .groebner import Budget, BudgetExceeded

SCHEMA_VERSION = 1
PASS, FAIL, SKIPPED = "pass", "fail", "skipped-budget"


@dataclass(frozen=True)
class RunOptions:
    seed: int = 0
    budget: Budget = field(default_factory=Budget)
    samples: int | None = None
    include_slow: bool = False

    def rng(self, check_id: str) -> random.Random:
        """Per-check generator; string seeds hash deterministically."""
        return random.Random(f"{self.seed}:{check_id}")

    def count(self, default: int) -> int:
        return self.samples if self.samples is not None else default


@dataclass(frozen=True)
class CheckRecord:
    id: str
    paper_ref: str
    status: str
    witness: dict
    ms: int

    def to_json(self) -> dict:
        return {"id": self.id, "paper_ref": self.paper_ref, "status": self.status,
                "witness": self.witness, "ms": self.ms}


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    seed: int
    checks: tuple

    @property
    def verdict(self) -> str:
        return FAIL if any(c.status == FAIL for c in self.checks) else PASS

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite,
            "seed": self.seed,
            "checks": [c.to_json() for c in self.checks],
            "verdict": self.verdict,
        }


def run_check(check_id: str, paper_ref: str, fn, opts: RunOptions) -> CheckRecord:
    """Run one check; budget overruns are recorded as skips, errors as failures."""
    t0 = time.perf_counter()
    try:
        ok, witness = fn(opts, opts.rng(check_id))
        status = PASS if ok else FAIL
    except BudgetExceeded as exc:
        status, witness = SKIPPED, {"reason": str(exc)}
    except Exception as exc:  # a crash is a failed certificate, not a skipped one
        status, witness = FAIL, {"error": f"{type(exc).__name__}: {exc}"}
    ms = int((time.perf_counter() - t0) * 1000)
    return CheckRecord(check_id, paper_ref, status, _jsonable(witness), ms)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items, key=str) if isinstance(x, (set, frozenset)) else items
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    if hasattr(x, "to_json"):
        return _jsonable(x.to_json())
    return str(x)


def dumps(report: SuiteReport) -> str:
    return json.dumps(report.to_json(), sort_keys=True, indent=2) + "\n"


def write_report(report: SuiteReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(report))


def read_report(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def without_timing(data: dict) -> dict:
    """Report data with wall-clock fields removed, for reproducibility comparisons."""
    out = dict(data)
    out["checks"] = [{k: v for k, v in c.items() if k != "ms"} for c in data["checks"]]
    return out
