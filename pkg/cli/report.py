"""Check results and the JSON report printed on stdout."""
import logging
import platform
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from core.errors import ResourceCapExceeded
from utils.serialization import convert_to_json_serializable, dump_json

logger = logging.getLogger(__name__)

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"

REPORT_SCHEMA_VERSION = 1


@dataclass
class Check:
    id: str
    anchor: str
    status: str
    observed_error: float = None
    tolerance: float = None
    runtime_ms: float = 0.0
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return convert_to_json_serializable(asdict(self))


def run_check(check_id, anchor, tolerance, fn):
    """fn() returns the observed error, or (error, detail dict)"""
    start = time.perf_counter()
    detail = {}
    try:
        value = fn()
        if isinstance(value, tuple):
            value, detail = value
        error = float(value)
        status = PASS if error <= tolerance else FAIL
    except ResourceCapExceeded as e:
        error, status = None, SKIPPED
        detail = {"reason": str(e), "cap": type(e).__name__}
    except Exception as e:
        logger.exception(f"❌ {check_id} raised")
        error, status = None, FAIL
        detail = {"reason": f"{type(e).__name__}: {e}"}
    runtime_ms = (time.perf_counter() - start) * 1000.0
    check = Check(check_id, anchor, status, error, tolerance, runtime_ms, detail)
    icon = {PASS: "✅", FAIL: "❌", SKIPPED: "⚠️"}[status]
    shown = "-" if error is None else f"{error:.2e}"
    logger.info(f"{icon} {check_id}: {status} (error {shown}, {runtime_ms:.0f} ms)")
    return check


def skipped(check_id, anchor, reason):
    logger.info(f"⚠️ {check_id}: skipped ({reason})")
    return Check(check_id, anchor, SKIPPED, detail={"reason": reason})


@dataclass
class Report:
    suite: str
    checks: list = field(default_factory=list)
    environment: dict = field(default_factory=dict)

    def add(self, check):
        if any(c.id == check.id for c in self.checks):
            raise ValueError(f"duplicate check id {check.id!r}")
        self.checks.append(check)
        return check

    def extend(self, checks):
        for c in checks:
            self.add(c)

    def counts(self):
        out = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    @property
    def passed(self):
        return all(c.status != FAIL for c in self.checks)

    @property
    def has_skips(self):
        return any(c.status == SKIPPED for c in self.checks)

    def exit_code(self):
        """0 all pass, 1 any failure, 3 no failure but a size-gated skip"""
        if not self.passed:
            return 1
        return 3 if self.has_skips else 0

    def to_dict(self):
        return {
            "schema": REPORT_SCHEMA_VERSION,
            "suite": self.suite,
            "summary": self.counts(),
            "checks": [c.to_dict() for c in self.checks],
            "environment": convert_to_json_serializable(self.environment),
        }

    def to_json(self):
        return dump_json(self.to_dict())

    def log_summary(self):
        counts = self.counts()
        logger.info(f"📊 {self.suite}: {counts[PASS]} passed, {counts[FAIL]} failed, {counts[SKIPPED]} skipped")


def environment(seed, workers, **extra):
    env = {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "platform": platform.platform(),
        "seed": seed,
        "workers": workers,
    }
    env.update(extra)
    return env
