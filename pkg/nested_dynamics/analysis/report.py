import json
import logging
import numbers
import time
from threading import Thread
import numpy as np
from ..common import NestedDynamicsError

logger = logging.getLogger(__name__)

class CheckResult:
    """
    The outcome of one check: status is "pass", "fail" or "error".
    """
    def __init__(self, name, status, residual=None, tolerance=None,
                 details=None, message=None, seconds=None):
        self.name = name
        self.status = status
        self.residual = residual
        self.tolerance = tolerance
        self.details = {} if details is None else details
        self.message = message
        self.seconds = seconds

    @property
    def passed(self):
        return self.status == "pass"

    def to_dict(self):
        return {
            "name": self.name,
            "status": self.status,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "details": self.details,
            "message": self.message
        }

    def __str__(self):
        return "<CheckResult {} {} residual={} tol={}>".format(
            self.name, self.status, self.residual, self.tolerance)

    def __repr__(self):
        return str(self)

def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, numbers.Real):
        return float(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value

class Check:
    """
    A named check. The function returns a residual (compared against the
    tolerance), a bool, or a (residual or bool, details) pair. Errors of the
    package's own kinds mark the check failed; anything else marks it as an
    error.
    """
    def __init__(self, name, func, tolerance=None):
        self.name = name
        self.func = func
        self.tolerance = tolerance

    def run(self):
        start = time.perf_counter()

        try:
            outcome = self.func()
            details = {}

            if isinstance(outcome, tuple):
                outcome, details = outcome

            if isinstance(outcome, (bool, np.bool_)):
                status = "pass" if outcome else "fail"
                residual = None
            else:
                residual = float(outcome)
                status = "pass" if residual <= self.tolerance else "fail"

            result = CheckResult(self.name, status, residual, self.tolerance,
                                 _jsonable(details))

        except NestedDynamicsError as e:
            result = CheckResult(self.name, "fail", tolerance=self.tolerance,
                                 message="{}: {}".format(type(e).__name__, e))

        except Exception as e:
            logger.error("Check '%s' raised an unexpected error.", self.name, exc_info=True)
            result = CheckResult(self.name, "error", tolerance=self.tolerance,
                                 message="{}: {}".format(type(e).__name__, e))

        result.seconds = time.perf_counter() - start
        logger.info("%s: %s (%.3g s)", self.name, result.status, result.seconds)
        return result

class CheckWorker:
    def __init__(self, checks):
        self.checks = checks
        self.results = []

    def __call__(self):
        for index, check in self.checks:
            self.results.append((index, check.run()))

    def start(self):
        """
        Starts the worker in a new thread.
        """
        self.thread = Thread(target=self)
        self.thread.start()
        return self.thread

    def join(self, **kwargs):
        """
        Joins the worker's thread.
        """
        return self.thread.join(**kwargs)

class CheckSuite:
    """
    A list of checks, run sequentially or spread over worker threads. Checks
    share no mutable state.
    """
    def __init__(self, jobs=1):
        self.jobs = max(1, int(jobs))
        self.checks = []

    def add(self, name, func, tolerance=None):
        self.checks.append(Check(name, func, tolerance))
        return self

    def run(self):
        indexed = list(enumerate(self.checks))

        if self.jobs == 1:
            return [check.run() for _, check in indexed]

        workers = [CheckWorker(indexed[i::self.jobs]) for i in range(self.jobs)]

        for w in workers:
            w.start()

        for w in workers:
            w.join()

        results = sorted((r for w in workers for r in w.results), key=lambda r: r[0])
        return [result for _, result in results]

def summarize(results):
    return {
        "passed": sum(r.passed for r in results),
        "failed": sum(not r.passed for r in results),
        "all_passed": all(r.passed for r in results)
    }

def report_json(results, **extra):
    report = {"checks": [r.to_dict() for r in results], "summary": summarize(results)}
    report.update(_jsonable(extra))
    return json.dumps(report, indent=2)
