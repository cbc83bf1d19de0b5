import numpy as np
import pytest
from hypothesis import settings

from grcdmm.ring import GaloisRing

from oracles import OracleRing, flatten, nest

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by this test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = getattr(report, "criterion", None)
    if marker is None:
        return
    number, title = marker
    prev = _criteria.get(number, (title, True))
    _criteria[number] = (title, prev[1] and report.outcome == "passed")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        report.criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}")


# -- conversions between package arrays and oracle tuples ------------------------


def oracle_of(ring):
    """An OracleRing with the same moduli as a package ring (arithmetic is independent)."""
    if isinstance(ring, GaloisRing):
        return OracleRing(ring.p, ring.e, list(ring.modulus))
    base = oracle_of(ring.base)
    shape = ring.base.elem_shape
    return OracleRing(ring.p, ring.e, [nest(list(c), shape) for c in ring.modulus], base=base)


def to_oracle(ring, arr):
    """Array of elements -> nested lists (batch axes) of oracle tuples."""
    arr = np.asarray(arr)
    batch = arr.shape[:arr.ndim - ring.elem_ndim]
    if not batch:
        return nest(flatten(arr.tolist()), ring.elem_shape)
    return [to_oracle(ring, arr[i]) for i in range(batch[0])]


def from_oracle(ring, x, batch=()):
    flat = flatten(x)
    return ring.asarray(np.array(flat, dtype=object).reshape(tuple(batch) + ring.elem_shape))
