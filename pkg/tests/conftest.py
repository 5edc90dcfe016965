import random

import pytest
from hypothesis import HealthCheck, settings

from utbreaks.field import FieldCtx
from utbreaks.laurent import LaurentSeries
from utbreaks.trimatrix import TriMatrix

settings.register_profile(
    "utbreaks", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("utbreaks")


def mono(ctx, weight, coeff=1):
    """coeff * t^weight, i.e. a single term at index -weight."""
    return LaurentSeries(ctx, {-weight: coeff})


def matrix(ctx, n, weights, diag=1):
    """TriMatrix from {(i, j): weight or LaurentSeries}."""
    ent = {}
    for ij, w in weights.items():
        ent[ij] = w if isinstance(w, LaurentSeries) else mono(ctx, w)
    return TriMatrix(ctx, n, ent, diag)


@pytest.fixture
def F2():
    return FieldCtx(2)


@pytest.fixture
def F3():
    return FieldCtx(3)


@pytest.fixture
def F4():
    return FieldCtx(2, [1, 1, 1])


@pytest.fixture
def worked(F2):
    return matrix(F2, 3, {(1, 2): 3, (2, 3): 5})


@pytest.fixture
def rng():
    return random.Random(20241019)


# one line per acceptance criterion, printed after the run
CRITERIA: dict = {}


def record_criterion(number: int, ok: bool, detail: str):
    CRITERIA[number] = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[k])
