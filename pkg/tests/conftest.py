import random

import pytest

from svest.corpus import m1, m2, random_machine


def machine_corpus(n=200, seed=2024, **kw):
    rng = random.Random(seed)
    return [random_machine(rng, **kw) for _ in range(n)]


def all_strings(alphabet, max_len):
    import itertools

    for r in range(1, max_len + 1):
        yield from itertools.product(alphabet, repeat=r)


@pytest.fixture
def M1():
    return m1()


@pytest.fixture
def M2():
    return m2()


# criterion number -> (title, passed, detail); filled by test_acceptance
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n} [{'PASS' if ok else 'FAIL'}] {title}: {detail}")
