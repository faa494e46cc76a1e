import pytest

from reflectind.logic import FuncSym, PredSym, Signature, Sort, Theory, Var
from reflectind.theories import (IND_THEORY, LIST_THEORY, NAT_THEORY, builtin,
                                 cyclic_nat_model)

NAT = Sort("nat")


@pytest.fixture(scope="session")
def nat_theory():
    return builtin(NAT_THEORY)


@pytest.fixture(scope="session")
def list_theory():
    return builtin(LIST_THEORY)


@pytest.fixture(scope="session")
def ind_theory():
    return builtin(IND_THEORY)


@pytest.fixture(scope="session")
def nat_sig(nat_theory):
    return nat_theory.signature


@pytest.fixture(scope="session")
def z2(nat_theory):
    return cyclic_nat_model(nat_theory, 2)


def x(i, sort=NAT):
    return Var(sort, i)


def pure_sort_theory(*sorts: str) -> Theory:
    return Theory(Signature(tuple(Sort(s) for s in sorts), (), ()), (), (), (), "pure")


__all__ = ["NAT", "x", "pure_sort_theory", "FuncSym", "PredSym"]


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.write_sep("=", "acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
