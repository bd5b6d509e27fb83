import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from alglab.algebroid import AlgebroidModel
from alglab.basecomplex import BaseComplex
from alglab.exactla import RationalMatrix
from alglab import liealg

ROOT = Path(__file__).resolve().parent.parent
MODELS = ROOT / "models"
GOLDEN = Path(__file__).with_name("golden")
ORACLE = json.loads((Path(__file__).parent / "oracles" / "oracle_values.json").read_text())

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def oracle():
    return ORACLE


def circle_model(T=1, loops=1) -> AlgebroidModel:
    g = liealg.abelian(1)
    r = liealg.trivial_rep(g, 1)
    base = BaseComplex(1, [(0, 0)] * loops, [])
    return AlgebroidModel.uniform(base, r, [(RationalMatrix.identity(1), RationalMatrix([[T]]))] * loops)


def torus_base() -> BaseComplex:
    return BaseComplex(1, [(0, 0), (0, 0)], [["+0", "+1", "-0", "-1"]])


def identity_model(base: BaseComplex, rep) -> AlgebroidModel:
    return AlgebroidModel.uniform(base, rep)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for line in results:
            terminalreporter.write_line(line)
