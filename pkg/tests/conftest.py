"""Shared fixtures: canonical example files and CLI runner."""

import io
import pathlib

import pytest

from choicematch import load_market, load_matching, load_table
from choicematch.cli import run

ROOT = pathlib.Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"


def fixture_path(name):
    return str(FIXTURES / name)


def fixture_text(name):
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def sub_ga_not_pi():
    """Substitutable and acyclic but not path independent, four contracts."""
    table, _ = load_table(fixture_text("sub_ga_not_pi.table"))
    return table


@pytest.fixture(scope="session")
def sub_not_ga():
    """Substitutable but cyclic, four contracts."""
    table, _ = load_table(fixture_text("sub_not_ga.table"))
    return table


@pytest.fixture(scope="session")
def m2m_market():
    return load_market(fixture_text("example_m2m.market"))


@pytest.fixture(scope="session")
def m2m_matching(m2m_market):
    return load_matching(fixture_text("example_m2m.matching"), m2m_market)


@pytest.fixture(scope="session")
def o2o_market():
    return load_market(fixture_text("example_o2o.market"))


@pytest.fixture(scope="session")
def o2o_matching(o2o_market):
    return load_matching(fixture_text("example_o2o.matching"), o2o_market)


def run_cli(*argv):
    """Run the CLI in process; returns (exit code, stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def transcript(*argv):
    """Same shape as the golden files under fixtures/expected/."""
    code, out, err = run_cli(*argv)
    return "exit=%d\n--- stdout ---\n%s--- stderr ---\n%s" % (code, out, err)
