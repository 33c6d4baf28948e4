"""Tests for graphalg.io.fixtures – every bundled example meets its expectations."""

import pytest

from graphalg.errors import InputError
from graphalg.io.fixtures import list_fixtures, load_fixture, run_fixture


def test_bundled_names():
    assert list_fixtures() == ["ex1", "ex2", "ex3", "intro", "nonpos"]


def test_unknown_fixture():
    with pytest.raises(InputError, match="available"):
        load_fixture("ex9")


@pytest.mark.parametrize("name", ["ex1", "ex2", "ex3", "intro", "nonpos"])
def test_fixture_passes(name):
    report = run_fixture(load_fixture(name))
    failed = [c for c in report.checks if not c.ok]
    assert not failed, failed
    assert report.checks


def test_report_dict():
    report = run_fixture(load_fixture("ex2")).to_dict()
    assert report["fixture"] == "ex2"
    assert report["passed"] is True
    names = {c["name"] for c in report["checks"]}
    assert {"splits", "outcome", "delay", "psi(112)"} <= names
