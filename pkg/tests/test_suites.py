import pytest

from atfkit.suites import SuiteError, SuiteSpec, run_suite


def test_depth_guard():
    with pytest.raises(SuiteError, match="depth guard"):
        SuiteSpec("mutation-correspondence", depth=17)
    with pytest.raises(SuiteError):
        SuiteSpec("hull", depth=0)


def test_unknown_suite():
    with pytest.raises(SuiteError, match="unknown suite"):
        run_suite(SuiteSpec("nope"))


def test_report_shape():
    rep = run_suite(SuiteSpec("markov-tree"))
    assert rep.exit_code == 0 and rep.lines()[0] == "suite markov-tree: pass"


def test_failing_suite_reports_first_counterexample():
    rep = run_suite(SuiteSpec("catalog"))
    assert rep.exit_code == 1
    assert any("cp2x7.D classified" in line for line in rep.lines())


def test_family_suite_passes_for_any_seed():
    a = run_suite(SuiteSpec("cp2x1-family", seed=1))
    b = run_suite(SuiteSpec("cp2x1-family", seed=2))
    assert a.exit_code == b.exit_code == 0
