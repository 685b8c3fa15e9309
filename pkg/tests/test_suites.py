import pytest

from deltaprism.suites import SUITES, divided_power_dimension, run_suite


@pytest.mark.parametrize("name", ["envelope", "cech"])
@pytest.mark.parametrize("p", [2, 3])
def test_fast_suites_pass(name, p):
    report = run_suite(name, p, seed=3)
    assert report.passed, "\n".join(report.lines())


def test_suite_names():
    assert SUITES == ("delta", "witt", "envelope", "cech")
    with pytest.raises(ValueError):
        run_suite("nope")


def test_divided_power_oracle():
    # weights 0..D each carry one γ_n over F_p
    assert [divided_power_dimension(3, D) for D in range(7)] == list(range(1, 8))
