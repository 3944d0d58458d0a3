import pytest

from mzlab.errors import InputError
from mzlab.repro import REGISTRY, golden_text, render, run_case


@pytest.mark.parametrize("ident", sorted(REGISTRY))
def test_case_passes_and_matches_snapshot(ident):
    res = run_case(ident)
    assert res.semantic, f"{ident} failed its semantic check"
    assert golden_text(ident) is not None
    assert res.text == golden_text(ident)
    assert res.passed


def test_registry_is_described():
    for ident, case in REGISTRY.items():
        assert case.ident == ident and case.description


def test_render_uses_tabs_and_newlines():
    assert render([("a", 1), ("b", [1, 2]), ("c", None)]) == "a\t1\nb\t(1,2)\nc\tnone\n"


def test_parameter_overrides_skip_snapshot():
    res = run_case("telescope", p=3)
    assert res.golden is None and res.passed


def test_parameters_a_case_does_not_take_are_ignored():
    res = run_case("telescope", order=5, mmax=3)
    assert res.golden is True and res.passed


def test_unknown_case_is_an_input_error():
    with pytest.raises(InputError):
        run_case("no-such-case")
