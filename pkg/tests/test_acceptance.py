"""One test per acceptance criterion; each prints its pass/fail line."""
import pytest

from cohpow.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[c[1].replace(" ", "-") for c in CRITERIA])
def test_criterion(number, capsys):
    res = run_criterion(number)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.details[:5]
    assert res.seconds < res.limit, f"{res.seconds:.2f}s exceeds {res.limit}s"
