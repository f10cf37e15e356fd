"""End-to-end acceptance checks; one PASS/FAIL line per criterion is printed."""
import pytest

from hnpoly import selftest

CASES = {fn.number: fn for fn in selftest.CRITERIA}


@pytest.mark.slow
@pytest.mark.parametrize("number", sorted(CASES), ids=lambda n: f"criterion_{n:02d}")
def test_criterion(number, capsys):
    res = CASES[number]()
    with capsys.disabled():
        print("\n" + res.line())
        for f in res.failures[:5]:
            print("    " + str(f).splitlines()[-1])
    assert res.passed, res.detail + "\n" + "\n".join(str(f) for f in res.failures[:10])
