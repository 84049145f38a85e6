import pytest

from alcove_pieces.verify import CRITERIA, SuiteConfig, run_criterion

import conftest


@pytest.mark.parametrize("entry", CRITERIA, ids=[f"{e[0]:02d}-{e[1]}" for e in CRITERIA])
def test_criterion(entry):
    res = run_criterion(entry, SuiteConfig())
    line = res.line() + f"  [{res.seconds:.2f}s]"
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    assert res.ok, "\n".join(res.failures[:20]) or f"took {res.seconds:.1f}s"
