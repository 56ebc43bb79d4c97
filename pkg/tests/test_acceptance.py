"""One test per acceptance criterion; each prints its one-line verdict."""

import pytest

from substruct.acceptance import CRITERIA

LINES = {}


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda fn: fn.__name__)
def test_criterion(criterion):
    r = criterion()
    LINES[r.number] = r.line()
    print(r.line())
    assert r.ok, r.detail
