"""Shared fixtures, re-exported from the package's fixture catalog."""
from __future__ import annotations

import pytest

from posheaf.fixtures import (
    FIXTURE_FRAMES,
    frame_2,
    frame_3,
    frame_6,
    frame_d,
    posheaf_ab,
    sheaf_ab,
)

FIXTURE_FRAME_BUILDERS = FIXTURE_FRAMES


@pytest.fixture
def F2():
    return frame_2()


@pytest.fixture
def F3():
    return frame_3()


@pytest.fixture
def FD():
    return frame_d()


@pytest.fixture
def F6():
    return frame_6()


@pytest.fixture
def SAB(FD):
    return sheaf_ab(FD)


@pytest.fixture
def PAB(FD):
    return posheaf_ab(FD)
