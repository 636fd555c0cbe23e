from __future__ import annotations

import pytest

from twoqfa.machines import build_m1, build_m2, build_m3


@pytest.fixture(scope="session")
def m1():
    return build_m1()


@pytest.fixture(scope="session")
def m2_2():
    return build_m2(2)


@pytest.fixture(scope="session")
def m2_5():
    return build_m2(5)


@pytest.fixture(scope="session")
def m2_10():
    return build_m2(10)


@pytest.fixture(scope="session")
def m3_5():
    return build_m3(5)
