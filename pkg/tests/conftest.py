import pytest

from icecluster.potential import CyclicWord, Potential
from icecluster.quiver import Arrow, IceQuiver


@pytest.fixture
def e1():
    """Triangle quiver: a: 2->1, b: 3->2 frozen, c: 1->3, frozen {2, 3}."""
    return IceQuiver(
        [1, 2, 3], [2, 3],
        [Arrow("a", 2, 1), Arrow("b", 3, 2, frozen=True), Arrow("c", 1, 3)])


@pytest.fixture
def w_abc(e1):
    return Potential(e1, {CyclicWord(("a", "b", "c"), e1): 1})
