"""Small builders shared across test modules."""

from graphcover import Demand, EdsInstance, MulticutInstance, Rat, RootedTree
from graphcover.rationals import ZERO


def two_leaf_star(pi1, pi2, wr=Rat(3), w1=Rat(1), w2=Rat(5)):
    """Root 0 with leaves 1, 2; edge ids are the child ids."""
    tree = RootedTree([0, 0, 0], 0)
    return EdsInstance(
        tree,
        {0: Rat(wr), 1: ZERO, 2: ZERO},
        {1: Rat(w1), 2: Rat(w2)},
        {1: pi1, 2: pi2},
    )


def star_multicut(w1, w2, penalty):
    """Root 0 with leaves 1, 2 and the single demand (1, 2)."""
    tree = RootedTree([0, 0, 0], 0)
    return MulticutInstance(
        tree,
        {v: ZERO for v in range(3)},
        {1: Rat(w1), 2: Rat(w2)},
        [Demand(1, 2, penalty)],
    )
