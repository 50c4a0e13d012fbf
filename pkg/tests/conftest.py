from __future__ import annotations

import numpy as np
import pytest

import treewco as tw


@pytest.fixture
def line4():
    return tw.zline(4)


@pytest.fixture
def line6():
    return tw.zline(6)


@pytest.fixture
def homog22():
    return tw.homogeneous(2, 2)


def small_tree_corpus():
    """Trees of at most 16 vertices for exhaustive oracle work."""
    return [
        tw.zline(7),
        tw.zline(5),
        tw.homogeneous(2, 2),
        tw.random_tree(2, seed=5, min_children=1, max_children=3),
    ]


def random_operator(tree, rng, scale=2.0, surjective=False):
    phi = (
        tw.random_permutation_map(tree, rng)
        if surjective
        else tw.random_map(tree, rng)
    )
    return tw.WeightedCompOp(tw.random_function(tree, rng, scale), phi)


def label_fn(tree):
    return np.asarray([int(tree.label_of(v)) for v in range(len(tree))])
