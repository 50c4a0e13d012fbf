"""Scalar functions on a truncated tree and their discrete calculus.

The derivative of f at a non-root vertex is f(v) - f(parent of v), zero at
the root.  Two norms matter: the sup norm, and the Lipschitz norm
|f(root)| + sup |Df|.  Every quantity here is computed on the truncation;
anything that is really a statement about the infinite tree (membership in
the small-derivative subspace, say) is reported as a per-depth tail
profile, never asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .trees import RootedTree

__all__ = [
    "VertexFunction",
    "NormReport",
    "derivative",
    "norms",
    "growth_check",
    "indicator",
    "sector_indicator",
    "depth_cap",
    "ramp_function",
    "ramp_lip_norm",
    "truncate_beyond",
    "freeze_beyond",
    "random_function",
]


@dataclass(frozen=True)
class VertexFunction:
    """A real value per vertex; immutable, total on the truncation."""

    tree: RootedTree
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (self.tree.n_vertices,):
            raise ValueError(
                f"expected {self.tree.n_vertices} values, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("vertex function values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __call__(self, v: int) -> float:
        return float(self.values[self.tree.check_vertex(v)])

    def __add__(self, other: "VertexFunction") -> "VertexFunction":
        self._check_same_tree(other)
        return VertexFunction(self.tree, self.values + other.values)

    def __sub__(self, other: "VertexFunction") -> "VertexFunction":
        self._check_same_tree(other)
        return VertexFunction(self.tree, self.values - other.values)

    def __mul__(self, scalar: float) -> "VertexFunction":
        return VertexFunction(self.tree, self.values * float(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "VertexFunction":
        return VertexFunction(self.tree, -self.values)

    def _check_same_tree(self, other: "VertexFunction") -> None:
        if other.tree is not self.tree:
            raise ValueError("vertex functions live on different trees")

    @property
    def sup_norm(self) -> float:
        return float(np.abs(self.values).max()) if self.values.size else 0.0

    @property
    def lip_norm(self) -> float:
        return norms(self).lip_norm


@dataclass(frozen=True)
class NormReport:
    """Sup norm, Lipschitz norm, and the derivative tail profile.

    tail_profile[n] = (n, sup of |Df| over vertices deeper than n), for
    0 <= n < N.  It is non-increasing by construction; a small final value
    is evidence (not proof) that f sits in the small-derivative subspace.
    """

    sup_norm: float
    lip_norm: float
    value_at_root: float
    d_sup: float
    tail_profile: tuple

    def tail_value(self, n: int) -> float:
        return self.tail_profile[n][1]


def derivative(f: VertexFunction) -> VertexFunction:
    """Df(v) = f(v) - f(parent(v)) off the root, Df(root) = 0."""
    t = f.tree
    safe_parent = np.where(t.parent < 0, 0, t.parent)
    d = f.values - f.values[safe_parent]
    d[0] = 0.0
    return VertexFunction(t, d)


def norms(f: VertexFunction) -> NormReport:
    t = f.tree
    df = np.abs(derivative(f).values)
    n = t.depth_limit
    # per-depth max of |Df|, then suffix max over depths > n
    per_depth = np.zeros(n + 1)
    np.maximum.at(per_depth, np.asarray(t.depth), df)
    tail = []
    running = 0.0
    suffix = np.zeros(n + 1)
    for d in range(n, -1, -1):
        running = max(running, float(per_depth[d]))
        suffix[d] = running
    for k in range(n):
        tail.append((k, float(suffix[k + 1])))
    d_sup = float(df.max()) if df.size else 0.0
    root_val = float(f.values[0])
    return NormReport(
        sup_norm=f.sup_norm,
        lip_norm=abs(root_val) + d_sup,
        value_at_root=root_val,
        d_sup=d_sup,
        tail_profile=tuple(tail),
    )


def growth_check(f: VertexFunction, tol: float = 1e-9):
    """Verify |f(v)| <= |f(root)| + depth(v) * sup|Df| at every vertex.

    This holds for every function (telescoping along the root path), so a
    False return signals an implementation bug.  Returns (ok, worst vertex,
    smallest slack).
    """
    t = f.tree
    rep = norms(f)
    bound = abs(rep.value_at_root) + t.depth * rep.d_sup
    slack = bound - np.abs(f.values)
    worst = int(np.argmin(slack))
    return bool(slack[worst] >= -tol), worst, float(slack[worst])


def indicator(tree: RootedTree, w: int) -> VertexFunction:
    """The 0/1 function supported on the single vertex w."""
    vals = np.zeros(tree.n_vertices)
    vals[tree.check_vertex(w)] = 1.0
    return VertexFunction(tree, vals)


def sector_indicator(tree: RootedTree, v: int) -> VertexFunction:
    """The 0/1 function supported on v and all its descendants."""
    vals = np.zeros(tree.n_vertices)
    vals[tree.sector(v)] = 1.0
    return VertexFunction(tree, vals)


def depth_cap(tree: RootedTree, cap: int) -> VertexFunction:
    """f(v) = min(depth(v), cap); unit Lipschitz norm for cap >= 1."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    return VertexFunction(tree, np.minimum(tree.depth, cap).astype(np.float64))


def ramp_function(tree: RootedTree, n: int, r: float) -> VertexFunction:
    """Radial ramp: zero near the root, a power ramp, then a plateau at n.

    f(v) = 0 for depth < sqrt(n), n for depth >= n, and
    (n/(n-sqrt(n))) * (depth - sqrt(n))^(r+1) / (n-sqrt(n))^r between.
    The depth comparison uses the exact real square root.
    """
    if n < 4:
        raise ValueError("n must be >= 4 so that sqrt(n) < n")
    if not 0.0 < r < 1.0:
        raise ValueError("r must lie in (0, 1)")
    if tree.depth_limit < n:
        raise IndexError(
            f"truncation depth {tree.depth_limit} too shallow for plateau at {n}"
        )
    s = math.sqrt(n)
    d = tree.depth.astype(np.float64)
    mid = (n / (n - s)) * np.maximum(d - s, 0.0) ** (r + 1) / (n - s) ** r
    vals = np.where(d < s, 0.0, np.where(d >= n, float(n), mid))
    return VertexFunction(tree, vals)


def ramp_lip_norm(n: int, r: float) -> float:
    """Exact Lipschitz norm of ramp_function(n, r): the deepest in-ramp
    increment, (n/(n-sqrt(n))) * ((n-sqrt(n))^(r+1) - (n-sqrt(n)-1)^(r+1))
    / (n-sqrt(n))^r.  Tends to r+1 as n grows."""
    s = math.sqrt(n)
    x = n - s
    return (n / x) * (x ** (r + 1) - (x - 1) ** (r + 1)) / x**r


def truncate_beyond(f: VertexFunction, depth: int) -> VertexFunction:
    """Keep f on depths <= depth, zero beyond."""
    t = f.tree
    if not 0 <= depth <= t.depth_limit:
        raise IndexError(f"depth {depth} outside [0, {t.depth_limit}]")
    return VertexFunction(t, np.where(t.depth <= depth, f.values, 0.0))


def freeze_beyond(f: VertexFunction, depth: int) -> VertexFunction:
    """Keep f on depths <= depth; beyond, take the value at the depth-n
    ancestor on the root path (so increments vanish past the cut)."""
    t = f.tree
    if not 0 <= depth <= t.depth_limit:
        raise IndexError(f"depth {depth} outside [0, {t.depth_limit}]")
    anchor = np.arange(t.n_vertices, dtype=np.int64)
    # walk each too-deep vertex up to the cut, one layer at a time
    for _ in range(t.depth_limit - depth):
        deep = t.depth[anchor] > depth
        anchor[deep] = t.parent[anchor[deep]]
    return VertexFunction(t, f.values[anchor])


def random_function(tree: RootedTree, rng: np.random.Generator, scale: float = 1.0) -> VertexFunction:
    """Uniform random values in [-scale, scale]; deterministic per rng state."""
    return VertexFunction(tree, rng.uniform(-scale, scale, tree.n_vertices))
