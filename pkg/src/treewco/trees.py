"""Rooted trees as finite depth-N truncations of infinite families.

A tree is stored with canonical dense vertex ids assigned in breadth-first
order, so ids are sorted by depth and every truncation to a smaller depth is
an id prefix.  Vertices at the truncation depth are "frontier" vertices:
they are allowed to be childless because their children simply lie beyond
the window, while an interior childless vertex is rejected (the modeled
infinite trees have no terminal vertex).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "RootedTree",
    "TreeStructureError",
    "zline",
    "homogeneous",
    "random_tree",
    "explicit_tree",
    "zline_vertex",
    "zline_label",
]


class TreeStructureError(ValueError):
    """Raised for disconnected/cyclic input or interior terminal vertices."""


@dataclass(frozen=True)
class RootedTree:
    """Immutable truncated rooted tree.

    parent[v] is the vertex one step toward the root (-1 at the root),
    depth[v] the edge distance to the root, and ``depth_limit`` the
    truncation depth N.  ``labels`` carries the display label of each
    vertex (integers on the line family, original names for explicit
    input, the id itself otherwise).
    """

    parent: np.ndarray
    depth: np.ndarray
    depth_limit: int
    family: str
    labels: tuple
    meta: dict = field(default_factory=dict)
    children: tuple = field(init=False, repr=False)
    _layers: tuple = field(init=False, repr=False)
    _label_index: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.parent.setflags(write=False)
        self.depth.setflags(write=False)
        n = self.parent.size
        kids: list[list[int]] = [[] for _ in range(n)]
        for v in range(1, n):
            kids[int(self.parent[v])].append(v)
        object.__setattr__(
            self, "children", tuple(np.asarray(c, dtype=np.int64) for c in kids)
        )
        layers: list[list[int]] = [[] for _ in range(self.depth_limit + 1)]
        for v in range(n):
            layers[int(self.depth[v])].append(v)
        object.__setattr__(
            self, "_layers", tuple(np.asarray(l, dtype=np.int64) for l in layers)
        )
        object.__setattr__(
            self, "_label_index", {lab: i for i, lab in enumerate(self.labels)}
        )

    # -- basic structure ---------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return self.parent.size

    @property
    def root(self) -> int:
        return 0

    def __len__(self) -> int:
        return self.parent.size

    def check_vertex(self, v: int) -> int:
        v = int(v)
        if not 0 <= v < self.n_vertices:
            raise KeyError(f"vertex {v} not in tree with {self.n_vertices} vertices")
        return v

    def parent_of(self, v: int) -> int:
        v = self.check_vertex(v)
        if v == 0:
            raise KeyError("root has no parent")
        return int(self.parent[v])

    def children_of(self, v: int) -> np.ndarray:
        return self.children[self.check_vertex(v)]

    def depth_of(self, v: int) -> int:
        return int(self.depth[self.check_vertex(v)])

    def is_frontier(self, v: int) -> bool:
        return self.depth_of(v) == self.depth_limit

    def vertices(self) -> np.ndarray:
        return np.arange(self.n_vertices, dtype=np.int64)

    # -- metric / combinatorial queries -------------------------------------

    def layer(self, n: int) -> np.ndarray:
        """All vertices at depth n."""
        if not 0 <= n <= self.depth_limit:
            raise IndexError(f"depth {n} outside [0, {self.depth_limit}]")
        return self._layers[n]

    def ancestor_at_depth(self, v: int, n: int) -> int:
        """The unique vertex on the root path of v at depth n."""
        v = self.check_vertex(v)
        if not 0 <= n <= self.depth_of(v):
            raise IndexError(f"depth {n} not on the root path of vertex {v}")
        while int(self.depth[v]) > n:
            v = int(self.parent[v])
        return v

    def root_path(self, v: int) -> list[int]:
        """Vertices from the root to v, inclusive."""
        v = self.check_vertex(v)
        path = [v]
        while path[-1] != 0:
            path.append(int(self.parent[path[-1]]))
        return path[::-1]

    def distance(self, v: int, w: int) -> int:
        """Edge count of the unique path between v and w."""
        v, w = self.check_vertex(v), self.check_vertex(w)
        dv, dw = int(self.depth[v]), int(self.depth[w])
        total = 0
        while dv > dw:
            v, dv, total = int(self.parent[v]), dv - 1, total + 1
        while dw > dv:
            w, dw, total = int(self.parent[w]), dw - 1, total + 1
        while v != w:
            v, w = int(self.parent[v]), int(self.parent[w])
            total += 2
        return total

    def sector(self, v: int) -> np.ndarray:
        """v together with all its descendants inside the truncation."""
        v = self.check_vertex(v)
        out = []
        stack = [v]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(int(c) for c in self.children[u])
        return np.asarray(sorted(out), dtype=np.int64)

    # -- derived views -------------------------------------------------------

    def truncate(self, depth: int) -> "RootedTree":
        """The sub-tree of all vertices at depth <= ``depth``.

        Because ids are breadth-first, this is an id prefix and ids are
        preserved.
        """
        if not 0 <= depth <= self.depth_limit:
            raise IndexError(f"depth {depth} outside [0, {self.depth_limit}]")
        if depth == self.depth_limit:
            return self
        m = int(np.searchsorted(self.depth, depth + 1))
        return RootedTree(
            parent=self.parent[:m].copy(),
            depth=self.depth[:m].copy(),
            depth_limit=depth,
            family=self.family,
            labels=self.labels[:m],
            meta=dict(self.meta),
        )

    def label_of(self, v: int):
        return self.labels[self.check_vertex(v)]

    def vertex_of(self, label) -> int:
        try:
            return self._label_index[label]
        except KeyError:
            raise KeyError(f"no vertex labeled {label!r}") from None

    def to_dot(self, phi_image: Mapping[int, int] | None = None) -> str:
        """Graphviz DOT text, nodes shaded by depth.

        When ``phi_image`` is given, dashed edges v -> phi(v) overlay the
        self-map on top of the tree edges.
        """
        lines = ["digraph tree {", "  node [style=filled];"]
        nmax = max(self.depth_limit, 1)
        for v in range(self.n_vertices):
            shade = 100 - int(55 * self.depth_of(v) / nmax)
            lines.append(
                f'  v{v} [label="{self.labels[v]}" fillcolor="gray{shade}"];'
            )
        for v in range(1, self.n_vertices):
            lines.append(f"  v{int(self.parent[v])} -> v{v};")
        if phi_image is not None:
            for v in sorted(phi_image):
                lines.append(
                    f"  v{int(v)} -> v{int(phi_image[v])} "
                    "[style=dashed color=blue constraint=false];"
                )
        lines.append("}")
        return "\n".join(lines) + "\n"


# -- builders ----------------------------------------------------------------


def _from_adjacency(
    root_label,
    children_by_label: Mapping,
    depth_limit: int,
    family: str,
    meta: dict | None = None,
) -> RootedTree:
    """BFS-number an adjacency description; children sorted by label."""
    order = [root_label]
    parent_ids = [-1]
    depths = [0]
    index = {root_label: 0}
    head = 0
    while head < len(order):
        lab = order[head]
        d = depths[head]
        if d < depth_limit:
            for c in sorted(children_by_label.get(lab, ()), key=_label_key):
                if c in index:
                    raise TreeStructureError(f"vertex {c!r} reached twice (cycle?)")
                index[c] = len(order)
                order.append(c)
                parent_ids.append(head)
                depths.append(d + 1)
        head += 1
    return RootedTree(
        parent=np.asarray(parent_ids, dtype=np.int64),
        depth=np.asarray(depths, dtype=np.int64),
        depth_limit=depth_limit,
        family=family,
        labels=tuple(order),
        meta=meta or {},
    )


def _label_key(lab):
    # Sort ints before anything else so canonical ids are reproducible.
    return (0, lab, "") if isinstance(lab, int) else (1, 0, str(lab))


def zline(depth: int) -> RootedTree:
    """The integer line {-N..N} rooted at 0 with parent(n) = n - sign(n).

    Canonical ids follow the fixed bijection 0 -> 0, n -> 2n-1 for n > 0,
    n -> -2n for n < 0 (breadth-first order with the positive vertex first
    on each layer).
    """
    if depth < 0:
        raise ValueError("depth must be >= 0")
    n = 2 * depth + 1
    parent_ids = np.zeros(n, dtype=np.int64)
    depths = np.zeros(n, dtype=np.int64)
    labels: list[int] = [0] * n
    parent_ids[0] = -1
    for k in range(1, depth + 1):
        pos, neg = 2 * k - 1, 2 * k
        labels[pos], labels[neg] = k, -k
        depths[pos] = depths[neg] = k
        parent_ids[pos] = 0 if k == 1 else 2 * k - 3
        parent_ids[neg] = 0 if k == 1 else 2 * k - 2
    return RootedTree(
        parent=parent_ids,
        depth=depths,
        depth_limit=depth,
        family="zline",
        labels=tuple(labels),
    )


def zline_vertex(tree: RootedTree, n: int) -> int:
    """Canonical id of the integer-labeled vertex n on a line tree."""
    if tree.family != "zline":
        raise ValueError("zline_vertex requires a line-family tree")
    return tree.vertex_of(n)


def zline_label(tree: RootedTree, v: int) -> int:
    if tree.family != "zline":
        raise ValueError("zline_label requires a line-family tree")
    return int(tree.label_of(v))


def homogeneous(q: int, depth: int) -> RootedTree:
    """Homogeneous tree where every vertex has q+1 neighbors.

    Convention: the root gets q+1 children and every other interior
    vertex q children, so all vertices (root included) have degree q+1.
    """
    if q < 2:
        raise ValueError("q must be >= 2")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    parent_ids = [-1]
    depths = [0]
    frontier = [0]
    for d in range(1, depth + 1):
        new_frontier = []
        for p in frontier:
            count = q + 1 if d == 1 else q
            for _ in range(count):
                parent_ids.append(p)
                depths.append(d)
                new_frontier.append(len(parent_ids) - 1)
        frontier = new_frontier
    n = len(parent_ids)
    return RootedTree(
        parent=np.asarray(parent_ids, dtype=np.int64),
        depth=np.asarray(depths, dtype=np.int64),
        depth_limit=depth,
        family="homogeneous",
        labels=tuple(range(n)),
        meta={"q": q},
    )


def random_tree(
    depth: int,
    seed: int,
    min_children: int = 1,
    max_children: int = 3,
) -> RootedTree:
    """Random tree with bounded branching; interior vertices never childless.

    Deterministic for a fixed (seed, bounds).
    """
    if min_children < 1:
        raise ValueError("min_children must be >= 1 (no interior terminal)")
    if max_children < min_children:
        raise ValueError("max_children must be >= min_children")
    rng = np.random.default_rng(seed)
    parent_ids = [-1]
    depths = [0]
    frontier = [0]
    for d in range(1, depth + 1):
        new_frontier = []
        for p in frontier:
            k = int(rng.integers(min_children, max_children + 1))
            for _ in range(k):
                parent_ids.append(p)
                depths.append(d)
                new_frontier.append(len(parent_ids) - 1)
        frontier = new_frontier
    n = len(parent_ids)
    return RootedTree(
        parent=np.asarray(parent_ids, dtype=np.int64),
        depth=np.asarray(depths, dtype=np.int64),
        depth_limit=depth,
        family="random",
        labels=tuple(range(n)),
        meta={"seed": seed, "min_children": min_children, "max_children": max_children},
    )


def explicit_tree(
    edges: Iterable[Sequence], root, depth_limit: int | None = None
) -> RootedTree:
    """Build from an undirected edge list plus a root.

    Rejects disconnected or cyclic input, and any interior vertex without
    children (a terminal vertex strictly inside the truncation).
    """
    adj: dict = {}
    for e in edges:
        if len(e) != 2 or e[0] == e[1]:
            raise TreeStructureError(f"bad edge {e!r}")
        u, v = e
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    if root not in adj and adj:
        raise TreeStructureError(f"root {root!r} not in edge list")
    if not adj:
        adj = {root: set()}
    # orient away from the root
    children: dict = {lab: [] for lab in adj}
    seen = {root}
    queue = [root]
    depth = {root: 0}
    head = 0
    n_edges = sum(len(s) for s in adj.values()) // 2
    while head < len(queue):
        u = queue[head]
        head += 1
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            children[u].append(v)
            depth[v] = depth[u] + 1
            queue.append(v)
    if len(seen) != len(adj):
        raise TreeStructureError("edge list is disconnected from the root")
    if n_edges != len(adj) - 1:
        raise TreeStructureError("edge list contains a cycle")
    max_depth = max(depth.values())
    limit = max_depth if depth_limit is None else depth_limit
    if limit < max_depth:
        raise TreeStructureError(
            f"declared depth {limit} below deepest vertex ({max_depth})"
        )
    for lab, d in depth.items():
        if d < limit and not children[lab]:
            raise TreeStructureError(
                f"interior terminal vertex {lab!r} at depth {d} (< {limit})"
            )
    return _from_adjacency(root, children, limit, "explicit")
