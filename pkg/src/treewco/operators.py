"""Self-maps, weights, and weighted composition operators on truncations.

The operator built from a weight psi and a self-map phi sends f to the
function v -> psi(v) * f(phi(v)).  On a depth-N truncation the map must
land inside the window; map families that expand depth (doubling on the
integer line) therefore carry an explicit domain core: phi is stored on
the sub-truncation where its images stay inside, and the operator maps
functions on the full window to functions on the core.  Total maps have
core equal to the whole truncation and behave exactly like classic
self-maps.

Every closed-form quantity proved for these operators is computed here
over the stored domain: operator norms, essential-norm tail profiles,
injectivity/surjectivity moduli and their brackets, and isometry
certificates.  Checks that quantify over target vertices (surjectivity,
isometry, the injectivity modulus) accept a ``within_depth`` window; by
default they quantify over the whole truncation, while fixtures built from
infinite families evaluate them on the half-depth window where the window
faithfully sees all preimages.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .certificate import FAILS, HOLDS, Certificate
from .functions import VertexFunction
from .trees import RootedTree

__all__ = [
    "MapSpecError",
    "SelfMap",
    "WeightedCompOp",
    "identity_map",
    "constant_map",
    "map_from_table",
    "zline_fold",
    "zline_double",
    "random_map",
    "random_permutation_map",
    "multiplication_op",
    "composition_op",
    "apply_op",
    "linf_op_norm",
    "linf_ess_norm_tail",
    "linf_ess_norm_profile",
    "lip_bounds",
    "lip_exact_norm",
    "lip_ess_norm_tail",
    "lip_ess_norm_profile",
    "j_linf",
    "k_linf",
    "j_lip_bracket",
    "k_lip_bracket",
    "isometry_check_linf",
    "isometry_check_lip",
    "tail_trend_slope",
]


class MapSpecError(ValueError):
    """Raised when a map table is partial, out of range, or ill-typed."""


@dataclass(frozen=True)
class SelfMap:
    """A vertex-to-vertex map with its preimage index.

    ``image[v]`` is defined for the domain prefix (all vertices of depth
    <= ``domain_depth``; breadth-first ids make that prefix contiguous).
    """

    tree: RootedTree
    image: np.ndarray
    domain_depth: int
    name: str = "table"
    preimages: tuple = field(init=False, repr=False)

    def __post_init__(self):
        t = self.tree
        if not 0 <= self.domain_depth <= t.depth_limit:
            raise MapSpecError(
                f"domain depth {self.domain_depth} outside [0, {t.depth_limit}]"
            )
        img = np.asarray(self.image, dtype=np.int64)
        m = self.domain_size_for(t, self.domain_depth)
        if img.shape != (m,):
            raise MapSpecError(f"expected {m} image entries, got {img.shape}")
        if img.size and (img.min() < 0 or img.max() >= t.n_vertices):
            bad = int(np.where((img < 0) | (img >= t.n_vertices))[0][0])
            raise MapSpecError(
                f"map sends vertex {bad} outside the truncation (to {int(img[bad])})"
            )
        img.setflags(write=False)
        object.__setattr__(self, "image", img)
        pre: list[list[int]] = [[] for _ in range(t.n_vertices)]
        for v in range(m):
            pre[int(img[v])].append(v)
        object.__setattr__(
            self, "preimages", tuple(np.asarray(p, dtype=np.int64) for p in pre)
        )

    @staticmethod
    def domain_size_for(tree: RootedTree, domain_depth: int) -> int:
        return int(np.searchsorted(tree.depth, domain_depth + 1))

    @property
    def domain_size(self) -> int:
        return self.image.size

    @property
    def is_total(self) -> bool:
        return self.domain_depth == self.tree.depth_limit

    @property
    def image_depth(self) -> np.ndarray:
        """|phi(v)| for every domain vertex."""
        return self.tree.depth[self.image]

    @property
    def injective_on_domain(self) -> bool:
        return all(p.size <= 1 for p in self.preimages)

    @property
    def surjective_on_truncation(self) -> bool:
        return all(p.size >= 1 for p in self.preimages)

    def preimage(self, w: int) -> np.ndarray:
        return self.preimages[self.tree.check_vertex(w)]

    def range_profile(self) -> tuple:
        """(d, max |phi(v)| over domain vertices with depth <= d) per depth."""
        dom_depth = self.tree.depth[: self.domain_size]
        img_depth = self.image_depth
        out = []
        running = 0
        for d in range(self.domain_depth + 1):
            sel = img_depth[dom_depth == d]
            if sel.size:
                running = max(running, int(sel.max()))
            out.append((d, running))
        return tuple(out)

    def finite_range_stable(self, margin: int = 3) -> bool:
        """Range maximum flat over the last ``margin`` depths and at least
        ``margin`` short of the window edge: the honest finite-data proxy
        for a finite-range map."""
        prof = self.range_profile()
        if len(prof) <= margin:
            return prof[-1][1] <= self.tree.depth_limit - margin
        return (
            prof[-1][1] == prof[-1 - margin][1]
            and prof[-1][1] <= self.tree.depth_limit - margin
        )

    def as_table(self) -> dict:
        return {int(v): int(self.image[v]) for v in range(self.domain_size)}


def identity_map(tree: RootedTree) -> SelfMap:
    return SelfMap(tree, np.arange(tree.n_vertices, dtype=np.int64), tree.depth_limit, "identity")


def constant_map(tree: RootedTree, target: int) -> SelfMap:
    target = tree.check_vertex(target)
    return SelfMap(
        tree,
        np.full(tree.n_vertices, target, dtype=np.int64),
        tree.depth_limit,
        "constant",
    )


def map_from_table(tree: RootedTree, table: dict) -> SelfMap:
    """Total map from an explicit id table; partial tables are rejected."""
    img = np.full(tree.n_vertices, -1, dtype=np.int64)
    for k, v in table.items():
        img[tree.check_vertex(int(k))] = int(v)
    missing = np.where(img < 0)[0]
    if missing.size:
        raise MapSpecError(
            f"map table is partial: vertex {int(missing[0])} has no image"
        )
    return SelfMap(tree, img, tree.depth_limit, "table")


def zline_fold(tree: RootedTree) -> SelfMap:
    """The folding map on the integer line: n -> n for n >= 0, odd
    negatives to their absolute value, even negatives to n/2."""
    if tree.family != "zline":
        raise MapSpecError("fold map is defined on the line family only")
    img = np.empty(tree.n_vertices, dtype=np.int64)
    for v in range(tree.n_vertices):
        n = int(tree.label_of(v))
        if n >= 0:
            target = n
        elif n % 2 != 0:
            target = -n
        else:
            target = n // 2
        img[v] = tree.vertex_of(target)
    return SelfMap(tree, img, tree.depth_limit, "zfold")


def zline_double(tree: RootedTree) -> SelfMap:
    """n -> 2n on the integer line, stored on the half-depth core where
    the image stays inside the window."""
    if tree.family != "zline":
        raise MapSpecError("doubling map is defined on the line family only")
    core = tree.depth_limit // 2
    m = SelfMap.domain_size_for(tree, core)
    img = np.empty(m, dtype=np.int64)
    for v in range(m):
        img[v] = tree.vertex_of(2 * int(tree.label_of(v)))
    return SelfMap(tree, img, core, "double")


def random_map(tree: RootedTree, rng: np.random.Generator) -> SelfMap:
    return SelfMap(
        tree,
        rng.integers(0, tree.n_vertices, size=tree.n_vertices),
        tree.depth_limit,
        "random",
    )


def random_permutation_map(tree: RootedTree, rng: np.random.Generator) -> SelfMap:
    """Random bijection; on a finite truncation these are exactly the
    surjective self-maps."""
    return SelfMap(tree, rng.permutation(tree.n_vertices), tree.depth_limit, "random-perm")


@dataclass(frozen=True)
class WeightedCompOp:
    """The pair (psi, phi) acting by f -> psi * (f o phi).

    psi is stored on the full truncation; only its values on phi's domain
    enter any operator quantity.
    """

    psi: VertexFunction
    phi: SelfMap
    codomain_tree: RootedTree = field(init=False, repr=False)

    def __post_init__(self):
        if self.psi.tree is not self.phi.tree:
            raise ValueError("weight and map live on different trees")
        object.__setattr__(
            self, "codomain_tree", self.tree.truncate(self.phi.domain_depth)
        )

    @property
    def tree(self) -> RootedTree:
        return self.psi.tree

    @property
    def abs_psi_on_domain(self) -> np.ndarray:
        return np.abs(self.psi.values[: self.phi.domain_size])


def multiplication_op(psi: VertexFunction) -> WeightedCompOp:
    return WeightedCompOp(psi, identity_map(psi.tree))


def composition_op(phi: SelfMap) -> WeightedCompOp:
    ones = VertexFunction(phi.tree, np.ones(phi.tree.n_vertices))
    return WeightedCompOp(ones, phi)


def apply_op(op: WeightedCompOp, f: VertexFunction) -> VertexFunction:
    """psi * (f o phi), a function on the operator's codomain view."""
    if f.tree is not op.tree:
        raise ValueError("argument lives on a different tree")
    m = op.phi.domain_size
    vals = op.psi.values[:m] * f.values[op.phi.image]
    return VertexFunction(op.codomain_tree, vals)


# -- norms on the bounded-function space --------------------------------------


def linf_op_norm(op: WeightedCompOp) -> float:
    """Operator norm on the bounded functions: sup |psi| over the domain."""
    a = op.abs_psi_on_domain
    return float(a.max()) if a.size else 0.0


def linf_ess_norm_tail(op: WeightedCompOp, n: int) -> float:
    """s_n = sup of |psi(v)| over vertices with |phi(v)| > n (0 if none).

    The essential norm equals the limit of s_n; on a truncation only the
    profile is reported.
    """
    _check_tail_depth(op, n)
    sel = op.phi.image_depth > n
    a = op.abs_psi_on_domain[sel]
    return float(a.max()) if a.size else 0.0


def linf_ess_norm_profile(op: WeightedCompOp) -> tuple:
    return tuple(
        (n, linf_ess_norm_tail(op, n)) for n in range(op.tree.depth_limit)
    )


# -- norms from the Lipschitz space to the bounded functions ------------------


def lip_bounds(op: WeightedCompOp) -> tuple[float, float]:
    """Sandwich for the Lipschitz-to-bounded operator norm:
    max(sup|psi|, sup|psi|*|phi|) <= norm <= sup |psi|*(1+|phi|)."""
    a = op.abs_psi_on_domain
    if not a.size:
        return (0.0, 0.0)
    d = op.phi.image_depth
    lower = max(float(a.max()), float((a * d).max()))
    upper = float((a * (1.0 + d)).max())
    return (lower, upper)


def lip_exact_norm(op: WeightedCompOp) -> float:
    """sup |psi(v)| * max(1, |phi(v)|): the sup-sup exchange with the
    point-evaluation norm max(1, |w|) on the Lipschitz unit ball.  The
    oracle module validates that point-evaluation identity independently.
    """
    a = op.abs_psi_on_domain
    if not a.size:
        return 0.0
    d = np.maximum(1, op.phi.image_depth)
    return float((a * d).max())


def lip_ess_norm_tail(op: WeightedCompOp, n: int) -> float:
    """sup of |psi(v)|*|phi(v)| over vertices with |phi(v)| > n (0 if none)."""
    _check_tail_depth(op, n)
    sel = op.phi.image_depth > n
    a = op.abs_psi_on_domain[sel] * op.phi.image_depth[sel]
    return float(a.max()) if a.size else 0.0


def lip_ess_norm_profile(op: WeightedCompOp) -> tuple:
    return tuple(
        (n, lip_ess_norm_tail(op, n)) for n in range(op.tree.depth_limit)
    )


def _check_tail_depth(op: WeightedCompOp, n: int) -> None:
    if not 0 <= n < op.tree.depth_limit:
        raise IndexError(f"tail depth {n} outside [0, {op.tree.depth_limit})")


def tail_trend_slope(profile) -> float:
    """Least-squares slope of a tail profile; a crude trend summary only."""
    ns = np.asarray([p[0] for p in profile], dtype=np.float64)
    vs = np.asarray([p[1] for p in profile], dtype=np.float64)
    if ns.size < 2:
        return 0.0
    return float(np.polyfit(ns, vs, 1)[0])


# -- minimum moduli ------------------------------------------------------------


def _preimage_sup(op: WeightedCompOp, w: int) -> float | None:
    pre = op.phi.preimages[w]
    if pre.size == 0:
        return None
    return float(np.abs(op.psi.values[pre]).max())


def _window_vertices(op: WeightedCompOp, within_depth: int | None) -> np.ndarray:
    t = op.tree
    limit = t.depth_limit if within_depth is None else within_depth
    if not 0 <= limit <= t.depth_limit:
        raise IndexError(f"window depth {limit} outside [0, {t.depth_limit}]")
    return np.arange(SelfMap.domain_size_for(t, limit), dtype=np.int64)


def j_linf(op: WeightedCompOp, within_depth: int | None = None) -> float:
    """Injectivity modulus on the bounded functions: 0 unless every target
    vertex (in the window) has a preimage, else the smallest preimage sup
    of |psi|."""
    best = np.inf
    for w in _window_vertices(op, within_depth):
        s = _preimage_sup(op, int(w))
        if s is None:
            return 0.0
        best = min(best, s)
    return float(best) if np.isfinite(best) else 0.0


def k_linf(op: WeightedCompOp) -> float:
    """Surjectivity modulus on the bounded functions: inf |psi| when phi is
    injective, 0 otherwise (a zero of psi forces 0 through the infimum)."""
    if not op.phi.injective_on_domain:
        return 0.0
    a = op.abs_psi_on_domain
    return float(a.min()) if a.size else 0.0


def j_lip_bracket(
    op: WeightedCompOp, within_depth: int | None = None
) -> tuple[float, float]:
    """Bracket (M/3, M) for the Lipschitz-to-bounded injectivity modulus,
    M the inf-sup of |psi| over preimages; (0, 0) without surjectivity."""
    m = j_linf(op, within_depth)
    return (m / 3.0, m)


def k_lip_bracket(op: WeightedCompOp) -> tuple[float, float]:
    """Bracket for the Lipschitz-to-bounded surjectivity modulus:
    (inf|psi|/3, inf |psi|*(1+|phi|)) when phi is injective and psi has no
    zero; (0, 0) otherwise."""
    a = op.abs_psi_on_domain
    if not op.phi.injective_on_domain or not a.size or float(a.min()) == 0.0:
        return (0.0, 0.0)
    upper = float((a * (1.0 + op.phi.image_depth)).min())
    return (float(a.min()) / 3.0, upper)


# -- isometry certificates ------------------------------------------------------


def isometry_check_linf(
    op: WeightedCompOp, within_depth: int | None = None, tol: float = 1e-9
) -> Certificate:
    """Isometry on the bounded functions: every window vertex must be
    covered and have preimage sup of |psi| equal to 1."""
    t = op.tree
    window = t.depth_limit if within_depth is None else within_depth
    criterion = (
        "isometry on the bounded functions iff the map covers every vertex "
        "and sup of |psi| over each preimage equals 1"
    )
    profile = []
    running = np.inf
    failing = None
    reason = ""
    for w in _window_vertices(op, within_depth):
        s = _preimage_sup(op, int(w))
        if s is None:
            if failing is None:
                failing, reason = int(w), "vertex has no preimage in the window"
            running = 0.0
        else:
            if abs(s - 1.0) > tol and failing is None:
                failing, reason = int(w), f"preimage sup of |psi| is {s:.12g}, not 1"
            running = min(running, s)
        d = t.depth_of(int(w))
        if not profile or profile[-1][0] != d:
            profile.append([d, running if np.isfinite(running) else 0.0])
        else:
            profile[-1][1] = running if np.isfinite(running) else 0.0
    witnesses = {"window_depth": window}
    if failing is not None:
        witnesses.update({"vertex": failing, "reason": reason})
    return Certificate(
        statement="Linf.Isometry",
        verdict=FAILS if failing is not None else HOLDS,
        criterion=criterion,
        witnesses=witnesses,
        depth_profile=tuple((int(d), float(v)) for d, v in profile),
        window_depth=window,
    )


def isometry_check_lip(
    op: WeightedCompOp, within_depth: int | None = None, tol: float = 1e-9
) -> Certificate:
    """No operator from the Lipschitz space to the bounded functions is an
    isometry; always returns Holds with an explicit witness."""
    t = op.tree
    window = t.depth_limit if within_depth is None else within_depth
    if t.depth_limit < 2:
        raise IndexError("need a vertex deeper than 1 to exhibit the witness")
    criterion = (
        "never an isometry from the Lipschitz space to the bounded "
        "functions: an uncovered vertex kills a unit indicator, and a "
        "covered vertex deeper than 1 forces operator norm above 1"
    )
    witnesses: dict = {"window_depth": window}
    uncovered = None
    for w in _window_vertices(op, within_depth):
        if op.phi.preimages[int(w)].size == 0:
            uncovered = int(w)
            break
    if uncovered is not None:
        witnesses.update(
            {
                "vertex": uncovered,
                "reason": "no preimage: the unit indicator at this vertex maps to 0",
            }
        )
        return Certificate(
            "Lip.NoIsometry", HOLDS, criterion, witnesses, (), window
        )
    w = int(t.layer(2)[0])
    s = _preimage_sup(op, w)
    if s is None:
        witnesses.update(
            {
                "vertex": w,
                "reason": "no preimage: the unit indicator at this vertex maps to 0",
            }
        )
    elif abs(s - 1.0) > tol:
        witnesses.update(
            {
                "vertex": w,
                "reason": (
                    f"image of the unit indicator has sup norm {s:.12g}, not 1"
                ),
            }
        )
    else:
        bound = t.depth_of(w) * s
        witnesses.update(
            {
                "vertex": w,
                "reason": (
                    "an isometry would have norm 1, but the lower bound "
                    f"|w| * preimage sup = {bound:.12g} exceeds 1"
                ),
                "lower_bound": bound,
            }
        )
    return Certificate("Lip.NoIsometry", HOLDS, criterion, witnesses, (), window)
