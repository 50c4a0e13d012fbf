"""Brute-force extremal oracles for the closed-form operator quantities.

Everything here re-evaluates norms from raw arrays on purpose: the point
of an oracle is to confirm the formula path, so it must not call it.  The
only formula value an oracle report quotes is the one it is being compared
against, clearly labeled as such.

Search modes are deterministic and desk-scale: exhaustive sign-pattern
enumeration under hard size caps (refusing, not degrading, beyond them),
a one-parameter path-extremal family, and a multi-start exact coordinate
ascent on the Rayleigh-style ratio |f(w)| / lip-norm(f).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .functions import VertexFunction
from .operators import SelfMap, WeightedCompOp, j_linf
from .trees import RootedTree

__all__ = [
    "OracleResult",
    "OracleSizeError",
    "norm_oracle_linf",
    "point_eval_lip_norm",
    "norm_oracle_lip",
    "j_oracle_linf_bracket",
    "surjectivity_infeasibility",
]

MAX_EXHAUSTIVE_VERTICES_MAX = 16
MAX_EXHAUSTIVE_VERTICES_MIN = 12
MAX_PATTERNS = 2_000_000
_CHUNK = 1 << 15


class OracleSizeError(ValueError):
    """Search space exceeds the deterministic budget; caller may retry with
    the coordinate-ascent mode where one exists."""


@dataclass(frozen=True)
class OracleResult:
    quantity: str
    value: float
    method: str
    search_size: int
    witness: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "quantity": self.quantity,
            "value": self.value,
            "method": self.method,
            "search_size": self.search_size,
            "witness": self.witness,
            "extra": self.extra,
        }


# -- independent norm evaluation (no reuse of the formula path) ----------------


def _lip_norm_raw(tree: RootedTree, values: np.ndarray) -> float:
    safe_parent = np.where(tree.parent < 0, 0, tree.parent)
    inc = np.abs(values - values[safe_parent])
    inc[0] = 0.0
    return float(abs(values[0]) + (inc.max() if inc.size else 0.0))


def _composed_sup_raw(op: WeightedCompOp, f_values: np.ndarray) -> float:
    m = op.phi.domain_size
    out = np.abs(op.psi.values[:m] * f_values[op.phi.image])
    return float(out.max()) if out.size else 0.0


# -- operator norm on the bounded functions ------------------------------------


def norm_oracle_linf(
    op: WeightedCompOp,
    grid=(-1.0, 0.0, 1.0),
    method: str = "exhaustive",
) -> OracleResult:
    """Max of the composed sup norm over grid-valued unit functions.

    Only values on the range of the map influence the operator, so the
    enumeration runs over range vertices; when the range misses some
    vertex, sup norm 1 is realized off range and every grid pattern on the
    range is admissible.
    """
    t = op.tree
    m = op.phi.domain_size
    a_psi = np.abs(op.psi.values[:m])
    range_ids = np.unique(op.phi.image) if m else np.empty(0, dtype=np.int64)
    k = range_ids.size
    col = np.searchsorted(range_ids, op.phi.image) if m else np.empty(0, dtype=np.int64)
    levels = np.asarray(sorted(grid), dtype=np.float64)
    if 1.0 not in levels:
        raise ValueError("value grid must contain 1.0 to reach the unit sphere")

    if method == "ascent":
        # per-coordinate objective is separable: each range value is best
        # pushed to a grid extreme; one sweep is exact
        f = np.zeros(t.n_vertices)
        for w in range_ids:
            best_v, best_t = -1.0, 0.0
            for lev in levels:
                f[w] = lev
                val = _composed_sup_raw(op, f)
                if val > best_v:
                    best_v, best_t = val, lev
            f[w] = best_t
        if k < t.n_vertices:
            off = np.setdiff1d(np.arange(t.n_vertices), range_ids)
            f[off] = 1.0
        elif np.abs(f).max() < 1.0:
            f[int(range_ids[0])] = 1.0
        value = _composed_sup_raw(op, f)
        return OracleResult(
            quantity="OpNormLinf",
            value=value,
            method="GridRefine",
            search_size=int(k * levels.size),
            witness={"maximizer": {int(v): float(f[v]) for v in range(t.n_vertices)}},
        )

    if method != "exhaustive":
        raise ValueError(f"unknown method {method!r}")
    if t.n_vertices > MAX_EXHAUSTIVE_VERTICES_MAX:
        raise OracleSizeError(
            f"{t.n_vertices} vertices exceed the exhaustive cap "
            f"{MAX_EXHAUSTIVE_VERTICES_MAX}; use method='ascent'"
        )
    n_patterns = levels.size**k
    if n_patterns > MAX_PATTERNS:
        raise OracleSizeError(
            f"{n_patterns} grid patterns exceed the budget {MAX_PATTERNS}; "
            "use method='ascent'"
        )
    need_unit_on_range = k == t.n_vertices
    best = -1.0
    best_pattern = None
    searched = 0
    for P in _grid_chunks(k, levels):
        absP = np.abs(P)
        if need_unit_on_range:
            ok = absP.max(axis=1) == 1.0
            if not ok.any():
                searched += P.shape[0]
                continue
            P, absP = P[ok], absP[ok]
        vals = (a_psi[None, :] * absP[:, col]).max(axis=1) if m else np.zeros(P.shape[0])
        i = int(np.argmax(vals)) if vals.size else 0
        if vals.size and float(vals[i]) > best:
            best = float(vals[i])
            best_pattern = P[i].copy()
        searched += P.shape[0]
    f = np.zeros(t.n_vertices)
    if best_pattern is not None:
        f[range_ids] = best_pattern
    if np.abs(f).max() < 1.0:
        off = np.setdiff1d(np.arange(t.n_vertices), range_ids)
        f[off[0] if off.size else 0] = 1.0
    return OracleResult(
        quantity="OpNormLinf",
        value=max(best, 0.0),
        method="ExhaustiveSigns",
        search_size=searched,
        witness={"maximizer": {int(v): float(f[v]) for v in range(t.n_vertices)}},
    )


def _grid_chunks(k: int, levels: np.ndarray):
    """Yield (chunk, k) arrays covering all levels**k patterns."""
    L = levels.size
    total = L**k
    if k == 0:
        yield np.zeros((1, 0))
        return
    powers = L ** np.arange(k, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        digits = (idx[:, None] // powers[None, :]) % L
        yield levels[digits]


# -- point evaluation on the Lipschitz unit ball --------------------------------


def point_eval_lip_norm(
    tree: RootedTree, w: int, method: str = "path", seed: int = 0
) -> OracleResult:
    """sup { |f(w)| : lip-norm(f) <= 1 } by explicit search.

    "path": maximize over the radial family a + (1-a) * min(depth, |w|),
    a in [0, 1].  "ascent": exact coordinate ascent on |f(w)| / lip-norm(f)
    over all vertex values, from an indicator seed plus random starts.
    """
    w = tree.check_vertex(w)
    if method == "path":
        return _point_eval_path(tree, w)
    if method == "ascent":
        return _point_eval_ascent(tree, w, seed)
    raise ValueError(f"unknown method {method!r}")


def _point_eval_path(tree: RootedTree, w: int) -> OracleResult:
    dw = tree.depth_of(w)
    radial = np.minimum(tree.depth, dw).astype(np.float64)
    a_grid = np.linspace(0.0, 1.0, 21)
    best, best_a = -1.0, 0.0
    for a in a_grid:
        val = a + (1.0 - a) * dw
        if val > best:
            best, best_a = float(val), float(a)
    f = best_a + (1.0 - best_a) * radial
    norm = _lip_norm_raw(tree, f)
    return OracleResult(
        quantity="PointEvalNormLip",
        value=best,
        method="PathExtremal",
        search_size=a_grid.size,
        witness={
            "vertex": int(w),
            "maximizer": {int(v): float(f[v]) for v in range(tree.n_vertices)},
            "maximizer_lip_norm": norm,
        },
    )


def _point_eval_ascent(tree: RootedTree, w: int, seed: int) -> OracleResult:
    n = tree.n_vertices
    rng = np.random.default_rng((seed, w))
    starts = ["indicator", "constant", 0, 1]
    best_ratio = 0.0
    best_f = None
    evals = 0
    for s in starts:
        if s == "indicator":
            f = np.zeros(n)
            f[w] = 1.0
        elif s == "constant":
            f = np.ones(n)
        else:
            f = rng.uniform(-1.0, 1.0, n)
            f[w] += 1.0
        ratio, f, steps = _ratio_ascent(tree, w, f)
        evals += steps
        if ratio > best_ratio:
            best_ratio, best_f = ratio, f
    norm = _lip_norm_raw(tree, best_f)
    if norm > 0:
        best_f = best_f / norm
    return OracleResult(
        quantity="PointEvalNormLip",
        value=best_ratio,
        method="GridRefine",
        search_size=evals,
        witness={
            "vertex": int(w),
            "maximizer": {int(v): float(best_f[v]) for v in range(n)},
            "maximizer_lip_norm": _lip_norm_raw(tree, best_f),
        },
    )


def _ratio_ascent(tree: RootedTree, w: int, f: np.ndarray, max_passes: int = 200):
    """Exact 1-D maximization of |f(w)| / lip-norm(f) one vertex at a time.

    On each linear piece of the denominator the ratio is monotone in the
    coordinate, so the argmax lies on a breakpoint.  Ties on the root path
    of w push the value outward (building the ramp out of flat plateaus);
    ties elsewhere take the Chebyshev center of the neighbor values so
    off-path increments die out instead of pinning the denominator.
    """
    n = tree.n_vertices
    f = f.astype(np.float64).copy()
    safe_parent = np.where(tree.parent < 0, 0, tree.parent)
    on_path = np.zeros(n, dtype=bool)
    on_path[tree.root_path(w)] = True
    evals = 0
    last = -1.0
    for _ in range(max_passes):
        for u in range(n):
            inc = np.abs(f - f[safe_parent])
            inc[0] = 0.0
            involved = [u] if u != 0 else []
            involved += [int(c) for c in tree.children[u]]
            mask = np.ones(n, dtype=bool)
            mask[involved] = False
            mask[0] = False
            c_other = float(inc[mask].max()) if mask.any() else 0.0
            anchors = []
            if u != 0:
                anchors.append(float(f[tree.parent[u]]))
            anchors.extend(float(f[c]) for c in tree.children[u])
            big = 4.0 * (np.abs(f).max() + 1.0)
            cands = {0.0, float(f[u]), big, -big}
            for b in anchors:
                cands.update((b, b + c_other, b - c_other, b + 1.0, b - 1.0))
            for i, b1 in enumerate(anchors):
                for b2 in anchors[i + 1 :]:
                    cands.add((b1 + b2) / 2.0)
            if anchors:
                cands.add((min(anchors) + max(anchors)) / 2.0)
            scored = []
            for t in cands:
                scored.append((t, _ratio_at(tree, w, f, u, t, anchors, c_other)))
                evals += 1
            top = max(r for _, r in scored)
            ties = [t for t, r in scored if r >= top - 1e-13]
            if on_path[u]:
                f[u] = max(ties, key=abs)
            elif anchors:
                center = (min(anchors) + max(anchors)) / 2.0
                f[u] = min(ties, key=lambda t: abs(t - center))
            else:
                f[u] = ties[0]
        ratio = _ratio_value(tree, w, f)
        if ratio <= last + 1e-12:
            break
        last = ratio
    return _ratio_value(tree, w, f), f, evals


def _ratio_at(tree, w, f, u, t, anchors, c_other) -> float:
    num = abs(t) if u == w else abs(f[w])
    root = abs(t) if u == 0 else abs(f[0])
    d = c_other
    for b in anchors:
        d = max(d, abs(t - b))
    denom = root + d
    return num / denom if denom > 0 else 0.0


def _ratio_value(tree, w, f) -> float:
    denom = _lip_norm_raw(tree, f)
    return abs(float(f[w])) / denom if denom > 0 else 0.0


# -- operator norm from the Lipschitz space -------------------------------------


def norm_oracle_lip(op: WeightedCompOp, method: str = "path") -> OracleResult:
    """sup over v of |psi(v)| * point-eval-norm(phi(v)).

    The exchange of the two suprema is exact because for fixed v the inner
    problem only sees f through f(phi(v)).
    """
    t = op.tree
    m = op.phi.domain_size
    a_psi = np.abs(op.psi.values[:m])
    cache: dict[int, float] = {}
    searched = 0
    best, best_v = 0.0, None
    for v in range(m):
        wv = int(op.phi.image[v])
        if wv not in cache:
            res = point_eval_lip_norm(t, wv, method=method)
            cache[wv] = res.value
            searched += res.search_size
        val = float(a_psi[v]) * cache[wv]
        if val > best:
            best, best_v = val, v
    return OracleResult(
        quantity="OpNormLip",
        value=best,
        method="PathExtremal" if method == "path" else "GridRefine",
        search_size=searched,
        witness={} if best_v is None else {
            "vertex": int(best_v),
            "target": int(op.phi.image[best_v]),
        },
        extra={"note": "sup over f and sup over v exchanged exactly"},
    )


# -- injectivity modulus upper bound ---------------------------------------------


def j_oracle_linf_bracket(
    op: WeightedCompOp,
    grid=(-1.0, 0.0, 1.0),
    within_depth: int | None = None,
) -> OracleResult:
    """Certified upper bound on the injectivity modulus on the bounded
    functions: the minimum composed sup norm over grid unit functions
    (single-vertex indicators are always among the candidates), reported
    against the closed-form value.

    With ``within_depth`` the search runs over unit functions supported on
    the window, matching the windowed closed form.
    """
    t = op.tree
    limit = t.depth_limit if within_depth is None else within_depth
    n_window = SelfMap.domain_size_for(t, limit)
    lower = j_linf(op, within_depth)
    uncovered = next(
        (int(w) for w in range(n_window) if op.phi.preimages[w].size == 0), None
    )
    if uncovered is not None:
        f = np.zeros(t.n_vertices)
        f[uncovered] = 1.0
        return OracleResult(
            quantity="JLinfUpper",
            value=0.0,
            method="ExhaustiveSigns",
            search_size=1,
            witness={
                "minimizer": {int(v): float(f[v]) for v in range(t.n_vertices)},
                "uncovered_vertex": uncovered,
            },
            extra={"formula_lower": lower, "gap": 0.0 - lower},
        )
    if n_window > MAX_EXHAUSTIVE_VERTICES_MIN:
        raise OracleSizeError(
            f"{n_window} window vertices exceed the min-search cap "
            f"{MAX_EXHAUSTIVE_VERTICES_MIN}"
        )
    levels = np.asarray(sorted(grid), dtype=np.float64)
    if 1.0 not in levels:
        raise ValueError("value grid must contain 1.0 to reach the unit sphere")
    k = n_window
    if levels.size**k > MAX_PATTERNS:
        raise OracleSizeError("grid pattern count exceeds the budget")
    m = op.phi.domain_size
    a_psi = np.abs(op.psi.values[:m])
    in_window = op.phi.image < n_window
    best = np.inf
    best_pattern = None
    searched = 0
    for P in _grid_chunks(k, levels):
        absP = np.abs(P)
        ok = absP.max(axis=1) == 1.0
        P, absP = P[ok], absP[ok]
        if not P.shape[0]:
            searched += _CHUNK
            continue
        # values at images outside the window are zero (f supported inside)
        contrib = np.zeros((P.shape[0], m))
        contrib[:, in_window] = absP[:, op.phi.image[in_window]]
        vals = (a_psi[None, :] * contrib).max(axis=1)
        i = int(np.argmin(vals))
        if float(vals[i]) < best:
            best = float(vals[i])
            best_pattern = P[i].copy()
        searched += P.shape[0]
    gap = best - lower
    if gap < -1e-9:
        raise RuntimeError(
            f"oracle upper bound {best} fell below the closed form {lower}"
        )
    return OracleResult(
        quantity="JLinfUpper",
        value=best,
        method="ExhaustiveSigns",
        search_size=searched,
        witness={
            "minimizer": {int(v): float(best_pattern[v]) for v in range(k)}
        },
        extra={"formula_lower": lower, "gap": gap},
    )


# -- surjectivity infeasibility ----------------------------------------------------


def surjectivity_infeasibility(
    op: WeightedCompOp,
    g: VertexFunction,
    hint: VertexFunction | None = None,
    tol: float = 1e-9,
) -> OracleResult:
    """Certificate that no Lipschitz unit-ball function maps onto g.

    The forced values f(phi(v)) = g(v) / psi(v) determine f on the range
    of the map; the pairwise quotient |f(u) - f(u')| / d(u, u') lower
    bounds the derivative sup of any interpolant, so a quotient above 1 is
    a sound infeasibility witness.  The test is sound but not complete:
    verdicts are "infeasible", "feasible" (with an explicit witness), or
    "undetermined".
    """
    t = op.tree
    cod = op.codomain_tree
    if g.tree.n_vertices != cod.n_vertices:
        raise ValueError("target function must live on the operator's codomain view")
    if not op.phi.injective_on_domain:
        raise ValueError("forced-value inversion needs an injective map")

    if hint is not None:
        if hint.tree is not t:
            raise ValueError("hint must live on the operator's source tree")
        m = op.phi.domain_size
        achieved = op.psi.values[:m] * hint.values[op.phi.image]
        if np.abs(achieved - g.values).max() > tol:
            raise ValueError("hint does not map onto the target function")
        hnorm = _lip_norm_raw(t, hint.values)
        if hnorm <= 1.0 + tol:
            return OracleResult(
                quantity="SurjInfeasibility",
                value=0.0,
                method="IncrementBound",
                search_size=1,
                witness={"feasible_preimage_lip_norm": hnorm},
                extra={"verdict": "feasible"},
            )

    forced: dict[int, float] = {}
    for v in range(op.phi.domain_size):
        psi_v = float(op.psi.values[v])
        g_v = float(g.values[v])
        if abs(psi_v) <= tol:
            if abs(g_v) > tol:
                return OracleResult(
                    quantity="SurjInfeasibility",
                    value=np.inf,
                    method="IncrementBound",
                    search_size=1,
                    witness={
                        "vertex": v,
                        "reason": "weight vanishes where the target is nonzero",
                    },
                    extra={"verdict": "infeasible"},
                )
            continue
        forced[int(op.phi.image[v])] = g_v / psi_v

    keys = sorted(forced)
    best_q, best_pair = 0.0, None
    for i, u in enumerate(keys):
        for u2 in keys[i + 1 :]:
            dist = t.distance(u, u2)
            q = abs(forced[u2] - forced[u]) / dist
            if q > best_q:
                best_q, best_pair = q, (u, u2)
    searched = len(keys) * (len(keys) - 1) // 2

    witness: dict = {
        "forced_values": {int(k): float(forced[k]) for k in keys},
    }
    extra: dict = {
        "note": (
            "pairwise increment quotient lower-bounds the derivative sup of "
            "any interpolant; sound for infeasibility, not complete"
        )
    }
    if best_pair is not None:
        witness.update(
            {
                "pair": [int(best_pair[0]), int(best_pair[1])],
                "pair_distance": int(t.distance(*best_pair)),
                "quotient": best_q,
            }
        )
    if best_q > 1.0 + 1e-12:
        extra["verdict"] = "infeasible"
        return OracleResult(
            "SurjInfeasibility", best_q, "IncrementBound", searched, witness, extra
        )

    # try the canonical interpolant: forced values, parents elsewhere
    f = np.zeros(t.n_vertices)
    f[0] = forced.get(0, 0.0)
    for v in range(1, t.n_vertices):
        f[v] = forced.get(v, f[int(t.parent[v])])
    fnorm = _lip_norm_raw(t, f)
    witness["interpolant_lip_norm"] = fnorm
    extra["verdict"] = "feasible" if fnorm <= 1.0 + tol else "undetermined"
    return OracleResult(
        "SurjInfeasibility", best_q, "IncrementBound", searched, witness, extra
    )
