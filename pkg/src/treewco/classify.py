"""Certificates for boundedness, compactness, isometry, and bounded-below.

Verdict discipline: a statement the finite window genuinely decides
(isometry inside a stated window, coverage by the stored map) gets
Holds/Fails with a witness; statements about limits get TrendConsistent or
TrendInconsistent, judged on the last three entries of a depth schedule.
The default schedule is geometric (1, 2, 4, ..., N) so that slow algebraic
tails are still visible as decay across schedule points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .certificate import (
    FAILS,
    HOLDS,
    TREND_CONSISTENT,
    TREND_INCONSISTENT,
    Certificate,
)
from .functions import VertexFunction
from .operators import (
    SelfMap,
    WeightedCompOp,
    composition_op,
    identity_map,
    isometry_check_linf,
    isometry_check_lip,
    j_linf,
    j_lip_bracket,
    linf_ess_norm_tail,
    linf_op_norm,
    lip_bounds,
    lip_exact_norm,
    lip_ess_norm_tail,
    zline_double,
    zline_fold,
)
from .trees import zline

__all__ = [
    "TrendConfig",
    "default_schedule",
    "classify_linf",
    "classify_lip",
    "classify_operator",
    "seven_equivalences",
    "Fixture",
    "bundled_fixtures",
]


@dataclass(frozen=True)
class TrendConfig:
    """Thresholds for the finite-data trend proxies (configuration, not math)."""

    decay_factor: float = 1.5
    zero_tol: float = 1e-6
    growth_factor: float = 1.05
    stability_margin: int = 3
    isometry_tol: float = 1e-9


def default_schedule(depth_limit: int) -> tuple:
    """Geometric depths 1, 2, 4, ... capped and topped off with N."""
    out = []
    d = 1
    while d < depth_limit:
        out.append(d)
        d *= 2
    if depth_limit >= 1:
        out.append(depth_limit)
    return tuple(out)


def _check_schedule(schedule, depth_limit: int) -> tuple:
    sched = tuple(int(d) for d in schedule)
    if not sched or any(not 1 <= d <= depth_limit for d in sched):
        raise ValueError(f"schedule must be within 1..{depth_limit}")
    return sched


def _decays(values, cfg: TrendConfig) -> bool:
    tail = list(values)[-3:]
    if tail[-1] < cfg.zero_tol:
        return True
    if len(tail) < 3:
        return False
    return tail[0] >= cfg.decay_factor * tail[-1]


def _stays_bounded(values, cfg: TrendConfig) -> bool:
    tail = list(values)[-2:]
    if len(tail) < 2:
        return True
    return tail[-1] <= cfg.growth_factor * max(tail[0], cfg.zero_tol)


def _prefix_sup_profile(op: WeightedCompOp, quantity: np.ndarray, schedule) -> tuple:
    """(d, sup of quantity over domain vertices with depth <= d) per schedule."""
    dom_depth = op.tree.depth[: op.phi.domain_size]
    out = []
    for d in schedule:
        sel = quantity[dom_depth <= d]
        out.append((d, float(sel.max()) if sel.size else 0.0))
    return tuple(out)


def classify_linf(
    op: WeightedCompOp,
    schedule=None,
    window_depth: int | None = None,
    config: TrendConfig | None = None,
) -> list[Certificate]:
    """Certificates for the operator acting on the bounded functions."""
    cfg = config or TrendConfig()
    t = op.tree
    sched = _check_schedule(schedule or default_schedule(t.depth_limit), t.depth_limit)
    certs: list[Certificate] = []

    a_psi = np.abs(op.psi.values[: op.phi.domain_size])
    bounded_profile = _prefix_sup_profile(op, a_psi, sched)
    bounded_vals = [v for _, v in bounded_profile]
    certs.append(
        Certificate(
            statement="Linf.Bounded",
            verdict=TREND_CONSISTENT if _stays_bounded(bounded_vals, cfg) else TREND_INCONSISTENT,
            criterion=(
                "bounded on the bounded functions iff the weight is bounded; "
                "the operator norm equals sup |psi|"
            ),
            witnesses={"sup_psi": float(linf_op_norm(op))},
            depth_profile=bounded_profile,
            window_depth=window_depth,
        )
    )

    tail_profile = tuple((d, linf_ess_norm_tail(op, d - 1)) for d in sched)
    tail_vals = [v for _, v in tail_profile]
    if op.phi.finite_range_stable(cfg.stability_margin):
        verdict = HOLDS
        witnesses = {
            "finite_range_max_depth": int(op.phi.range_profile()[-1][1]),
            "reason": "map range stabilized strictly inside the window",
        }
    else:
        verdict = TREND_CONSISTENT if _decays(tail_vals, cfg) else TREND_INCONSISTENT
        witnesses = {"final_tail": tail_vals[-1]}
    certs.append(
        Certificate(
            statement="Linf.Compact",
            verdict=verdict,
            criterion=(
                "compact on the bounded functions iff the map has finite range "
                "or |psi(v)| tends to 0 whenever |phi(v)| grows; the essential "
                "norm is the tail limit of sup |psi|"
            ),
            witnesses=witnesses,
            depth_profile=tail_profile,
            window_depth=window_depth,
        )
    )

    certs.append(isometry_check_linf(op, window_depth, cfg.isometry_tol))

    j = j_linf(op, window_depth)
    witnesses = {"injectivity_modulus": j}
    witnesses.update(_bounded_below_witness(op, window_depth))
    certs.append(
        Certificate(
            statement="Linf.BoundedBelow",
            verdict=HOLDS if j > 0 else FAILS,
            criterion=(
                "bounded below on the bounded functions iff the map covers "
                "every vertex and the smallest preimage sup of |psi| is positive"
            ),
            witnesses=witnesses,
            depth_profile=(),
            window_depth=window_depth if window_depth is not None else t.depth_limit,
        )
    )
    return certs


def _bounded_below_witness(op: WeightedCompOp, window_depth: int | None) -> dict:
    """The vertex deciding the inf-sup: the first uncovered one, or the one
    with the smallest preimage sup of |psi|."""
    t = op.tree
    limit = t.depth_limit if window_depth is None else window_depth
    n_window = SelfMap.domain_size_for(t, limit)
    best_w, best = None, np.inf
    for w in range(n_window):
        pre = op.phi.preimages[w]
        if pre.size == 0:
            return {"vertex": int(w), "reason": "no preimage in the window"}
        s = float(np.abs(op.psi.values[pre]).max())
        if s < best:
            best_w, best = int(w), s
    if best_w is None:
        return {}
    return {"vertex": best_w, "preimage_sup": best}


def classify_lip(
    op: WeightedCompOp,
    schedule=None,
    window_depth: int | None = None,
    config: TrendConfig | None = None,
) -> list[Certificate]:
    """Certificates for the operator from the Lipschitz space to the
    bounded functions."""
    cfg = config or TrendConfig()
    t = op.tree
    sched = _check_schedule(schedule or default_schedule(t.depth_limit), t.depth_limit)
    certs: list[Certificate] = []

    a_psi = np.abs(op.psi.values[: op.phi.domain_size])
    reach = a_psi * (1.0 + op.phi.image_depth)
    bounded_profile = _prefix_sup_profile(op, reach, sched)
    bounded_vals = [v for _, v in bounded_profile]
    lo, up = lip_bounds(op)
    certs.append(
        Certificate(
            statement="Lip.Bounded",
            verdict=TREND_CONSISTENT if _stays_bounded(bounded_vals, cfg) else TREND_INCONSISTENT,
            criterion=(
                "bounded from the Lipschitz space iff sup |psi(v)|(1+|phi(v)|) "
                "is finite; the norm lies between max(sup|psi|, sup|psi||phi|) "
                "and sup |psi|(1+|phi|)"
            ),
            witnesses={"lower_bound": lo, "upper_bound": up, "exact_norm": lip_exact_norm(op)},
            depth_profile=bounded_profile,
            window_depth=window_depth,
        )
    )

    tail_profile = tuple((d, lip_ess_norm_tail(op, d - 1)) for d in sched)
    tail_vals = [v for _, v in tail_profile]
    if op.phi.finite_range_stable(cfg.stability_margin):
        verdict = HOLDS
        witnesses = {
            "finite_range_max_depth": int(op.phi.range_profile()[-1][1]),
            "reason": "map range stabilized strictly inside the window",
        }
    else:
        verdict = TREND_CONSISTENT if _decays(tail_vals, cfg) else TREND_INCONSISTENT
        witnesses = {"final_tail": tail_vals[-1]}
    certs.append(
        Certificate(
            statement="Lip.Compact",
            verdict=verdict,
            criterion=(
                "compact from the Lipschitz space iff |psi(v)||phi(v)| tends "
                "to 0 whenever |phi(v)| grows; the essential norm is the tail "
                "limit of sup |psi||phi|"
            ),
            witnesses=witnesses,
            depth_profile=tail_profile,
            window_depth=window_depth,
        )
    )

    if t.depth_limit >= 2:
        certs.append(isometry_check_lip(op, window_depth, cfg.isometry_tol))

    lo_j, up_j = j_lip_bracket(op, window_depth)
    witnesses = {"bracket": [lo_j, up_j]}
    witnesses.update(_bounded_below_witness(op, window_depth))
    certs.append(
        Certificate(
            statement="Lip.BoundedBelow",
            verdict=HOLDS if lo_j > 0 else FAILS,
            criterion=(
                "bounded below from the Lipschitz space iff the map covers "
                "every vertex and M = inf-sup of |psi| over preimages is "
                "positive; the modulus lies in [M/3, M]"
            ),
            witnesses=witnesses,
            depth_profile=(),
            window_depth=window_depth if window_depth is not None else t.depth_limit,
        )
    )
    return certs


def classify_operator(
    op: WeightedCompOp,
    schedule=None,
    window_depth: int | None = None,
    config: TrendConfig | None = None,
) -> dict:
    """Both certificate sets plus automatic cross-implication checks."""
    cfg = config or TrendConfig()
    linf = classify_linf(op, schedule, window_depth, cfg)
    lip = classify_lip(op, schedule, window_depth, cfg)
    by = {c.statement: c for c in linf + lip}

    # isometry implies bounded below on the same window
    if by["Linf.Isometry"].verdict == HOLDS and by["Linf.BoundedBelow"].verdict != HOLDS:
        raise RuntimeError("isometry certificate without bounded-below certificate")
    # a bounded weight together with a bounded weighted-reach profile must
    # yield the Lipschitz boundedness verdict
    reach_vals = [v for _, v in by["Lip.Bounded"].depth_profile]
    if (
        by["Linf.Bounded"].verdict == TREND_CONSISTENT
        and _stays_bounded(reach_vals, cfg)
        and by["Lip.Bounded"].verdict != TREND_CONSISTENT
    ):
        raise RuntimeError("bounded weight and reach profile without a bounded verdict")
    return {"linf": linf, "lip": lip}


def seven_equivalences(
    phi: SelfMap, config: TrendConfig | None = None
) -> Certificate:
    """For unit weight, the bounded/compact statements across both spaces
    all reduce to the map having finite range; evaluates each item from its
    own datum and checks they agree whenever the window decides them."""
    cfg = config or TrendConfig()
    t = phi.tree
    margin = cfg.stability_margin
    op = composition_op(phi)
    prof = phi.range_profile()
    max_reach = prof[-1][1]
    inside = t.depth_limit - margin

    small_reach = max_reach <= inside
    stable = phi.finite_range_stable(margin)
    lip_tail_zero = any(
        lip_ess_norm_tail(op, n) == 0.0 for n in range(0, max(inside, 0) + 1)
        if n < t.depth_limit
    )
    linf_tail_zero = any(
        linf_ess_norm_tail(op, n) == 0.0 for n in range(0, max(inside, 0) + 1)
        if n < t.depth_limit
    )
    items = {
        "lip_bounded": lip_tail_zero,
        "lip0_bounded": lip_tail_zero,
        "linf_compact": linf_tail_zero,
        "lip_compact": lip_tail_zero,
        "lip0_compact": lip_tail_zero,
        "lip_to_lip_compact": small_reach,
        "finite_range": stable,
    }
    agree = len(set(items.values())) == 1
    if stable and not agree:
        raise RuntimeError("seven-way equivalence broken on a stabilized map")
    if agree:
        verdict = HOLDS if items["finite_range"] else FAILS
    else:
        verdict = TREND_INCONSISTENT
    return Certificate(
        statement="Cphi.SevenEquivalences",
        verdict=verdict,
        criterion=(
            "for unit weight these agree: bounded or compact from the "
            "Lipschitz spaces to the bounded functions, compact on the "
            "bounded functions, compact on the Lipschitz space, and finite "
            "range of the map"
        ),
        witnesses={"items": items, "max_reach": int(max_reach)},
        depth_profile=prof,
    )


# -- bundled fixtures -------------------------------------------------------------


@dataclass(frozen=True)
class Fixture:
    """A named, fully reproducible operator instance with expected verdicts."""

    name: str
    depth: int
    window_depth: int | None
    description: str
    expected: dict
    notes: tuple = ()

    def build(self, depth: int | None = None) -> WeightedCompOp:
        return _build_fixture(self.name, depth or self.depth)

    def window_for(self, depth: int) -> int | None:
        return depth // 2 if self.window_depth is not None else None


def _alternating_sign(label: int) -> float:
    return 1.0 if label % 2 == 0 else -1.0


def _build_fixture(name: str, depth: int) -> WeightedCompOp:
    t = zline(depth)
    labels = np.asarray([int(t.label_of(v)) for v in range(t.n_vertices)])
    if name == "z-isometry":
        psi = np.where((labels < 0) & (labels % 2 != 0), 0.0, 1.0)
        return WeightedCompOp(VertexFunction(t, psi), zline_fold(t))
    if name == "bounded-not-compact":
        phi = identity_map(t)
        psi = 1.0 / (1.0 + np.abs(labels))
        return WeightedCompOp(VertexFunction(t, psi), phi)
    if name == "not-surjective-2n":
        psi = np.where(labels == 0, 1.0, 1.0 / np.where(labels == 0, 1, labels))
        return WeightedCompOp(VertexFunction(t, psi), zline_double(t))
    raise KeyError(f"unknown fixture {name!r}")


def bundled_fixtures() -> list[Fixture]:
    return [
        Fixture(
            name="z-isometry",
            depth=8,
            window_depth=4,
            description=(
                "folding map on the integer line with a 0/1 weight killing "
                "odd negatives: an isometry on the bounded functions"
            ),
            expected={
                "Linf.Isometry": HOLDS,
                "Linf.BoundedBelow": HOLDS,
                "Lip.NoIsometry": HOLDS,
            },
        ),
        Fixture(
            name="bounded-not-compact",
            depth=16,
            window_depth=None,
            description=(
                "identity map with weight 1/(1+|v|): bounded from the "
                "Lipschitz space with tail climbing toward 1, so never "
                "compact; the squared weight is compact"
            ),
            expected={
                "Lip.Bounded": TREND_CONSISTENT,
                "Lip.Compact": TREND_INCONSISTENT,
            },
        ),
        Fixture(
            name="not-surjective-2n",
            depth=8,
            window_depth=4,
            description=(
                "doubling map with weight 1/n (1 at the root): the weighted "
                "reach inf |psi|(1+|phi|) stays positive yet the operator is "
                "not onto, witnessed by an alternating target"
            ),
            expected={"Lip.BoundedBelow": FAILS},
            notes=(
                "computed inf |psi(n)|(1+|phi(n)|) is 1, attained at n = 0; "
                "a reference value of 2 is sometimes quoted for this example "
                "(the infimum over n != 0 only); the surjectivity failure is "
                "unaffected by the discrepancy",
            ),
        ),
    ]


def fixture_by_name(name: str) -> Fixture:
    for fx in bundled_fixtures():
        if fx.name == name:
            return fx
    raise KeyError(f"unknown fixture {name!r}")
