"""Command-line entry points.

Modes: analyze (certificates), norms (weight norms plus operator
quantities), oracle (brute-force cross-check of the closed forms),
examples (run bundled fixtures and diff against golden reports), export
(DOT of the tree with the self-map overlaid).  Exit codes: 0 success,
1 spec error, 2 fixture drift.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .classify import TrendConfig, bundled_fixtures, classify_operator, seven_equivalences
from .functions import norms, random_function
from .io import (
    SpecError,
    canonical_json,
    fixture_report,
    golden_dir,
    load_specs,
    operator_quantities,
)
from .operators import (
    WeightedCompOp,
    linf_op_norm,
    lip_bounds,
    lip_exact_norm,
    random_map,
)
from .oracle import (
    OracleSizeError,
    norm_oracle_linf,
    norm_oracle_lip,
)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tree", help="tree spec JSON path")
    p.add_argument("--psi", help="weight spec JSON path")
    p.add_argument("--phi", help="self-map spec JSON path")
    p.add_argument("--depths", help="comma-separated depth schedule")
    p.add_argument("--window", type=int, default=None, help="window depth for coverage checks")
    p.add_argument("--tol", type=float, default=1e-6, help="trend zero tolerance")
    p.add_argument("--seed", type=int, default=0, help="seed for any randomness")
    p.add_argument("--out", help="output path (stdout when omitted)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treewco",
        description="weighted composition operators on truncated rooted trees",
    )
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in ("analyze", "norms", "oracle", "examples", "export"):
        p = sub.add_parser(mode)
        _add_common(p)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_operator(args) -> WeightedCompOp:
    if not args.tree or not args.psi or not args.phi:
        raise SpecError("args", "analyze/norms need --tree, --psi and --phi")
    _, psi, phi = load_specs(args.tree, args.psi, args.phi)
    return WeightedCompOp(psi, phi)


def _schedule(args, depth_limit: int):
    if not args.depths:
        return None
    try:
        return tuple(int(x) for x in args.depths.split(","))
    except ValueError as exc:
        raise SpecError("args.depths", str(exc)) from exc


def _cmd_analyze(args) -> int:
    op = _load_operator(args)
    cfg = TrendConfig(zero_tol=args.tol)
    sched = _schedule(args, op.tree.depth_limit)
    certs = classify_operator(op, sched, args.window, cfg)
    payload = {
        "schema": 1,
        "certificates": [c.to_json() for c in certs["linf"] + certs["lip"]],
        "quantities": operator_quantities(op, args.window),
    }
    if bool(np.all(op.psi.values == 1.0)):
        payload["seven_equivalences"] = seven_equivalences(op.phi, cfg).to_json()
    _emit(canonical_json(payload), args.out)
    return 0


def _cmd_norms(args) -> int:
    op = _load_operator(args)
    rep = norms(op.psi)
    payload = {
        "schema": 1,
        "psi_norms": {
            "sup_norm": rep.sup_norm,
            "lip_norm": rep.lip_norm,
            "value_at_root": rep.value_at_root,
            "d_sup": rep.d_sup,
            "tail_profile": [[n, v] for n, v in rep.tail_profile],
        },
        "quantities": operator_quantities(op, args.window),
    }
    _emit(canonical_json(payload), args.out)
    return 0


def _cmd_oracle(args) -> int:
    if args.tree and args.psi and args.phi:
        op = _load_operator(args)
    else:
        if not args.tree:
            raise SpecError("args", "oracle needs at least --tree")
        from .io import _read_json, load_tree_spec

        tree = load_tree_spec(_read_json(args.tree), "tree")
        rng = np.random.default_rng(args.seed)
        op = WeightedCompOp(random_function(tree, rng), random_map(tree, rng))
    try:
        linf_res = norm_oracle_linf(op)
    except OracleSizeError:
        linf_res = norm_oracle_linf(op, method="ascent")
    lip_res = norm_oracle_lip(op)
    lo, up = lip_bounds(op)
    payload = {
        "schema": 1,
        "seed": args.seed,
        "linf": {
            "oracle": linf_res.to_json(),
            "formula": linf_op_norm(op),
            "agree": abs(linf_res.value - linf_op_norm(op)) <= 1e-9,
        },
        "lip": {
            "oracle": lip_res.to_json(),
            "formula": lip_exact_norm(op),
            "bounds": [lo, up],
            "agree": abs(lip_res.value - lip_exact_norm(op)) <= 1e-9,
            "within_bounds": lo - 1e-9 <= lip_res.value <= up + 1e-9,
        },
    }
    _emit(canonical_json(payload), args.out)
    return 0


def _cmd_examples(args) -> int:
    gold = golden_dir()
    out_dir = Path(args.out) if args.out else None
    drift = False
    for fx in bundled_fixtures():
        report = canonical_json(fixture_report(fx))
        if out_dir:
            out_dir.mkdir(parents=True, exist_ok=True)
            (out_dir / f"{fx.name}.json").write_text(report, encoding="utf-8")
        gold_path = gold / f"{fx.name}.json"
        if not gold_path.exists():
            print(f"[MISSING] {fx.name}: no golden file at {gold_path}")
            drift = True
            continue
        frozen = gold_path.read_text(encoding="utf-8")
        if frozen != report:
            print(f"[DRIFT] {fx.name}: report differs from golden file")
            drift = True
        else:
            print(f"[OK] {fx.name}")
    return 2 if drift else 0


def _cmd_export(args) -> int:
    if not args.tree:
        raise SpecError("args", "export needs --tree")
    from .io import _read_json, load_map_spec, load_tree_spec

    tree = load_tree_spec(_read_json(args.tree), "tree")
    overlay = None
    if args.phi:
        phi = load_map_spec(_read_json(args.phi), tree, "phi")
        overlay = phi.as_table()
    _emit(tree.to_dot(overlay), args.out)
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "norms": _cmd_norms,
    "oracle": _cmd_oracle,
    "examples": _cmd_examples,
    "export": _cmd_export,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.mode](args)
    except SpecError as exc:
        print(f"spec error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
