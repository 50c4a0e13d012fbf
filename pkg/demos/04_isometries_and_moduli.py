#!/usr/bin/env python3
"""Demo: the fold isometry, minimum moduli, and a surjectivity failure.

The folding map on the integer line with a 0/1 weight is an isometry on
the bounded functions, yet no operator into the bounded functions is an
isometry from the Lipschitz space.  The doubling map shows a positive
weighted reach with surjectivity modulus 0, certified by forced values.
"""

import numpy as np

import treewco as tw


def banner(text):
    print("\n" + "=" * 72)
    print(text)
    print("=" * 72)


def main():
    banner("THE FOLD ISOMETRY ON THE BOUNDED FUNCTIONS")
    fx = tw.fixture_by_name("z-isometry")
    op = fx.build(8)
    t = op.tree
    print("map:   n -> n for n >= 0, odd negatives fold to |n|, evens halve")
    print("weight: 0 on odd negatives, 1 elsewhere")
    cert = tw.isometry_check_linf(op, within_depth=4)
    print("isometry certificate:", cert.verdict, f"(window depth {cert.window_depth})")
    rng = np.random.default_rng(1)
    vals = rng.uniform(-2, 2, len(t))
    vals[t.depth > 4] = 0.0
    f = tw.VertexFunction(t, vals)
    print(f"random f: ||f|| = {f.sup_norm:.6f}, ||op f|| = {tw.apply_op(op, f).sup_norm:.6f}")
    print("injectivity modulus within the window:", tw.j_linf(op, within_depth=4))

    banner("NO ISOMETRY FROM THE LIPSCHITZ SPACE")
    lip_cert = tw.isometry_check_lip(op, within_depth=4)
    print(lip_cert.verdict, "-", lip_cert.witnesses["reason"])

    banner("MINIMUM MODULI AND BRACKETS")
    psi = tw.random_function(t, rng, scale=1.0)
    mult = tw.multiplication_op(psi)
    print(f"multiplication operator: j = k = inf|psi| = {tw.j_linf(mult):.6f}")
    print("fold fixture bracket for the Lipschitz modulus:",
          tw.j_lip_bracket(op, within_depth=4), "(always within [M/3, M])")

    banner("DOUBLING MAP: POSITIVE REACH, SURJECTIVITY MODULUS 0")
    fx2 = tw.fixture_by_name("not-surjective-2n")
    op2 = fx2.build(8)
    a = np.abs(op2.psi.values[: op2.phi.domain_size])
    reach = a * (1.0 + op2.phi.image_depth)
    print(f"inf |psi(n)| (1 + |phi(n)|) = {reach.min():.6f} > 0")
    print("bracket for the surjectivity modulus:", tw.k_lip_bracket(op2))
    cod = op2.codomain_tree
    g = tw.VertexFunction(
        cod,
        np.asarray([1.0 if int(cod.label_of(v)) % 2 == 0 else -1.0
                    for v in range(len(cod))]),
    )
    res = tw.surjectivity_infeasibility(op2, g)
    u, u2 = res.witness["pair"]
    print(f"alternating unit target: verdict {res.extra['verdict']};")
    print(f"forced values at labels {int(op2.tree.label_of(u))} and "
          f"{int(op2.tree.label_of(u2))} differ by "
          f"{res.value * res.witness['pair_distance']:.1f} across distance "
          f"{res.witness['pair_distance']}, so any preimage has derivative "
          f"sup at least {res.value:.2f} > 1")


if __name__ == "__main__":
    main()
