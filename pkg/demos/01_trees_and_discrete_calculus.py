#!/usr/bin/env python3
"""Demo: tree families, sectors, and the discrete calculus.

Builds the three tree families, walks the basic metric queries, and shows
the discrete derivative, the two norms, and the growth inequality at work.
"""

import numpy as np

import treewco as tw


def banner(text):
    print("\n" + "=" * 72)
    print(text)
    print("=" * 72)


def main():
    banner("TREE FAMILIES")
    line = tw.zline(4)
    print(f"integer line, depth 4: {len(line)} vertices,",
          "labels", sorted(int(line.label_of(v)) for v in range(len(line))))
    homog = tw.homogeneous(2, 3)
    print(f"homogeneous q=2, depth 3: {len(homog)} vertices",
          f"(root has {len(homog.children_of(0))} children, interior 2)")
    rand = tw.random_tree(4, seed=7)
    print(f"random bounded-degree, depth 4, seed 7: {len(rand)} vertices")

    banner("METRIC QUERIES ON THE LINE")
    v, w = line.vertex_of(-2), line.vertex_of(3)
    print("distance(-2, 3) =", line.distance(v, w))
    print("sector of 2 =", sorted(int(line.label_of(u)) for u in line.sector(line.vertex_of(2))))
    print("layer 2 =", sorted(int(line.label_of(u)) for u in line.layer(2)))
    print("ancestor of -3 at depth 1 =", int(line.label_of(line.ancestor_at_depth(line.vertex_of(-3), 1))))

    banner("DISCRETE DERIVATIVE AND NORMS")
    f = tw.depth_cap(line, 2)           # min(|v|, 2)
    df = tw.derivative(f)
    print("f = min(|v|, 2), values by label:",
          {int(line.label_of(u)): f(u) for u in range(len(line))})
    print("Df values by label:",
          {int(line.label_of(u)): df(u) for u in range(len(line))})
    rep = tw.norms(f)
    print(f"sup norm {rep.sup_norm}, lip norm {rep.lip_norm} (=|f(o)| + sup|Df|)")
    print("derivative tail profile (depth, sup beyond):", list(rep.tail_profile))

    banner("GROWTH INEQUALITY |f(v)| <= |f(o)| + |v| sup|Df|")
    rng = np.random.default_rng(0)
    worst = None
    for _ in range(200):
        g = tw.random_function(rand, rng, scale=5.0)
        ok, vertex, slack = tw.growth_check(g)
        assert ok
        if worst is None or slack < worst[1]:
            worst = (vertex, slack)
    print(f"200 random functions: inequality held every time;")
    print(f"tightest slack {worst[1]:.4f} at vertex {worst[0]}")

    banner("INDICATORS AND SECTOR INDICATORS")
    eta = tw.sector_indicator(homog, int(homog.children_of(0)[0]))
    print("sector indicator lip norm:", tw.norms(eta).lip_norm)
    print("its derivative is the plain indicator of the sector root:",
          bool(np.array_equal(
              tw.derivative(eta).values,
              tw.indicator(homog, int(homog.children_of(0)[0])).values,
          )))


if __name__ == "__main__":
    main()
