from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import treewco as tw
from treewco import VertexFunction, WeightedCompOp
from treewco.operators import MapSpecError

from conftest import label_fn, random_operator, small_tree_corpus


def ones_op(phi):
    return tw.composition_op(phi)


def op_on(tree, psi_vals, phi):
    return WeightedCompOp(VertexFunction(tree, psi_vals), phi)


class TestSelfMap:
    def test_table_must_be_total(self, line4):
        with pytest.raises(MapSpecError):
            tw.map_from_table(line4, {0: 0})

    def test_table_must_stay_inside(self, line4):
        table = {v: 0 for v in range(len(line4))}
        table[3] = 99
        with pytest.raises(MapSpecError):
            tw.map_from_table(line4, table)

    def test_preimage_index_matches_map(self):
        t = tw.zline(5)
        rng = np.random.default_rng(2)
        phi = tw.random_map(t, rng)
        for w in range(len(t)):
            pre = set(int(v) for v in phi.preimage(w))
            expect = {v for v in range(len(t)) if int(phi.image[v]) == w}
            assert pre == expect

    def test_injectivity_and_surjectivity_flags(self, line4):
        ident = tw.identity_map(line4)
        assert ident.injective_on_domain and ident.surjective_on_truncation
        const = tw.constant_map(line4, 0)
        assert not const.injective_on_domain
        assert not const.surjective_on_truncation

    def test_zline_fold_table(self):
        t = tw.zline(6)
        phi = tw.zline_fold(t)
        fold = {
            n: (n if n >= 0 else (-n if n % 2 != 0 else n // 2))
            for n in range(-6, 7)
        }
        for v in range(len(t)):
            n = int(t.label_of(v))
            assert int(t.label_of(int(phi.image[v]))) == fold[n]

    def test_zline_double_core(self):
        t = tw.zline(8)
        phi = tw.zline_double(t)
        assert phi.domain_depth == 4
        for v in range(phi.domain_size):
            assert int(t.label_of(int(phi.image[v]))) == 2 * int(t.label_of(v))
        assert phi.injective_on_domain

    def test_range_profile_monotone(self):
        t = tw.zline(6)
        rng = np.random.default_rng(4)
        prof = [v for _, v in tw.random_map(t, rng).range_profile()]
        assert all(a <= b for a, b in zip(prof, prof[1:]))


class TestApply:
    def test_identity_with_unit_weight(self, line4):
        op = ones_op(tw.identity_map(line4))
        f = tw.random_function(line4, np.random.default_rng(0))
        assert np.array_equal(tw.apply_op(op, f).values, f.values)

    def test_indicator_pullback(self):
        t = tw.zline(5)
        rng = np.random.default_rng(1)
        op = random_operator(t, rng)
        w = 4
        out = tw.apply_op(op, tw.indicator(t, w))
        expect = np.zeros(len(t))
        pre = op.phi.preimage(w)
        expect[pre] = op.psi.values[pre]
        assert np.array_equal(out.values, expect)

    def test_fold_fixture_table_evaluation(self):
        fx = tw.fixture_by_name("z-isometry")
        op = fx.build(4)
        t = op.tree
        f = VertexFunction(t, label_fn(t).astype(float))
        out = tw.apply_op(op, f)
        for v in range(len(t)):
            expect = op.psi(v) * f(int(op.phi.image[v]))
            assert out(v) == expect

    def test_tree_mismatch(self, line4):
        op = ones_op(tw.identity_map(line4))
        f = tw.random_function(tw.zline(5), np.random.default_rng(0))
        with pytest.raises(ValueError):
            tw.apply_op(op, f)


class TestLinfNorm:
    def test_unit_weight_norm_one(self, line4):
        rng = np.random.default_rng(3)
        assert tw.linf_op_norm(ones_op(tw.random_map(line4, rng))) == 1.0

    def test_multiplication_norm(self):
        t = tw.zline(4)
        psi = tw.random_function(t, np.random.default_rng(5), 3.0)
        assert tw.linf_op_norm(tw.multiplication_op(psi)) == psi.sup_norm

    def test_decaying_weight_peaks_at_root(self):
        t = tw.zline(4)
        psi = 1.0 / (1.0 + t.depth.astype(float))
        op = op_on(t, psi, tw.identity_map(t))
        assert tw.linf_op_norm(op) == 1.0


class TestEssTails:
    def test_finite_range_tail_zero(self, line4):
        op = ones_op(tw.constant_map(line4, 0))
        for n in range(line4.depth_limit):
            assert tw.linf_ess_norm_tail(op, n) == 0.0
            assert tw.lip_ess_norm_tail(op, n) == 0.0

    def test_zero_one_law_per_depth(self):
        for tree in small_tree_corpus():
            rng = np.random.default_rng(7)
            for _ in range(5):
                op = ones_op(tw.random_map(tree, rng))
                for n in range(tree.depth_limit):
                    assert tw.linf_ess_norm_tail(op, n) in (0.0, 1.0)

    def test_unbounded_range_unit_weight_tail_all_one(self):
        t = tw.zline(6)
        op = ones_op(tw.identity_map(t))
        assert all(tw.linf_ess_norm_tail(op, n) == 1.0 for n in range(6))

    def test_decaying_weight_tail_values(self):
        t = tw.zline(6)
        psi = 1.0 / (1.0 + t.depth.astype(float))
        op = op_on(t, psi, tw.identity_map(t))
        for n in range(6):
            assert tw.linf_ess_norm_tail(op, n) == pytest.approx(1.0 / (n + 2))

    def test_tails_nonincreasing(self):
        for tree in small_tree_corpus():
            rng = np.random.default_rng(11)
            op = random_operator(tree, rng)
            linf = [v for _, v in tw.linf_ess_norm_profile(op)]
            lip = [v for _, v in tw.lip_ess_norm_profile(op)]
            assert all(a >= b for a, b in zip(linf, linf[1:]))
            assert all(a >= b for a, b in zip(lip, lip[1:]))

    def test_bounded_not_compact_trend(self):
        t = tw.zline(10)
        phi = tw.identity_map(t)
        psi = 1.0 / (1.0 + t.depth.astype(float))
        op = op_on(t, psi, phi)
        tail = [tw.lip_ess_norm_tail(op, n) for n in range(10)]
        assert all(v == pytest.approx(10.0 / 11.0) for v in tail)
        sq = op_on(t, psi**2, phi)
        tail_sq = [tw.lip_ess_norm_tail(sq, n) for n in range(10)]
        assert all(a >= b for a, b in zip(tail_sq, tail_sq[1:]))
        assert tail_sq[-1] == pytest.approx(10.0 / 121.0)


class TestLipNorms:
    def test_bounds_for_reciprocal_weight(self):
        # identity off the root keeps |phi| >= 1, so the lower bound sits
        # strictly below the exact upper bound 1 and climbs with depth
        t = tw.zline(12)
        table = {v: v for v in range(len(t))}
        table[0] = t.vertex_of(1)
        phi = tw.map_from_table(t, table)
        psi = 1.0 / (1.0 + phi.image_depth.astype(float))
        lo, up = tw.lip_bounds(op_on(t, psi, phi))
        assert up == 1.0
        assert lo == pytest.approx(12.0 / 13.0)
        assert lo < 1.0
        t4 = tw.zline(4)
        phi4 = tw.map_from_table(
            t4, {**{v: v for v in range(len(t4))}, 0: t4.vertex_of(1)}
        )
        psi4 = 1.0 / (1.0 + phi4.image_depth.astype(float))
        shallow_lo, _ = tw.lip_bounds(op_on(t4, psi4, phi4))
        assert shallow_lo < lo

    def test_bounds_identity_unit_weight(self, line4):
        op = ones_op(tw.identity_map(line4))
        assert tw.lip_bounds(op) == (4.0, 5.0)
        assert tw.lip_exact_norm(op) == 4.0

    def test_zero_weight(self, line4):
        op = op_on(line4, np.zeros(len(line4)), tw.identity_map(line4))
        assert tw.lip_bounds(op) == (0.0, 0.0)
        assert tw.lip_exact_norm(op) == 0.0

    def test_root_spike_weight(self):
        t = tw.zline(5)
        rng = np.random.default_rng(13)
        phi = tw.random_map(t, rng)
        psi = np.zeros(len(t))
        psi[0] = 1.0
        op = op_on(t, psi, phi)
        assert tw.lip_exact_norm(op) == max(1, t.depth_of(int(phi.image[0])))

    def test_sandwich_on_random_instances(self):
        rng = np.random.default_rng(17)
        for tree in small_tree_corpus():
            for _ in range(25):
                op = random_operator(tree, rng)
                lo, up = tw.lip_bounds(op)
                mid = tw.lip_exact_norm(op)
                assert lo - 1e-12 <= mid <= up + 1e-12


class TestModuli:
    def test_multiplication_moduli(self):
        t = tw.zline(4)
        psi = tw.random_function(t, np.random.default_rng(19), 2.0)
        op = tw.multiplication_op(psi)
        expect = float(np.abs(psi.values).min())
        assert tw.j_linf(op) == expect
        assert tw.k_linf(op) == expect

    def test_fold_fixture_j_is_one_in_window(self):
        op = tw.fixture_by_name("z-isometry").build(6)
        assert tw.j_linf(op, within_depth=3) == 1.0

    def test_constant_map_not_surjective(self, line4):
        op = ones_op(tw.constant_map(line4, 0))
        assert tw.j_linf(op) == 0.0

    def test_k_composition(self, line4):
        assert tw.k_linf(ones_op(tw.identity_map(line4))) == 1.0
        assert tw.k_linf(ones_op(tw.constant_map(line4, 0))) == 0.0

    def test_k_vanishing_weight(self):
        t = tw.zline(3)
        psi = np.ones(len(t))
        psi[4] = 0.0
        op = op_on(t, psi, tw.identity_map(t))
        assert tw.k_linf(op) == 0.0

    def test_j_bracket_fold_fixture(self):
        op = tw.fixture_by_name("z-isometry").build(8)
        assert tw.j_lip_bracket(op, within_depth=4) == (pytest.approx(1.0 / 3.0), 1.0)

    def test_j_bracket_non_surjective(self, line4):
        assert tw.j_lip_bracket(ones_op(tw.constant_map(line4, 0))) == (0.0, 0.0)

    def test_j_bracket_constant_weight(self):
        t = tw.zline(4)
        op = op_on(t, np.full(len(t), 0.6), tw.identity_map(t))
        lo, up = tw.j_lip_bracket(op)
        assert up == pytest.approx(0.6)
        assert lo == pytest.approx(0.2)

    def test_k_bracket_unit_weight_injective(self):
        t = tw.zline(4)
        op = ones_op(tw.identity_map(t))
        assert tw.k_lip_bracket(op) == (pytest.approx(1.0 / 3.0), 1.0)

    def test_k_bracket_zero_cases(self):
        t = tw.zline(4)
        psi = np.ones(len(t))
        psi[3] = 0.0
        assert tw.k_lip_bracket(op_on(t, psi, tw.identity_map(t))) == (0.0, 0.0)
        assert tw.k_lip_bracket(ones_op(tw.constant_map(t, 0))) == (0.0, 0.0)

    def test_k_bracket_doubling_fixture(self):
        for depth in (8, 12, 16):
            op = tw.fixture_by_name("not-surjective-2n").build(depth)
            lo, up = tw.k_lip_bracket(op)
            core = depth // 2
            assert lo == pytest.approx(1.0 / (3.0 * core))
            assert up == 1.0

    def test_moduli_below_norm(self):
        rng = np.random.default_rng(23)
        for tree in small_tree_corpus():
            for _ in range(20):
                op = random_operator(tree, rng)
                norm = tw.linf_op_norm(op)
                assert tw.j_linf(op) <= norm + 1e-12
                assert tw.k_linf(op) <= norm + 1e-12


class TestIsometry:
    def test_fold_fixture_holds_on_every_window(self):
        fx = tw.fixture_by_name("z-isometry")
        for depth in (4, 6, 8):
            cert = tw.isometry_check_linf(fx.build(depth), within_depth=depth // 2)
            assert cert.verdict == "Holds"

    def test_unimodular_multiplication_isometry(self):
        t = tw.zline(4)
        rng = np.random.default_rng(29)
        psi = np.where(rng.uniform(size=len(t)) < 0.5, -1.0, 1.0)
        cert = tw.isometry_check_linf(op_on(t, psi, tw.identity_map(t)))
        assert cert.verdict == "Holds"

    def test_half_weight_fails_with_witness(self, line4):
        op = op_on(line4, np.full(len(line4), 0.5), tw.identity_map(line4))
        cert = tw.isometry_check_linf(op)
        assert cert.verdict == "Fails"
        assert "vertex" in cert.witnesses

    def test_isometry_implies_modulus_and_norm_one(self):
        rng = np.random.default_rng(31)
        for tree in small_tree_corpus():
            perm = tw.random_permutation_map(tree, rng)
            psi = np.where(rng.uniform(size=len(tree)) < 0.5, -1.0, 1.0)
            op = op_on(tree, psi, perm)
            assert tw.isometry_check_linf(op).verdict == "Holds"
            assert tw.j_linf(op) == 1.0
            assert tw.linf_op_norm(op) == 1.0

    def test_lip_never_isometry_even_for_linf_isometry(self):
        op = tw.fixture_by_name("z-isometry").build(6)
        cert = tw.isometry_check_lip(op, within_depth=3)
        assert cert.verdict == "Holds"
        assert cert.statement == "Lip.NoIsometry"
        assert op.tree.depth_of(cert.witnesses["vertex"]) == 2

    def test_lip_witness_for_non_surjective(self, line4):
        cert = tw.isometry_check_lip(ones_op(tw.constant_map(line4, 0)))
        assert "no preimage" in cert.witnesses["reason"]

    def test_lip_witness_identity_lower_bound(self, line4):
        cert = tw.isometry_check_lip(ones_op(tw.identity_map(line4)))
        assert cert.witnesses["lower_bound"] == pytest.approx(2.0)

    def test_lip_requires_depth_two(self):
        t = tw.zline(1)
        with pytest.raises(IndexError):
            tw.isometry_check_lip(ones_op(tw.identity_map(t)))


class TestSpecialization:
    """Identity map reproduces multiplication operators; unit weight
    reproduces composition operators."""

    def test_multiplication_bounds(self):
        t = tw.zline(6)
        psi = tw.random_function(t, np.random.default_rng(37), 2.0)
        op = tw.multiplication_op(psi)
        a = np.abs(psi.values)
        d = t.depth.astype(float)
        lo, up = tw.lip_bounds(op)
        assert lo == pytest.approx(max(a.max(), (a * d).max()))
        assert up == pytest.approx((a * (1 + d)).max())

    def test_composition_norm_and_moduli(self):
        t = tw.zline(5)
        rng = np.random.default_rng(41)
        phi = tw.random_map(t, rng)
        op = ones_op(phi)
        assert tw.linf_op_norm(op) == 1.0
        assert tw.j_linf(op) == (1.0 if phi.surjective_on_truncation else 0.0)
        assert tw.k_linf(op) == (1.0 if phi.injective_on_domain else 0.0)

    @given(st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_random_specialization_coherence(self, seed):
        t = tw.homogeneous(2, 2)
        rng = np.random.default_rng(seed)
        psi = tw.random_function(t, rng, 2.0)
        mult = tw.multiplication_op(psi)
        assert tw.linf_op_norm(mult) == psi.sup_norm
        assert tw.j_linf(mult) == pytest.approx(float(np.abs(psi.values).min()))
