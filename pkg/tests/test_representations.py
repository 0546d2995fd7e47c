"""Kernel and basis views of window operators and their stack extensions."""

import numpy as np
import pytest

from stackmorph import (
    BinaryPattern,
    CapacityError,
    DimensionError,
    DomainError,
    GreyPattern,
    IntervalBasis,
    KindError,
    PatternInterval,
    SetKernel,
    SetOperator,
    StackKernelView,
    Window,
    basis_of,
    enumerate_grey_patterns,
    h_inverse,
    interval_contains,
    kernel_of,
    operator_from_basis,
    operator_from_kernel,
    stack_basis_level,
    stack_basis_member,
    stack_kernel_member,
    threshold_hit_sum,
)
from stackmorph.representations import basis_leq

W1 = Window(((0, 0),))
W2 = Window(((0, 0), (0, 1)))
W3 = Window(((0, -1), (0, 0), (0, 1)))


def table_from_code(code, n):
    return np.array([(code >> i) & 1 for i in range(1 << n)], dtype=np.uint8)


def op2(code):
    return SetOperator(W2, table_from_code(code, 2))


def biv(window, lo, hi):
    return PatternInterval(BinaryPattern(window, lo), BinaryPattern(window, hi))


AND2 = op2(0b1000)
OR2 = op2(0b1110)
XOR2 = op2(0b0110)
NOR2 = op2(0b0001)


class TestKernel:
    def test_kernel_members(self):
        assert kernel_of(AND2).members == frozenset({3})
        assert kernel_of(op2(0)).members == frozenset()
        assert kernel_of(XOR2).members == frozenset({1, 2})

    def test_round_trip_exhaustive_two_points(self):
        for code in range(16):
            op = op2(code)
            assert operator_from_kernel(kernel_of(op)) == op

    def test_round_trip_sampled_four_points(self):
        w4 = Window(((0, 0), (0, 1), (1, 0), (1, 1)))
        rng = np.random.default_rng(41)
        for _ in range(25):
            op = SetOperator(w4, rng.integers(0, 2, 16).astype(np.uint8))
            assert operator_from_kernel(kernel_of(op)) == op

    def test_contains_accepts_patterns_and_ints(self):
        k = kernel_of(XOR2)
        assert BinaryPattern(W2, 1) in k
        assert 2 in k
        assert 3 not in k
        with pytest.raises(DimensionError):
            BinaryPattern(W3, 1) in k

    def test_member_range_validated(self):
        with pytest.raises(DomainError):
            SetKernel(W2, frozenset({4}))

    def test_patterns_iterate_sorted(self):
        k = kernel_of(OR2)
        assert [p.index for p in k.patterns()] == [1, 2, 3]


class TestStackKernel:
    def test_membership_counts_hitting_slices(self):
        view = StackKernelView(AND2, 2)
        f = GreyPattern(W2, (2, 1), 2)
        assert stack_kernel_member(view, f, 1)
        assert not stack_kernel_member(view, f, 2)

    def test_level_sets_shrink_as_t_grows(self):
        rng = np.random.default_rng(42)
        m = 4
        for code in range(16):
            view = StackKernelView(op2(code), m)
            for _ in range(20):
                f = GreyPattern(W2, tuple(rng.integers(0, m + 1, 2)), m)
                hits = [stack_kernel_member(view, f, t) for t in range(1, m + 1)]
                assert hits == sorted(hits, reverse=True)

    def test_argument_validation(self):
        view = StackKernelView(AND2, 2)
        with pytest.raises(DomainError):
            stack_kernel_member(view, GreyPattern(W2, (0, 0), 2), 0)
        with pytest.raises(DomainError):
            stack_kernel_member(view, GreyPattern(W2, (0, 0), 3), 1)
        with pytest.raises(DimensionError):
            stack_kernel_member(view, GreyPattern(W3, (0, 0, 0), 2), 1)

    def test_h_inverse_identity_and_complement(self):
        ident = SetOperator(W1, np.array([0, 1], dtype=np.uint8))
        comp = SetOperator(W1, np.array([1, 0], dtype=np.uint8))
        assert h_inverse(StackKernelView(ident, 3)).members == frozenset({1})
        assert h_inverse(StackKernelView(comp, 3)).members == frozenset({0})

    def test_h_inverse_recovers_random_four_point_kernels(self):
        w4 = Window(((0, 0), (0, 1), (1, 0), (1, 1)))
        rng = np.random.default_rng(43)
        for _ in range(20):
            op = SetOperator(w4, rng.integers(0, 2, 16).astype(np.uint8))
            for m in (1, 2):
                assert h_inverse(StackKernelView(op, m)) == kernel_of(op)

    def test_extension_preserves_kernel_order(self):
        # A larger kernel keeps larger level sets at every level.
        m = 3
        for small in range(16):
            for big in range(16):
                if small & ~big:
                    continue
                va = StackKernelView(op2(small), m)
                vb = StackKernelView(op2(big), m)
                for f in enumerate_grey_patterns(W2, m):
                    for t in range(1, m + 1):
                        if stack_kernel_member(va, f, t):
                            assert stack_kernel_member(vb, f, t)


class TestBasis:
    def test_known_bases(self):
        assert basis_of(kernel_of(AND2)).intervals == (biv(W2, 3, 3),)
        assert basis_of(kernel_of(OR2)).intervals == (biv(W2, 1, 3), biv(W2, 2, 3))
        assert basis_of(kernel_of(XOR2)).intervals == (biv(W2, 1, 1), biv(W2, 2, 2))
        assert basis_of(kernel_of(NOR2)).intervals == (biv(W2, 0, 0),)
        assert basis_of(kernel_of(op2(0))).intervals == ()
        assert basis_of(kernel_of(op2(15))).intervals == (biv(W2, 0, 3),)

    def test_round_trip_exhaustive_two_points(self):
        for code in range(16):
            op = op2(code)
            assert operator_from_basis(basis_of(kernel_of(op))) == op

    def test_round_trip_sampled_three_points(self):
        rng = np.random.default_rng(44)
        for _ in range(40):
            op = SetOperator(W3, rng.integers(0, 2, 8).astype(np.uint8))
            basis = basis_of(kernel_of(op))
            assert operator_from_basis(basis) == op
            # Basis membership reproduces the table point by point.
            for i in range(8):
                covered = any(
                    interval_contains(iv, BinaryPattern(W3, i)) for iv in basis
                )
                assert covered == bool(op.table[i])

    def test_basis_is_an_antichain(self):
        def inside(inner, outer):
            return (
                outer.lower.index & ~inner.lower.index == 0
                and inner.upper.index & ~outer.upper.index == 0
            )

        rng = np.random.default_rng(45)
        for _ in range(30):
            op = SetOperator(W3, rng.integers(0, 2, 8).astype(np.uint8))
            ivs = basis_of(kernel_of(op)).intervals
            for i, a in enumerate(ivs):
                for b in ivs[i + 1 :]:
                    assert not inside(a, b) and not inside(b, a)

    def test_constructor_rejects_non_antichains(self):
        with pytest.raises(DomainError):
            IntervalBasis(W2, [biv(W2, 1, 1), biv(W2, 0, 3)])

    def test_constructor_rejects_empty_intervals(self):
        with pytest.raises(DomainError):
            IntervalBasis(W2, [biv(W2, 2, 1)])

    def test_empty_basis_needs_a_kind_and_yields_zero(self):
        empty = IntervalBasis(W2, [], kind="binary")
        assert operator_from_basis(empty) == op2(0)
        with pytest.raises(KindError):
            IntervalBasis(W2, [], kind="mystery")

    def test_grey_basis_does_not_convert_to_a_table(self):
        g = IntervalBasis(
            W2,
            [PatternInterval(GreyPattern(W2, (0, 0), 2), GreyPattern(W2, (1, 1), 2))],
        )
        with pytest.raises(KindError):
            operator_from_basis(g)

    def test_basis_leq_tracks_kernel_inclusion(self):
        for small in range(16):
            for big in range(16):
                a = basis_of(kernel_of(op2(small)))
                b = basis_of(kernel_of(op2(big)))
                assert basis_leq(a, b) == (small & ~big == 0)


def brute_level_basis(table, m, t):
    """Maximal grey intervals of {f : hit count >= t} on two points."""
    member = {}
    for f in enumerate_grey_patterns(W2, m):
        member[f.levels] = threshold_hit_sum(table, f.levels, m) >= t
    boxes = []
    for lo, ok_lo in member.items():
        for hi, ok_hi in member.items():
            if not (ok_lo and ok_hi):
                continue
            if not all(a <= b for a, b in zip(lo, hi)):
                continue
            if all(
                member[(x, y)]
                for x in range(lo[0], hi[0] + 1)
                for y in range(lo[1], hi[1] + 1)
            ):
                boxes.append((lo, hi))
    maxima = [
        (lo, hi)
        for lo, hi in boxes
        if not any(
            (lo, hi) != (lo2, hi2)
            and all(a <= b for a, b in zip(lo2, lo))
            and all(a <= b for a, b in zip(hi, hi2))
            for lo2, hi2 in boxes
        )
    ]
    ivs = [
        PatternInterval(GreyPattern(W2, lo, m), GreyPattern(W2, hi, m))
        for lo, hi in maxima
    ]
    return tuple(sorted(ivs, key=lambda iv: (iv.lower.levels, iv.upper.levels)))


class TestStackBasis:
    def test_erosion_levels_are_shifted_boxes(self):
        basis = basis_of(kernel_of(AND2))
        m = 3
        for t in range(1, m + 1):
            out = stack_basis_level(basis, m, t)
            assert len(out) == 1
            iv = out.intervals[0]
            assert iv.lower.levels == (t, t)
            assert iv.upper.levels == (m, m)

    def test_erosion_top_level_is_a_point(self):
        out = stack_basis_level(basis_of(kernel_of(AND2)), 2, 2)
        assert out.intervals[0].lower.levels == (2, 2)
        assert out.intervals[0].upper.levels == (2, 2)

    def test_anti_dilation_levels_cap_the_maximum(self):
        basis = basis_of(kernel_of(NOR2))
        m = 3
        for t in range(1, m + 1):
            out = stack_basis_level(basis, m, t)
            assert len(out) == 1
            iv = out.intervals[0]
            assert iv.lower.levels == (0, 0)
            assert iv.upper.levels == (m - t, m - t)

    def test_general_levels_match_the_brute_force_oracle(self):
        m = 2
        for code in range(16):
            op = op2(code)
            basis = basis_of(kernel_of(op))
            for t in (1, 2):
                got = stack_basis_level(basis, m, t).intervals
                assert got == brute_level_basis(op.table, m, t)

    def test_single_skew_interval_splits_into_two_boxes(self):
        # Kernel {01}: the level-1 set {f0 - f1 >= 1} is a staircase, not
        # one box, so the single binary interval fans out.
        basis = IntervalBasis(W2, [biv(W2, 0b01, 0b01)])
        out = stack_basis_level(basis, 2, 1)
        assert [
            (iv.lower.levels, iv.upper.levels) for iv in out.intervals
        ] == [((1, 0), (2, 0)), ((2, 0), (2, 1))]
        top = stack_basis_level(basis, 2, 2)
        assert [(iv.lower.levels, iv.upper.levels) for iv in top.intervals] == [
            ((2, 0), (2, 0))
        ]

    def test_skew_interval_membership_is_not_the_box_rule(self):
        # The product box [t*X, t*Y + (m-t)] for kernel {01} at t=1 would
        # admit (1, 1), but no cross-section of (1, 1) equals the pattern.
        basis = IntervalBasis(W2, [biv(W2, 0b01, 0b01)])
        f = GreyPattern(W2, (1, 1), 2)
        assert not stack_basis_member(basis, 2, 1, f)
        assert stack_basis_member(basis, 2, 1, GreyPattern(W2, (2, 1), 2))

    def test_membership_agrees_with_the_level_basis(self):
        m = 2
        for code in range(16):
            basis = basis_of(kernel_of(op2(code)))
            for t in (1, 2):
                level = stack_basis_level(basis, m, t)
                for f in enumerate_grey_patterns(W2, m):
                    in_level = any(interval_contains(iv, f) for iv in level)
                    assert stack_basis_member(basis, m, t, f) == in_level

    def test_levels_shrink_as_t_grows(self):
        rng = np.random.default_rng(46)
        m = 3
        for _ in range(10):
            op = SetOperator(W3, rng.integers(0, 2, 8).astype(np.uint8))
            basis = basis_of(kernel_of(op))
            for f in (
                GreyPattern(W3, tuple(rng.integers(0, m + 1, 3)), m) for _ in range(30)
            ):
                hits = [stack_basis_member(basis, m, t, f) for t in range(1, m + 1)]
                assert hits == sorted(hits, reverse=True)

    def test_empty_basis_has_empty_levels(self):
        empty = IntervalBasis(W2, [], kind="binary")
        assert stack_basis_level(empty, 3, 1).intervals == ()

    def test_argument_validation(self):
        basis = basis_of(kernel_of(AND2))
        with pytest.raises(DomainError):
            stack_basis_level(basis, 2, 0)
        with pytest.raises(DomainError):
            stack_basis_level(basis, 2, 3)
        grey = stack_basis_level(basis, 2, 1)
        with pytest.raises(KindError):
            stack_basis_level(grey, 2, 1)
        with pytest.raises(KindError):
            stack_basis_member(grey, 2, 1, GreyPattern(W2, (0, 0), 2))
        with pytest.raises(DomainError):
            stack_basis_member(basis, 2, 1, GreyPattern(W2, (0, 0), 3))

    def test_enumeration_cap_enforced(self):
        basis = basis_of(kernel_of(XOR2))
        with pytest.raises(CapacityError):
            stack_basis_level(basis, 100, 1, cap=500)
