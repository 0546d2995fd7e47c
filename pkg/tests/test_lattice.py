"""Windows, packed patterns, intervals, and the point-wise order."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from stackmorph import (
    BinaryPattern,
    CapacityError,
    DimensionError,
    DomainError,
    GreyPattern,
    KindError,
    PatternInterval,
    Window,
    enumerate_binary_patterns,
    enumerate_grey_patterns,
    interval_contains,
    leq,
    maximal_elements,
)

W2 = Window(((0, 0), (0, 1)))
W3 = Window(((0, -1), (0, 0), (0, 1)))


class TestWindow:
    def test_offsets_are_canonically_sorted(self):
        w = Window(((0, 1), (1, 0), (0, 0), (-1, 0)))
        assert w.offsets == ((-1, 0), (0, 0), (0, 1), (1, 0))

    def test_duplicate_offsets_rejected(self):
        with pytest.raises(DimensionError):
            Window(((0, 0), (0, 0)))

    def test_empty_window_rejected(self):
        with pytest.raises(DimensionError):
            Window(())

    def test_origin_lookup(self):
        assert W3.origin_included
        assert W3.origin_index == 1
        off = Window(((0, 1), (0, 2)))
        assert not off.origin_included
        assert off.origin_index is None

    def test_index_of(self):
        assert W3.index_of((0, -1)) == 0
        with pytest.raises(DimensionError):
            W3.index_of((5, 5))

    def test_len_iter_contains(self):
        assert len(W3) == 3
        assert list(W3) == [(0, -1), (0, 0), (0, 1)]
        assert (0, 0) in W3
        assert (2, 2) not in W3


class TestPatterns:
    def test_bits_are_position_order_and_str_reverses(self):
        # bit i of the index belongs to offsets[i]; the string prints the
        # index as a numeral, so position 0 ends up rightmost.
        p = BinaryPattern(W3, 0b011)
        assert p.bits == (1, 1, 0)
        assert str(p) == "011"
        assert p.value_at(0) == 1
        assert p.value_at(2) == 0

    def test_index_range_checked(self):
        with pytest.raises(DomainError):
            BinaryPattern(W2, 4)
        with pytest.raises(DomainError):
            BinaryPattern(W2, -1)

    def test_value_at_bounds(self):
        with pytest.raises(DimensionError):
            BinaryPattern(W2, 0).value_at(2)

    def test_grey_pattern_validation(self):
        with pytest.raises(DimensionError):
            GreyPattern(W3, (0, 1), 2)
        with pytest.raises(DomainError):
            GreyPattern(W3, (0, 1, 3), 2)
        with pytest.raises(DomainError):
            GreyPattern(W3, (0, 0, -1), 2)
        with pytest.raises(DomainError):
            GreyPattern(W3, (0, 0, 0), 0)

    def test_grey_str(self):
        assert str(GreyPattern(W2, (2, 0), 3)) == "(2,0)"


class TestLeq:
    def test_binary_examples(self):
        assert leq(BinaryPattern(W2, 0b01), BinaryPattern(W2, 0b11))
        assert not leq(BinaryPattern(W2, 0b01), BinaryPattern(W2, 0b10))

    def test_binary_leq_is_bitwise_subset(self):
        for a in range(8):
            for b in range(8):
                expect = (a | b) == b
                assert leq(BinaryPattern(W3, a), BinaryPattern(W3, b)) == expect

    def test_grey_examples(self):
        assert leq(GreyPattern(W2, (1, 2), 3), GreyPattern(W2, (1, 3), 3))
        assert not leq(GreyPattern(W2, (2, 0), 3), GreyPattern(W2, (1, 3), 3))

    def test_mixing_kinds_rejected(self):
        with pytest.raises(KindError):
            leq(BinaryPattern(W2, 0), GreyPattern(W2, (0, 0), 1))

    def test_mismatched_windows_rejected(self):
        with pytest.raises(DimensionError):
            leq(BinaryPattern(W2, 0), BinaryPattern(W3, 0))

    def test_mismatched_level_range_rejected(self):
        with pytest.raises(DimensionError):
            leq(GreyPattern(W2, (0, 0), 2), GreyPattern(W2, (0, 0), 3))

    @given(st.integers(0, 7), st.integers(0, 7), st.integers(0, 7))
    def test_partial_order_laws_binary(self, a, b, c):
        pa, pb, pc = (BinaryPattern(W3, i) for i in (a, b, c))
        assert leq(pa, pa)
        if leq(pa, pb) and leq(pb, pa):
            assert a == b
        if leq(pa, pb) and leq(pb, pc):
            assert leq(pa, pc)

    @given(
        st.tuples(st.integers(0, 3), st.integers(0, 3)),
        st.tuples(st.integers(0, 3), st.integers(0, 3)),
        st.tuples(st.integers(0, 3), st.integers(0, 3)),
    )
    def test_partial_order_laws_grey(self, a, b, c):
        pa, pb, pc = (GreyPattern(W2, v, 3) for v in (a, b, c))
        assert leq(pa, pa)
        if leq(pa, pb) and leq(pb, pa):
            assert a == b
        if leq(pa, pb) and leq(pb, pc):
            assert leq(pa, pc)


class TestIntervals:
    def test_emptiness_matches_order(self):
        assert PatternInterval(BinaryPattern(W2, 1), BinaryPattern(W2, 0)).is_empty
        assert not PatternInterval(BinaryPattern(W2, 0), BinaryPattern(W2, 1)).is_empty

    def test_membership_is_two_sided_order_exhaustive(self):
        # p in [lo, hi] exactly when lo <= p and p <= hi, over every binary
        # triple on a three-point window.
        for lo in range(8):
            for hi in range(8):
                iv = PatternInterval(BinaryPattern(W3, lo), BinaryPattern(W3, hi))
                for p in range(8):
                    pat = BinaryPattern(W3, p)
                    expect = (
                        leq(iv.lower, iv.upper)
                        and leq(iv.lower, pat)
                        and leq(pat, iv.upper)
                    )
                    assert interval_contains(iv, pat) == expect

    def test_empty_interval_contains_nothing(self):
        iv = PatternInterval(BinaryPattern(W2, 0b10), BinaryPattern(W2, 0b01))
        assert iv.is_empty
        for p in range(4):
            assert not interval_contains(iv, BinaryPattern(W2, p))

    def test_grey_membership(self):
        iv = PatternInterval(GreyPattern(W2, (1, 0), 3), GreyPattern(W2, (2, 2), 3))
        assert interval_contains(iv, GreyPattern(W2, (1, 2), 3))
        assert not interval_contains(iv, GreyPattern(W2, (0, 0), 3))

    def test_mixed_endpoints_rejected(self):
        with pytest.raises(KindError):
            PatternInterval(BinaryPattern(W2, 0), GreyPattern(W2, (1, 1), 1))


def _all_subintervals_of_top(window):
    size = 1 << window.size
    out = []
    for lo in range(size):
        for hi in range(size):
            if lo & ~hi == 0:
                out.append(
                    PatternInterval(BinaryPattern(window, lo), BinaryPattern(window, hi))
                )
    return out


class TestMaximalElements:
    def test_subintervals_collapse_to_top(self):
        ivs = _all_subintervals_of_top(W2)
        assert len(ivs) == 9
        top = PatternInterval(BinaryPattern(W2, 0), BinaryPattern(W2, 3))
        assert maximal_elements(ivs) == (top,)

    def test_output_is_an_antichain_and_idempotent(self):
        ivs = _all_subintervals_of_top(W3)
        kept = maximal_elements(ivs)
        for a in kept:
            for b in kept:
                if a != b:
                    assert not (
                        leq(b.lower, a.lower) and leq(a.upper, b.upper)
                    ), f"{a} inside {b}"
        assert maximal_elements(kept) == kept

    def test_duplicates_collapse(self):
        iv = PatternInterval(BinaryPattern(W2, 1), BinaryPattern(W2, 3))
        assert maximal_elements([iv, iv, iv]) == (iv,)

    def test_incomparable_intervals_both_survive(self):
        a = PatternInterval(BinaryPattern(W2, 0b01), BinaryPattern(W2, 0b01))
        b = PatternInterval(BinaryPattern(W2, 0b10), BinaryPattern(W2, 0b10))
        assert maximal_elements([a, b]) == (a, b)

    def test_empty_input(self):
        assert maximal_elements([]) == ()

    def test_mixed_kinds_rejected(self):
        a = PatternInterval(BinaryPattern(W2, 0), BinaryPattern(W2, 1))
        b = PatternInterval(GreyPattern(W2, (0, 0), 2), GreyPattern(W2, (1, 1), 2))
        with pytest.raises(KindError):
            maximal_elements([a, b])

    def test_mixed_windows_rejected(self):
        a = PatternInterval(BinaryPattern(W2, 0), BinaryPattern(W2, 1))
        b = PatternInterval(BinaryPattern(W3, 0), BinaryPattern(W3, 1))
        with pytest.raises(DimensionError):
            maximal_elements([a, b])

    def test_grey_intervals_supported(self):
        small = PatternInterval(GreyPattern(W2, (1, 1), 2), GreyPattern(W2, (1, 1), 2))
        big = PatternInterval(GreyPattern(W2, (0, 0), 2), GreyPattern(W2, (2, 2), 2))
        assert maximal_elements([small, big]) == (big,)


class TestEnumeration:
    def test_binary_enumeration_in_index_order(self):
        pats = list(enumerate_binary_patterns(W2))
        assert [p.index for p in pats] == [0, 1, 2, 3]

    def test_grey_enumeration_varies_position_zero_fastest(self):
        pats = list(enumerate_grey_patterns(W2, 2))
        assert len(pats) == 9
        assert pats[0].levels == (0, 0)
        assert pats[1].levels == (1, 0)
        assert pats[2].levels == (2, 0)
        assert pats[3].levels == (0, 1)
        assert pats[-1].levels == (2, 2)

    def test_binary_cap(self):
        with pytest.raises(CapacityError) as exc:
            list(enumerate_binary_patterns(W3, cap=7))
        assert exc.value.required == 8

    def test_grey_cap(self):
        with pytest.raises(CapacityError) as exc:
            list(enumerate_grey_patterns(W3, 9, cap=999))
        assert exc.value.required == 1000

    def test_grey_enumeration_needs_positive_max_level(self):
        with pytest.raises(DomainError):
            enumerate_grey_patterns(W2, 0)
