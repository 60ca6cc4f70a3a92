"""Tests for the brute-force Thue-Morse layer."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tmprover import core
from tmprover.core import (
    ClassificationError,
    FactorRef,
    PatternClass,
    ResourceLimitError,
    a006165,
    a060973,
    classify_factor,
    classify_pattern,
    count_by_class,
    f_brute,
    f_closed,
    g_brute,
    g_closed,
    generate_prefix,
    scan_occurrences,
    tm_bit,
)

# First fifteen factor counts per class, frozen from the batch scan.
F_TABLE = [0, 2, 2, 4, 4, 6, 8, 8, 8, 10, 12, 14, 16, 16, 16]
G_TABLE = [0, 0, 1, 1, 2, 2, 2, 3, 4, 4, 4, 4, 4, 5, 6]

# Frozen from the bisection recurrences (and consistent with the tables).
A006165_PREFIX = [1, 1, 2, 2, 3, 4, 4, 4, 5, 6, 7, 8, 8, 8]  # n = 1..14
A060973_PREFIX = [0, 0, 1, 1, 2, 2, 2, 3, 4, 4, 4, 4, 4, 5, 6]  # n = 0..14


def test_tm_bit_known_values():
    assert tm_bit(0) == 0
    assert tm_bit(3) == 0
    assert tm_bit(2**40) == 1


def test_tm_bit_rejects_negative():
    with pytest.raises(ValueError):
        tm_bit(-1)


@given(st.integers(min_value=0, max_value=(1 << 20) - 1))
def test_tm_bit_recursion(k):
    assert tm_bit(k) == tm_bit(k // 2) ^ (k % 2)


def test_generate_prefix_known():
    assert generate_prefix(8).bits == "01101001"
    assert generate_prefix(0).bits == ""
    assert generate_prefix(16).bits == "0110100110010110"


@given(st.integers(min_value=0, max_value=512))
@settings(max_examples=60)
def test_generate_prefix_matches_tm_bit(n):
    bits = generate_prefix(n).bits
    assert len(bits) == n
    assert all(int(bits[k]) == tm_bit(k) for k in range(n))


def test_generate_prefix_cap():
    with pytest.raises(ResourceLimitError):
        generate_prefix(1 << 20, max_length=1 << 10)


def test_scan_occurrences_00_window16():
    prefix = generate_prefix(16)
    occ = scan_occurrences(prefix, FactorRef(5, 2))
    # 00 occurs at 5 and 9; 11 at 1, 7 and 13: labels strictly alternate.
    assert occ.entries == ((1, "B"), (5, "A"), (7, "B"), (9, "A"), (13, "B"))


def test_scan_occurrences_trivial():
    occ = scan_occurrences(generate_prefix(1), FactorRef(0, 1))
    assert occ.entries == ((0, "A"),)


def test_scan_occurrences_01101_window64():
    # Occurrences of 01101 and 10010 strictly alternate (class AB); the
    # first few merged positions are fixed by direct computation.
    occ = scan_occurrences(generate_prefix(64), FactorRef(0, 5))
    assert occ.entries[:6] == (
        (0, "A"), (8, "B"), (12, "A"), (16, "B"), (24, "A"), (32, "B"))
    labels = occ.labels()
    assert labels == ("AB" * len(labels))[: len(labels)]


def test_scan_occurrences_reports_overlaps():
    # 010 at 3 overlaps 101 at 2 and at 4 is absent; occurrence scanning
    # must keep every overlapping hit.
    occ = scan_occurrences(generate_prefix(16), FactorRef(2, 3))
    positions = occ.positions()
    assert 2 in positions and 3 in positions


def test_scan_occurrences_out_of_range():
    with pytest.raises(ValueError):
        scan_occurrences(generate_prefix(8), FactorRef(6, 4))


def test_classify_anchor_factors():
    assert classify_factor(1, 2) == PatternClass.AB
    assert classify_factor(5, 2) == PatternClass.BA
    assert classify_factor(2, 3) == PatternClass.ABBA
    assert classify_factor(3, 3) == PatternClass.BAAB
    assert classify_factor(0, 1) == PatternClass.TM_AS_A
    assert classify_factor(1, 1) == PatternClass.TM_AS_B


def test_classify_insufficient_window():
    occ = scan_occurrences(generate_prefix(8), FactorRef(0, 4))
    assert classify_pattern(occ, min_occurrences=8) == PatternClass.INSUFFICIENT


def test_classify_min_occurrences_validated():
    occ = scan_occurrences(generate_prefix(64), FactorRef(0, 2))
    with pytest.raises(ValueError):
        classify_pattern(occ, min_occurrences=3)


def test_classify_rejects_alien_labels():
    with pytest.raises(ClassificationError):
        core.classify_labels("AABB" * 4, list(range(16)), 3, 8)


def test_length1_never_periodic():
    for start in (0, 1):
        cls = classify_factor(start, 1, window=1 << 12)
        assert cls in (PatternClass.TM_AS_A, PatternClass.TM_AS_B)


@pytest.mark.parametrize("n", range(2, 21))
def test_small_lengths_classify_everywhere(n):
    classes = core.classify_all_factors(n, window=1 << 14)
    assert classes, "window must contain factors"
    for cls in classes.values():
        assert cls in (PatternClass.AB, PatternClass.BA,
                       PatternClass.ABBA, PatternClass.BAAB)


def test_counts_match_reference_table():
    for n in range(1, 16):
        counts = count_by_class(n, window=1 << 15)
        assert counts.get(PatternClass.AB, 0) == F_TABLE[n - 1], n
        assert counts.get(PatternClass.ABBA, 0) == G_TABLE[n - 1], n


def test_class_symmetry_up_to_64():
    for n in range(2, 65):
        counts = count_by_class(n, window=1 << 15)
        assert counts.get(PatternClass.AB, 0) == counts.get(PatternClass.BA, 0)
        assert counts.get(PatternClass.ABBA, 0) == counts.get(PatternClass.BAAB, 0)


def test_a006165_values():
    assert a006165(1) == 1
    assert a006165(2) == 1
    assert a006165(7) == 4
    assert [a006165(n) for n in range(1, 15)] == A006165_PREFIX
    with pytest.raises(ValueError):
        a006165(0)


def test_a060973_values():
    assert a060973(0) == 0
    assert a060973(2) == 1
    assert a060973(4) == 2
    assert [a060973(n) for n in range(15)] == A060973_PREFIX


def test_closed_forms_match_table():
    assert f_closed(7) == 8
    assert f_closed(12) == 14
    assert g_closed(9) == 4
    assert [f_closed(n) for n in range(2, 16)] == F_TABLE[1:]
    assert [g_closed(n) for n in range(3, 16)] == G_TABLE[2:]
    with pytest.raises(ValueError):
        f_closed(1)
    with pytest.raises(ValueError):
        g_closed(2)


def test_four_routes_agree_up_to_64():
    for n in range(2, 65):
        f = f_brute(n, window=1 << 15)
        assert f == f_closed(n) == 2 * a006165(n - 1), n
        g = g_brute(n, window=1 << 15)
        assert g == a060973(n - 1), n
        if n >= 3:
            assert g == g_closed(n), n


def test_closed_form_unique_branch_everywhere():
    # Branch selection must never be ambiguous; the closed forms raise
    # internally otherwise.
    for n in range(2, 4097):
        f_closed(n)
    for n in range(3, 4097):
        g_closed(n)
