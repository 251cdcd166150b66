from fractions import Fraction

import numpy as np
import pytest

from conftest import random_text
from pseudoed.audit import (EXACT_AUDIT_GUARD, _last_row, exact_audit, is_p_unique_exact, m_exact,
                            sampled_audit, sampled_m_test, uniqueness_test_sampled)
from pseudoed.distance import ed_exact
from pseudoed.errors import GuardRefusal, InvalidInput
from pseudoed.reduction import PseudoParams
from pseudoed.text import PAD, Rng, Text

QUARTER = Fraction(1, 4)


def brute_flags(x: Text, params: PseudoParams):
    B, size = params.B, 6 * params.B
    count = max(1, -(-len(x) // size))
    xp = x.symbols + (PAD,) * (count * size - len(x))
    flags = []
    for i in range(count):
        lo, hi = i * size, (i + 1) * size - 1
        ok = True
        for u in range(lo, hi - B + 2):
            for s in range(len(xp) - B + 1):
                if (s + B - 1 < lo or s > hi) and ed_exact(xp[u:u + B], xp[s:s + B]) < params.pB:
                    ok = False
                    break
            if not ok:
                break
        flags.append(ok)
    return flags


def test_filter_rows_match_semi_global_distance(nprng):
    text = nprng.integers(0, 3, 40)
    starts = np.array([0, 5, 17, 30])
    B, k = 6, 3
    got = _last_row(text.astype(np.int16), starts, B, k)
    for row, u in enumerate(starts):
        pattern = tuple(text[u:u + B])
        for e in range(len(text)):
            best = min(ed_exact(pattern, tuple(text[s:e + 1])) for s in range(e + 2))
            assert got[row, e] == min(best, k + 1)


def test_exact_audit_matches_pair_enumeration(nprng):
    for trial in range(12):
        x = random_text(nprng, int(nprng.integers(30, 90)), 2)
        for B, p in [(2, Fraction(1, 2)), (3, Fraction(1, 3)), (4, Fraction(1, 2)), (4, Fraction(1))]:
            params = PseudoParams(p, B)
            report = exact_audit(x, params)
            expected = brute_flags(x, params)
            assert [report.block_flags[i + 1] for i in range(len(expected))] == expected
            assert report.m_value == 6 * B * expected.count(False)


def test_constant_string():
    x = Text((1,) * 300, "ACGT")
    params = PseudoParams(QUARTER, 8)
    assert not any(is_p_unique_exact(x, params, i) for i in range(1, 8))
    assert m_exact(x, params) == 336
    assert not uniqueness_test_sampled(x, params, 3)


def test_single_block_is_vacuously_unique(nprng):
    x = Text((1,) * 48, "ACGT")
    params = PseudoParams(QUARTER, 8)
    assert is_p_unique_exact(x, params, 1)
    assert uniqueness_test_sampled(x, params, 1)
    assert m_exact(x, params) == 0


def test_random_string_is_pseudorandom():
    x = random_text(np.random.default_rng(2048), 2048)
    params = PseudoParams(QUARTER, 32)
    report = exact_audit(x, params)
    assert all(report.block_flags.values()) and report.m_value == 0


def test_duplicated_block_counts_both_copies():
    rng = np.random.default_rng(2048)
    x = random_text(rng, 2048)
    size = 6 * 32
    symbols = list(x.symbols)
    symbols[5 * size:6 * size] = symbols[1 * size:2 * size]
    report = exact_audit(x.with_symbols(symbols), PseudoParams(QUARTER, 32))
    assert report.m_value >= 12 * 32
    assert not report.block_flags[2] and not report.block_flags[6]


def test_m_exact_monotone_in_p(nprng):
    for _ in range(6):
        x = random_text(nprng, 400, 2)
        values = [m_exact(x, PseudoParams(Fraction(1, k), 8)) for k in (8, 4, 2, 1)]
        assert values == sorted(values)


def test_guard_and_index_checks():
    big = Text((0,) * (EXACT_AUDIT_GUARD + 1), "ab")
    with pytest.raises(GuardRefusal):
        m_exact(big, PseudoParams(QUARTER, 4096))
    with pytest.raises(InvalidInput):
        is_p_unique_exact(Text((0,) * 10, "ab"), PseudoParams(QUARTER, 4), 2)


def test_sampled_test_brackets_exact_uniqueness(nprng):
    # 500 blocks: half-p uniqueness implies a pass; with a unit grid a pass is exactly half-p uniqueness
    checked = 0
    while checked < 500:
        sigma = int(nprng.choice([2, 4]))
        B = int(nprng.choice([6, 8, 12, 16]))
        p = Fraction(1, int(nprng.choice([1, 2])))
        x = random_text(nprng, int(nprng.integers(200, 700)), sigma)
        params = PseudoParams(p, B)
        half = exact_audit(x, PseudoParams(p / 2, B)).block_flags
        for i, flag in half.items():
            passed = uniqueness_test_sampled(x, params, i)
            if flag:
                assert passed
            if params.pB < 16:
                assert passed == flag
            checked += 1


def test_sampled_test_coarse_grid_is_weaker(nprng):
    params = PseudoParams(Fraction(1), 32)  # grid 4, cutoff 15
    x = random_text(nprng, 960)
    half = exact_audit(x, PseudoParams(Fraction(1, 2), 32)).block_flags
    for i, flag in half.items():
        if flag:
            assert uniqueness_test_sampled(x, params, i)


def test_sampled_m_test_extremes():
    const = Text((2,) * 2048, "ACGT")
    params = PseudoParams(QUARTER, 32)
    assert not sampled_m_test(const, params, 256, Rng(1))
    x = random_text(np.random.default_rng(2048), 2048)
    report = sampled_audit(x, params, 256, Rng(1))
    assert report.verdict and report.failures == 0
    assert report.sample_size == 8 * 8 * 11
    assert len(report.block_flags) <= 11


def test_sampled_m_test_reproducible(nprng):
    x = random_text(nprng, 1200)
    params = PseudoParams(QUARTER, 16)
    a = sampled_audit(x, params, 300, Rng(9)).as_dict()
    b = sampled_audit(x, params, 300, Rng(9)).as_dict()
    a.pop("work_units"), b.pop("work_units")
    assert a == b


def test_sampled_threshold_validation(nprng):
    x = random_text(nprng, 100)
    params = PseudoParams(QUARTER, 4)
    with pytest.raises(InvalidInput):
        sampled_m_test(x, params, 0, Rng(0))
    with pytest.raises(InvalidInput):
        sampled_m_test(x, params, 101, Rng(0))
    with pytest.raises(InvalidInput):
        sampled_m_test(x, params, 10, Rng(0), c=0.5)
