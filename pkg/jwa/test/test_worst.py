import math
import itertools

import attr
import pytest

from jwa import (jwa_trace,
                 iteration_count,
                 fib,
                 m_of_k,
                 d_sequence,
                 single_two_pattern,
                 brute_force_N,
                 analytic_N,
                 worst_case_row,
                 worst_case_cs,
                 table_rows,
                 sigma_solutions,
                 pattern_solutions,
                 iter_patterns,
                 unwind_remainders,
                 recover_c,
                 scan_lower_bound,
                 even_powers_of_two,
                 TableRow,
                 FallbackUsed,
                 MethodMismatch,
                 InvalidInput,
                 TooLarge,
                 Inconsistent)
from jwa import worst


def test_brute_force_small():
    row = brute_force_N(16)
    assert (row.k, row.m, row.n_big) == (16, 3, 2)
    assert row.witnesses == (9, 11)
    assert row.witness_count == 2
    assert row.complete and not row.fallback_used
    assert row.method == 'brute'

    row = brute_force_N(9)
    assert (row.m, row.n_big, row.witnesses) == (3, 2, (5,))

    row = brute_force_N(2)
    assert (row.n_big, row.witnesses) == (0, (1,))


def test_brute_force_1024():
    row = brute_force_N(1024)
    assert (row.m, row.n_big) == (7, 7)
    assert 633 in row.witnesses
    assert all(iteration_count(1024, c) == 7 for c in row.witnesses)


def test_brute_force_ceiling():
    with pytest.raises(TooLarge) as exc_info:
        brute_force_N(100, ceiling=50)
    assert exc_info.value.k == 100

    with pytest.raises(InvalidInput):
        brute_force_N(1)


def test_brute_force_workers_agree():
    k = 3 * 2 ** 16 + 7
    assert brute_force_N(k, workers=2) == brute_force_N(k, workers=1)


def test_unwind_and_recover():
    tr = jwa_trace(1024, 633)
    n = tr.remainders
    assert unwind_remainders(tr.quotients, n[-1], n[-2]) == n
    assert recover_c(1024, tr.quotients, n[-1], n[-2]) == 633

    assert unwind_remainders([1, 2], 1, 5) == [16, 11, 5, 1]
    assert recover_c(16, [1], 5, 11) == 11

    with pytest.raises(Inconsistent):
        recover_c(17, [1], 5, 11)
    with pytest.raises(InvalidInput):
        recover_c(16, [1], 11, 5)


def test_sigma_15849():
    cands = sigma_solutions(15849, 10, 2)
    assert len(cands) == 1
    cand = cands[0]
    assert (cand.n_tm1, cand.n_t, cand.c) == (127, 3, 11468)
    assert (cand.d_t_abs, cand.d_tm1_abs) == (123, 76)
    assert cand.accepted and cand.reject_reason == ''
    assert cand.n_tm1 * cand.d_t_abs + cand.n_t * cand.d_tm1_abs == 15849
    assert iteration_count(15849, 11468) == 10
    assert cand.to_dict()['pattern'] == list(single_two_pattern(10, 2))


def test_sigma_2_24_rejected():
    cands = sigma_solutions(2 ** 24, 17, 2)
    assert len(cands) == 1
    cand = cands[0]
    assert (cand.n_tm1, cand.n_t) == (4404, 476)
    assert cand.c == 12140108
    assert not cand.accepted
    assert cand.reject_reason == 'gcd(n_t, n_{t-1}) > 1'
    assert math.gcd(2 ** 24, cand.c) > 1


def test_sigma_large_continuant_is_empty():
    # |d_t|**2 >= k leaves nothing to solve
    assert sigma_solutions(100, 10, 5) == []

    with pytest.raises(InvalidInput):
        sigma_solutions(15849, 10, 11)
    with pytest.raises(InvalidInput):
        sigma_solutions(15849, 10, 0)


def test_pattern_solutions_follow_pattern():
    k = 4096
    for t in range(6, m_of_k(k) + 1):
        for pattern in iter_patterns(k, t):
            for cand in pattern_solutions(k, pattern):
                assert cand.n_tm1 * cand.d_t_abs + cand.n_t * cand.d_tm1_abs == k
                if not cand.accepted:
                    continue
                tr = jwa_trace(k, cand.c)
                assert tr.t == t
                assert tr.quotients == list(pattern)
                assert tr.remainders[-2:] == [cand.n_tm1, cand.n_t]


def _continuant(q):
    d_prev, d_cur = 0, 1
    for x in q:
        d_prev, d_cur = d_cur, d_prev - x * d_cur
    return abs(d_cur)


@pytest.mark.parametrize('k, t', [(1000, 1), (1000, 3), (5000, 4), (15849, 10)])
def test_iter_patterns_exhaustive(k, t):
    found = [p.q for p in iter_patterns(k, t)]
    assert found == sorted(found)
    assert all(_continuant(q) ** 2 < k for q in found)

    top = math.isqrt(k) + 1
    if top ** t > 10 ** 6:
        return
    expected = [q for q in itertools.product(range(1, top + 1), repeat=t)
                if _continuant(q) ** 2 < k]
    assert found == expected


def test_iter_patterns_at_m():
    # only the all-ones pattern and its single-2 neighbors fit at t = m
    k = 15849
    found = list(iter_patterns(k, m_of_k(k)))
    assert all(p.is_all_ones() or p.single_two_position() for p in found)

    with pytest.raises(InvalidInput):
        list(iter_patterns(k, 0))


def test_analytic_15849():
    row = analytic_N(15849)
    assert (row.m, row.n_big) == (10, 10)
    assert 11468 in row.witnesses
    assert row.complete and not row.fallback_used
    assert row.method == 'analytic'
    assert row == attr.evolve(brute_force_N(15849), method='analytic')


@pytest.mark.parametrize('k, m, n_big', [(90, 5, 3), (1024, 7, 7), (4096, 9, 8)])
def test_analytic_known(k, m, n_big):
    row = analytic_N(k)
    assert (row.m, row.n_big) == (m, n_big)
    assert row.witnesses == brute_force_N(k).witnesses


def test_analytic_single_two_family():
    row = analytic_N(4096, family='single-two')
    assert row.n_big == 8
    assert not row.complete

    row = analytic_N(15849, family='single-two')
    assert row.n_big == row.m
    assert row.complete

    with pytest.raises(InvalidInput):
        analytic_N(4096, family='two-twos')
    with pytest.raises(InvalidInput):
        analytic_N(2)


def test_analytic_fallback(monkeypatch):
    monkeypatch.setattr(worst, 'FALLBACK_DEPTH', 0)

    with pytest.warns(FallbackUsed):
        row = analytic_N(4096)
    assert row.fallback_used
    assert row.method == 'analytic'
    assert row.n_big == 8

    # above the ceiling, the analytic search carries on
    with pytest.warns(FallbackUsed):
        row = analytic_N(4096, ceiling=100)
    assert row.fallback_used
    assert row.n_big == 8
    assert row.witnesses == brute_force_N(4096).witnesses


def test_worst_case_cs():
    assert worst_case_cs(16) == [9, 11]
    assert 633 in worst_case_cs(1024)
    assert 11468 in worst_case_cs(15849, ceiling=100)
    assert worst_case_cs(4096, ceiling=100) == list(brute_force_N(4096).witnesses)

    with pytest.raises(TooLarge):
        worst_case_cs(4096, ceiling=100, family='single-two')

    row = worst_case_row(4096, ceiling=100, family='single-two')
    assert not row.complete and row.n_big == 8


def test_table_rows():
    rows = table_rows([16, 64], method='both')
    assert [(r.k, r.m, r.n_big) for r in rows] == [(16, 3, 2), (64, 5, 4)]
    assert all(r.method == 'both' and r.complete for r in rows)

    assert table_rows([]) == []
    assert table_rows([1024], method='brute')[0].n_big == 7

    with pytest.raises(InvalidInput):
        table_rows([16], method='guess')


def test_table_rows_mismatch(monkeypatch):
    def bad_analytic(k, family=None, ceiling=None):
        return TableRow(k, m_of_k(k), m_of_k(k), [1], 'analytic')

    monkeypatch.setattr(worst, 'analytic_N', bad_analytic)
    with pytest.raises(MethodMismatch) as exc_info:
        table_rows([64], method='both')
    assert exc_info.value.k == 64
    assert 'brute N=4' in str(exc_info.value)
    assert isinstance(exc_info.value, Inconsistent)

    def short_analytic(k, family=None, ceiling=None):
        return attr.evolve(brute_force_N(k), witnesses=(1,), witness_count=1)

    monkeypatch.setattr(worst, 'analytic_N', short_analytic)
    with pytest.raises(MethodMismatch) as exc_info:
        table_rows([64], method='both')
    assert 'witness lists differ' in str(exc_info.value)


def test_even_powers_of_two():
    ks = even_powers_of_two(2, 16)
    assert len(ks) == 15
    assert ks[0] == 16 and ks[-1] == 2 ** 32
    assert even_powers_of_two(3, 2) == []


def test_scan_lower_bound():
    report = scan_lower_bound(range(3, 400))
    assert report.checked == 397
    assert sum(report.gaps.values()) == report.checked
    assert min(report.gaps) >= 0
    for row in report.violations:
        assert row.m - row.n_big > 2
    assert 90 not in [row.k for row in report.violations]

    report = scan_lower_bound(even_powers_of_two(2, 8))
    assert report.pow4_below == []
    assert report.violations == []


def test_scan_lower_bound_flags_pow4(monkeypatch):
    def low_row(k, family=None, ceiling=None):
        return TableRow(k, m_of_k(k), m_of_k(k) - 3, [1], 'analytic')

    monkeypatch.setattr(worst, 'analytic_N', low_row)
    report = scan_lower_bound([16, 17, 64])
    assert [row.k for row in report.pow4_below] == [16, 64]
    assert [row.k for row in report.violations] == [16, 17, 64]
    assert report.gaps == {3: 3}


def test_scan_lower_bound_catches_upper_bound(monkeypatch):
    def high_row(k, family=None, ceiling=None):
        return TableRow(k, m_of_k(k), m_of_k(k) + 1, [1], 'analytic')

    monkeypatch.setattr(worst, 'analytic_N', high_row)
    with pytest.raises(Inconsistent):
        scan_lower_bound([100])
