"""Worst-case inputs of the reduction loop.

``N(k)`` is the largest iteration count ``t(k, c)`` over all *c*
coprime to *k* in ``(0, k)``. This module computes it two independent
ways:

* :func:`brute_force_N` runs every *c*. It is the oracle, and only
  runs up to a configurable ceiling.
* :func:`analytic_N` searches downward from ``t = m(k)``. At each
  level it scans the Fibonacci interval ``J_t(k)``, then solves, for
  every quotient pattern that can still end a run at *t*, the
  Diophantine system ``n_{t-1}*|d_t| + n_t*|d_{t-1}| = k`` for the
  trailing pair of remainders, and rebuilds *c* from each solution.

Both return a :class:`TableRow`.
"""

import os
import math
import logging
import warnings
from functools import partial, reduce
from itertools import repeat
from concurrent.futures import ProcessPoolExecutor

import attr
from boltons.iterutils import chunk_ranges

from .core import (InvalidInput,
                   NotInvertible,
                   TooLarge,
                   Inconsistent,
                   NoInverse,
                   MAX_INPUT,
                   isqrt_ceil,
                   mod_inverse,
                   _count)
from .fib import (fib,
                  m_of_k,
                  iter_members_J,
                  d_sequence,
                  as_pattern,
                  single_two_pattern,
                  QuotientPattern)

logger = logging.getLogger(__name__)


def _env_int(name, default):
    value = os.getenv(name, '').strip()
    return int(value) if value else default


BRUTE_CEILING = _env_int('JWA_BRUTE_CEILING', 2 ** 24)
WITNESS_CAP = _env_int('JWA_WITNESS_CAP', 64)
WORKERS = _env_int('JWA_WORKERS', 1)

# how far below m(k) the analytic search goes before handing off to brute force
FALLBACK_DEPTH = 4

_CHUNK_SIZE = 1 << 16

BRUTE, ANALYTIC, BOTH = 'brute', 'analytic', 'both'
METHODS = (BRUTE, ANALYTIC, BOTH)

FAMILY_ALL, FAMILY_SINGLE_TWO = 'all', 'single-two'
PATTERN_FAMILIES = (FAMILY_ALL, FAMILY_SINGLE_TWO)

ACCEPTED, REJECTED = 'accepted', 'rejected'


class FallbackUsed(UserWarning):
    """Issued when :func:`analytic_N` descends more than
    ``FALLBACK_DEPTH`` levels below ``m(k)`` and hands the row over to
    brute force. The row records it in ``fallback_used``."""


class MethodMismatch(Inconsistent):
    """Raised when the brute force and analytic results for the same *k*
    disagree.

    Args:
       k (int): The modulus.
       brute (TableRow): The exhaustive result.
       analytic (TableRow): The analytic result.
    """
    def __init__(self, k, brute, analytic):
        self.k = k
        self.brute = brute
        self.analytic = analytic
        if brute.n_big != analytic.n_big:
            detail = f'k={k}: brute N={brute.n_big}, analytic N={analytic.n_big}'
        else:
            detail = (f'k={k}: N={brute.n_big} agrees, but witness lists differ'
                      f' ({brute.witness_count} brute, {analytic.witness_count} analytic)')
        super().__init__('table_rows', detail)


@attr.s(frozen=True)
class SigmaCandidate:
    """One solution attempt of the Diophantine system for a quotient
    pattern of length *t*. Every candidate satisfies
    ``n_tm1*d_t_abs + n_t*d_tm1_abs == k``; *status* says whether it
    also survives the exit bounds, the coprimality tests and a forward
    run, and *reject_reason* says why not.

    *p* is the position of the single 2 for the patterns of
    :func:`sigma_solutions`, and ``None`` for other shapes.
    """
    k = attr.ib()
    t = attr.ib()
    p = attr.ib()
    d_t_abs = attr.ib()
    d_tm1_abs = attr.ib()
    n_tm1 = attr.ib()
    n_t = attr.ib()
    c = attr.ib()
    status = attr.ib()
    reject_reason = attr.ib(default='')
    pattern = attr.ib(default=None, repr=False)

    @property
    def accepted(self):
        return self.status == ACCEPTED

    def to_dict(self):
        return {'t': self.t, 'p': self.p,
                'd_t': self.d_t_abs, 'd_tm1': self.d_tm1_abs,
                'n_tm1': self.n_tm1, 'n_t': self.n_t,
                'c': self.c, 'status': self.status,
                'reject_reason': self.reject_reason,
                'pattern': list(self.pattern) if self.pattern is not None else None}


@attr.s(frozen=True)
class TableRow:
    """``(k, m(k), N(k))`` with the inputs *c* reaching ``N(k)``.

    *n_big* is ``N(k)``. *complete* is true when *witnesses* is known
    to hold every such *c*. *fallback_used* marks analytic rows that
    were finished by brute force.
    """
    k = attr.ib()
    m = attr.ib()
    n_big = attr.ib()
    witnesses = attr.ib(converter=tuple)
    method = attr.ib()
    witness_count = attr.ib(default=attr.Factory(lambda self: len(self.witnesses),
                                                 takes_self=True))
    complete = attr.ib(default=True)
    fallback_used = attr.ib(default=False)


@attr.s
class ScanReport:
    """Outcome of :func:`scan_lower_bound`. Nothing in here is an
    error: *violations* lists rows with ``N(k) < m(k) - 2`` and
    *pow4_below* lists even powers of two with ``N(k) < m(k) - 1``.
    *gaps* counts rows by ``m(k) - N(k)``.
    """
    checked = attr.ib(default=0)
    violations = attr.ib(default=attr.Factory(list))
    pow4_below = attr.ib(default=attr.Factory(list))
    gaps = attr.ib(default=attr.Factory(dict))


def _check_k(op, k, low):
    if not isinstance(k, int) or isinstance(k, bool) or k < low:
        raise InvalidInput(op, f'expected integer k >= {low}, got {k!r}', k=k)
    if k > MAX_INPUT:
        raise InvalidInput(op, f'expected k <= 2**62, got {k}', k=k)


def _check_family(family):
    family = FAMILY_ALL if family is None else family
    if family not in PATTERN_FAMILIES:
        raise InvalidInput('analytic_N', f'expected family in {PATTERN_FAMILIES!r}',
                           family=family)
    return family


def _scan_chunk(k, bounds):
    start, stop = bounds
    gcd = math.gcd
    best, found = -1, []
    for c in range(start, stop):
        if gcd(k, c) != 1:
            continue
        t = _count(k, c)
        if t > best:
            best, found = t, [c]
        elif t == best:
            found.append(c)
    return best, found


def _merge_partials(left, right):
    if left[0] != right[0]:
        return max(left, right, key=lambda part: part[0])
    return left[0], left[1] + right[1]


def brute_force_N(k, ceiling=None, workers=None):
    """Compute ``N(k)`` by running every coprime *c*, returning a
    complete :class:`TableRow` with ascending witnesses.

    >>> row = brute_force_N(16)
    >>> row.n_big, row.witnesses
    (2, (9, 11))

    The range is split into disjoint chunks; with *workers* above 1
    they run in a process pool and the partial maxima are merged.
    """
    ceiling = BRUTE_CEILING if ceiling is None else ceiling
    workers = WORKERS if workers is None else workers
    _check_k('brute_force_N', k, 2)
    if k > ceiling:
        raise TooLarge('brute_force_N', k, ceiling)

    chunks = list(chunk_ranges(k - 1, _CHUNK_SIZE, input_offset=1))
    if workers > 1 and len(chunks) > 1:
        logger.debug('brute_force_N k=%s: %s chunks over %s workers', k, len(chunks), workers)
        with ProcessPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(_scan_chunk, repeat(k), chunks))
    else:
        parts = [_scan_chunk(k, bounds) for bounds in chunks]
    best, found = reduce(_merge_partials, parts)

    m = m_of_k(k)
    if best > m:
        raise Inconsistent('brute_force_N', f'k={k}: t={best} exceeds m(k)={m}')
    return TableRow(k, m, best, sorted(found), BRUTE)


def unwind_remainders(pattern, n_t, n_tm1):
    """Run the remainder recurrence backwards from the trailing pair,
    ``n_{i-1} = n_{i+1} + q_{i+1}*n_i``, and return ``n_{-1} ... n_t``.

    >>> unwind_remainders([1, 2], 1, 5)
    [16, 11, 5, 1]
    """
    pattern = as_pattern(pattern)
    rev = [n_t, n_tm1]
    for q in reversed(pattern.q):
        rev.append(rev[-2] + q * rev[-1])
    rev.reverse()
    return rev


def recover_c(k, pattern, n_t, n_tm1):
    """Rebuild the input *c* whose run on *k* follows *pattern* and ends
    on the remainders ``(n_{t-1}, n_t)``.

    *c* is computed twice: by :func:`unwind_remainders`, which must also
    land exactly on ``n_{-1} = k``, and as ``n_{t-1}/d_{t-1} mod k``
    with the signed cofactor ``d_{t-1}``. The two must agree.

    >>> recover_c(16, [1], 5, 11)
    11
    """
    pattern = as_pattern(pattern)
    if not len(pattern):
        raise InvalidInput('recover_c', 'expected a nonempty pattern', k=k, q=pattern.q)
    if not 0 < n_t < n_tm1:
        raise InvalidInput('recover_c', 'expected 0 < n_t < n_tm1', n_t=n_t, n_tm1=n_tm1)
    remainders = unwind_remainders(pattern, n_t, n_tm1)
    if remainders[0] != k:
        raise Inconsistent('recover_c', f'backward recurrence gives n_-1={remainders[0]},'
                           f' expected k={k}')
    c = remainders[1]
    d_tm1 = d_sequence(pattern)[-2]
    by_inverse = n_tm1 * mod_inverse(d_tm1, k) % k
    if by_inverse != c:
        raise Inconsistent('recover_c', f'backward recurrence gives c={c},'
                           f' modular formula gives c={by_inverse}')
    return c


def _rebuild_c(k, pattern, n_t, n_tm1):
    try:
        return recover_c(k, pattern, n_t, n_tm1)
    except NotInvertible:
        # d_{t-1} shares a factor with k; only the backward recurrence applies
        logger.debug('recover_c: d_{t-1} not invertible modulo %s, unwinding only', k)
        return unwind_remainders(pattern, n_t, n_tm1)[1]


def _judge(k, pattern, p, d_t, d_tm1, n_tm1, n_t):
    t = len(pattern)
    make = partial(SigmaCandidate, k, t, p, d_t, d_tm1, n_tm1, n_t, pattern=pattern)
    if not n_t * n_t < k <= n_tm1 * n_tm1:
        return make(None, REJECTED, 'exit bounds n_t^2 < k <= n_{t-1}^2 fail')
    c = _rebuild_c(k, pattern, n_t, n_tm1)
    if math.gcd(n_t, n_tm1) != 1:
        return make(c, REJECTED, 'gcd(n_t, n_{t-1}) > 1')
    if math.gcd(k, c) != 1:
        return make(c, REJECTED, 'gcd(k, c) > 1')
    if _count(k, c) != t:
        return make(c, REJECTED, 'forward verification t mismatch')
    return make(c, ACCEPTED)


def pattern_solutions(k, pattern, p=None):
    """Solve the Diophantine system for an arbitrary quotient *pattern*
    of length *t* and return every :class:`SigmaCandidate`, rejected ones
    included, by ascending ``n_{t-1}``.

    ``n_{t-1}*|d_t| + n_t*|d_{t-1}| = k`` is solved modulo ``|d_{t-1}|``,
    which fixes ``n_{t-1}`` up to multiples of ``|d_{t-1}|``; the range
    ``n_{t-1}**2 >= k`` and ``n_{t-1}*|d_t| < k`` leaves finitely many.
    Patterns with ``|d_t|**2 >= k`` cannot end a run and give no
    candidates.
    """
    pattern = as_pattern(pattern)
    d = d_sequence(pattern)
    d_t, d_tm1 = abs(d[-1]), abs(d[-2])
    if d_t * d_t >= k:
        return []
    if math.gcd(d_t, d_tm1) != 1:
        raise NoInverse('pattern_solutions',
                        f'consecutive continuants {d_tm1} and {d_t} share a factor')
    residue = k * pow(d_t, -1, d_tm1) % d_tm1 if d_tm1 > 1 else 0
    lo, hi = isqrt_ceil(k), (k - 1) // d_t
    start = lo + (residue - lo) % d_tm1
    ret = []
    for n_tm1 in range(start, hi + 1, d_tm1):
        n_t = (k - n_tm1 * d_t) // d_tm1
        ret.append(_judge(k, pattern, p, d_t, d_tm1, n_tm1, n_t))
    return ret


def sigma_solutions(k, t, p):
    """Solve the Diophantine system for the length-*t* all-ones pattern
    with a single 2 at position *p*.

    >>> [(s.n_tm1, s.n_t, s.c, s.status) for s in sigma_solutions(15849, 10, 2)]
    [(127, 3, 11468, 'accepted')]
    """
    if not 1 <= p <= t:
        raise InvalidInput('sigma_solutions', 'expected 1 <= p <= t', k=k, t=t, p=p)
    return pattern_solutions(k, single_two_pattern(t, p), p=p)


def iter_patterns(k, t):
    """Yield, in lexicographic order, every length-*t* quotient pattern
    whose continuant satisfies ``|d_t|**2 < k``.

    Continuants grow with every quotient, so a prefix is abandoned as
    soon as completing it with ones already reaches ``sqrt(k)``.
    """
    if t < 1:
        raise InvalidInput('iter_patterns', f'expected t >= 1, got {t}', k=k, t=t)
    prefix = []

    def _walk(k_prev, k_cur, remaining):
        if not remaining:
            yield QuotientPattern(prefix)
            return
        rest = remaining - 1
        q = 1
        while True:
            k_next = k_prev + q * k_cur
            lowest = fib(rest + 1) * k_next + fib(rest) * k_cur
            if lowest * lowest >= k:
                break
            prefix.append(q)
            yield from _walk(k_cur, k_next, rest)
            prefix.pop()
            q += 1

    return _walk(0, 1, t)


def _level_witnesses(k, t, family):
    found = [c for c in iter_members_J(k, t) if _count(k, c) == t]
    if (fib(t + 1) + fib(t - 1)) ** 2 < k:
        for p in range(1, t + 1):
            found.extend(cand.c for cand in sigma_solutions(k, t, p) if cand.accepted)
        if family == FAMILY_ALL:
            for pattern in iter_patterns(k, t):
                if pattern.is_all_ones() or pattern.single_two_position():
                    continue
                found.extend(cand.c for cand in pattern_solutions(k, pattern)
                             if cand.accepted)
    return sorted(set(found))


def analytic_N(k, family=None, ceiling=None):
    """Compute ``N(k)`` without running every *c*.

    Starting from ``t = m(k)``, a level is accepted when some member
    of ``J_t(k)`` runs for exactly *t* iterations, or, when
    ``F_{t+1} + F_{t-1} < sqrt(k)``, when the Diophantine system has an
    accepted solution; otherwise *t* drops by one. ``k - 1`` is always
    in ``J_1(k)``, so the search ends.

    *family* picks the quotient patterns solved at each level:
    ``'single-two'`` solves only the all-ones patterns with one 2, and
    that list is only known to be exhaustive at ``t = m(k)``.
    ``'all'`` (the default) also solves every other pattern with
    ``|d_t|**2 < k``, which makes each level exhaustive. Both agree
    at ``t = m(k)``.

    >>> row = analytic_N(15849)
    >>> row.m, row.n_big, 11468 in row.witnesses
    (10, 10, True)
    """
    family = _check_family(family)
    ceiling = BRUTE_CEILING if ceiling is None else ceiling
    _check_k('analytic_N', k, 3)
    m = m_of_k(k)
    fallback_used = False
    t = m
    while t >= 1:
        if t < m - FALLBACK_DEPTH and not fallback_used:
            fallback_used = True
            warnings.warn(FallbackUsed(f'analytic_N descended to t={t} for k={k} (m={m})'))
            if k <= ceiling:
                row = brute_force_N(k, ceiling=ceiling)
                return attr.evolve(row, method=ANALYTIC, fallback_used=True)
            logger.warning('analytic_N: k=%s is above the brute force ceiling,'
                           ' continuing the analytic search at t=%s', k, t)
        witnesses = _level_witnesses(k, t, family)
        logger.debug('analytic_N k=%s t=%s: %s witnesses', k, t, len(witnesses))
        if witnesses:
            complete = family == FAMILY_ALL or t == m
            return TableRow(k, m, t, witnesses, ANALYTIC,
                            complete=complete, fallback_used=fallback_used)
        t -= 1
    raise Inconsistent('analytic_N', f'no level accepted for k={k}')


def worst_case_row(k, ceiling=None, family=None, workers=None):
    """Return the :class:`TableRow` for *k*, by brute force at or below
    the ceiling and analytically above it."""
    ceiling = BRUTE_CEILING if ceiling is None else ceiling
    _check_k('worst_case_cs', k, 3)
    if k <= ceiling:
        return brute_force_N(k, ceiling=ceiling, workers=workers)
    return analytic_N(k, family=family, ceiling=ceiling)


def worst_case_cs(k, ceiling=None, family=None, workers=None):
    """Return every *c* with ``t(k, c) == N(k)``, ascending.

    >>> worst_case_cs(16)
    [9, 11]

    Raises :exc:`TooLarge` when *k* is above the ceiling and the
    analytic search cannot vouch for a complete list.
    """
    ceiling = BRUTE_CEILING if ceiling is None else ceiling
    row = worst_case_row(k, ceiling=ceiling, family=family, workers=workers)
    if not row.complete:
        raise TooLarge('worst_case_cs', k, ceiling)
    return list(row.witnesses)


def _both_row(k, ceiling, family, workers):
    brute = brute_force_N(k, ceiling=ceiling, workers=workers)
    analytic = analytic_N(k, family=family, ceiling=ceiling)
    if brute.n_big != analytic.n_big:
        raise MethodMismatch(k, brute, analytic)
    if analytic.complete and analytic.witnesses != brute.witnesses:
        raise MethodMismatch(k, brute, analytic)
    return attr.evolve(brute, method=BOTH, fallback_used=analytic.fallback_used)


def table_row(k, method=ANALYTIC, ceiling=None, family=None, workers=None):
    if method == BRUTE:
        return brute_force_N(k, ceiling=ceiling, workers=workers)
    elif method == ANALYTIC:
        return analytic_N(k, family=family, ceiling=ceiling)
    elif method == BOTH:
        return _both_row(k, ceiling, family, workers)
    raise InvalidInput('table_rows', f'expected method in {METHODS!r}', method=method)


def table_rows(ks, method=ANALYTIC, ceiling=None, family=None, workers=None):
    """Return one :class:`TableRow` per *k*, in input order. With
    ``method='both'`` each row is computed both ways, and any
    disagreement raises :exc:`MethodMismatch`.

    >>> [(r.k, r.m, r.n_big) for r in table_rows([16, 64], method='both')]
    [(16, 3, 2), (64, 5, 4)]
    """
    if method not in METHODS:
        raise InvalidInput('table_rows', f'expected method in {METHODS!r}', method=method)
    return [table_row(k, method, ceiling=ceiling, family=family, workers=workers)
            for k in ks]


def even_powers_of_two(min_s=2, max_s=16):
    """The moduli ``2**(2s)`` for ``min_s <= s <= max_s``.

    >>> even_powers_of_two(2, 4)
    [16, 64, 256]
    """
    return [2 ** (2 * s) for s in range(min_s, max_s + 1)]


def _is_even_power_of_two(k):
    return k > 1 and k & (k - 1) == 0 and (k.bit_length() - 1) % 2 == 0


def scan_lower_bound(ks, family=None, ceiling=None):
    """Compute ``N(k)`` analytically for every *k* in *ks* and report,
    without raising, where ``N(k) < m(k) - 2``, and which even powers of
    two have ``N(k) < m(k) - 1``. ``N(k) <= m(k)`` always holds, so a
    row above ``m(k)`` raises :exc:`Inconsistent`.
    """
    report = ScanReport()
    for k in ks:
        row = analytic_N(k, family=family, ceiling=ceiling)
        gap = row.m - row.n_big
        if gap < 0:
            raise Inconsistent('scan_lower_bound', f'k={k}: N={row.n_big} exceeds m={row.m}')
        report.checked += 1
        report.gaps[gap] = report.gaps.get(gap, 0) + 1
        if gap > 2:
            logger.info('scan_lower_bound: k=%s has N(k)=%s < m(k)-2=%s', k, row.n_big, row.m - 2)
            report.violations.append(row)
        if _is_even_power_of_two(k) and gap > 1:
            report.pow4_below.append(row)
    return report
