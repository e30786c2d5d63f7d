"""Fibonacci machinery for the worst case of the reduction loop.

The loop on ``(k, c)`` runs longest when the partial quotients of
``k/c`` are all ones, so Fibonacci numbers bound everything here:
``m(k)``, the largest ``i`` with ``F_{i+1} <= sqrt(k)``, caps the
iteration count, and the open intervals ``I_p(k)`` between
consecutive Fibonacci ratios of *k* collect the inputs whose
continued fraction starts with *p* ones.

Indexing follows ``F_0 = 0, F_1 = F_2 = 1``.
"""

import math
from fractions import Fraction

import attr
from sympy import primefactors

from .core import InvalidInput, DivisionByZero, Overflow, MAX_INPUT

FIB_LIMIT = 90


def _build_fibs(limit):
    fibs = [0, 1]
    while len(fibs) <= limit:
        fibs.append(fibs[-1] + fibs[-2])
    return tuple(fibs)


_FIBS = _build_fibs(FIB_LIMIT)

PHI = (1 + math.sqrt(5)) / 2


def fib(i):
    """Return the Fibonacci number ``F_i``.

    >>> [fib(i) for i in range(11)]
    [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
    """
    if i < 0:
        raise InvalidInput('fib', f'expected i >= 0, got {i}', i=i)
    if i > FIB_LIMIT:
        raise Overflow('Fibonacci index', i, FIB_LIMIT)
    return _FIBS[i]


def m_of_k(k):
    """Return ``m(k)``, the largest ``i >= 0`` with ``F_{i+1}**2 <= k``.
    This bounds the iteration count of every run modulo *k*.

    >>> m_of_k(1024), m_of_k(15849), m_of_k(4096)
    (7, 10, 9)
    """
    if k < 1:
        raise InvalidInput('m_of_k', f'expected k >= 1, got {k}', k=k)
    if k > MAX_INPUT:
        raise Overflow('modulus', k, MAX_INPUT)
    i = 0
    while _FIBS[i + 2] ** 2 <= k:
        i += 1
    return i


def log_phi_bounds(k):
    """Return ``(floor, ceil)`` of ``log_phi(sqrt(k))``. ``m(k)`` is
    always one of the two; this is a floating point sanity check, the
    exact value comes from :func:`m_of_k`.
    """
    x = math.log(math.sqrt(k)) / math.log(PHI)
    return math.floor(x), math.ceil(x)


def _check_pattern(instance, attribute, value):
    for q in value:
        if not isinstance(q, int) or q < 1:
            raise InvalidInput('QuotientPattern', f'expected quotients >= 1, got {q!r}',
                               q=value)


@attr.s(frozen=True)
class QuotientPattern:
    """A finite sequence of partial quotients ``q_1 ... q_len``.

    >>> QuotientPattern([1, 2, 1]).continuant()
    4
    """
    q = attr.ib(converter=tuple, validator=_check_pattern)

    def __len__(self):
        return len(self.q)

    def __iter__(self):
        return iter(self.q)

    def __getitem__(self, idx):
        return self.q[idx]

    def continuant(self):
        return abs(d_sequence(self)[-1])

    def is_all_ones(self):
        return all(q == 1 for q in self.q)

    def single_two_position(self):
        """The 1-based position of the only 2 in an otherwise all-ones
        pattern, or ``None`` for any other shape."""
        twos = [i for i, q in enumerate(self.q, 1) if q == 2]
        if len(twos) == 1 and all(q in (1, 2) for q in self.q):
            return twos[0]
        return None


def as_pattern(pattern):
    if isinstance(pattern, QuotientPattern):
        return pattern
    return QuotientPattern(pattern)


def single_two_pattern(length, p):
    """All ones, except a 2 at 1-based position *p*.

    >>> single_two_pattern(4, 2).q
    (1, 2, 1, 1)
    """
    if not 1 <= p <= length:
        raise InvalidInput('single_two_pattern', f'expected 1 <= p <= length, got p={p}',
                           length=length, p=p)
    return QuotientPattern((2 if i == p else 1) for i in range(1, length + 1))


@attr.s(frozen=True)
class IntervalSpec:
    """The open interval ``I_p(k)``, kept as exact rational bounds
    ``lo_num/lo_den < c < hi_num/hi_den``. For even *p* the bounds are
    ``(F_p/F_{p+1})k`` and ``(F_{p+1}/F_{p+2})k``; odd *p* swaps them.
    """
    k = attr.ib()
    p = attr.ib()
    lo_num = attr.ib()
    lo_den = attr.ib()
    hi_num = attr.ib()
    hi_den = attr.ib()

    def __contains__(self, c):
        return c * self.lo_den > self.lo_num and c * self.hi_den < self.hi_num

    @property
    def lo(self):
        return Fraction(self.lo_num, self.lo_den)

    @property
    def hi(self):
        return Fraction(self.hi_num, self.hi_den)

    def width(self):
        return self.hi - self.lo

    def first_member(self):
        return self.lo_num // self.lo_den + 1

    def last_member(self):
        return (self.hi_num - 1) // self.hi_den

    def member_count(self):
        return max(0, self.last_member() - self.first_member() + 1)

    def members(self):
        return range(self.first_member(), self.last_member() + 1)

    def coprime_count(self):
        """Count the members coprime to *k* without listing them, by
        inclusion-exclusion over the distinct primes of *k*."""
        first, last = self.first_member(), self.last_member()
        if last < first:
            return 0
        signed = [(1, 1)]
        for prime in primefactors(self.k):
            signed += [(d * prime, -sign) for d, sign in signed]
        return sum(sign * (last // d - (first - 1) // d) for d, sign in signed)


def interval_I(k, p):
    """Return the :class:`IntervalSpec` for ``I_p(k)``.

    >>> list(interval_I(16, 1).members())
    [9, 10, 11, 12, 13, 14, 15]
    >>> list(interval_I(15849, 10).members())
    [9795]
    """
    if p < 1:
        raise InvalidInput('interval_I', f'expected p >= 1, got {p}', k=k, p=p)
    if k < 1:
        raise InvalidInput('interval_I', f'expected k >= 1, got {k}', k=k, p=p)
    f_p, f_p1, f_p2 = fib(p), fib(p + 1), fib(p + 2)
    low, high = (f_p * k, f_p1), (f_p1 * k, f_p2)
    if p % 2:
        low, high = high, low
    return IntervalSpec(k, p, low[0], low[1], high[0], high[1])


def members_J(k, p):
    """Return ``J_p(k)``: the members of ``I_p(k)`` coprime to *k*, in
    ascending order.

    >>> members_J(16, 1)
    [9, 11, 13, 15]
    >>> members_J(15849, 10)
    []
    """
    return list(iter_members_J(k, p))


def iter_members_J(k, p):
    """Lazily yield ``J_p(k)`` in ascending order. For wide intervals,
    pair with :func:`itertools.islice`.

    >>> from itertools import islice
    >>> list(islice(iter_members_J(2 ** 32, 1), 3))
    [2147483649, 2147483651, 2147483653]
    """
    return (c for c in interval_I(k, p).members() if math.gcd(k, c) == 1)


def cf_expansion(num, den):
    """Return the canonical continued fraction of ``num/den`` as a
    :class:`QuotientPattern`; the last quotient is at least 2 whenever
    there is more than one.

    >>> cf_expansion(1024, 633).q
    (1, 1, 1, 1, 1, 1, 1, 1, 1, 18)
    """
    if den == 0:
        raise DivisionByZero('cf_expansion', 'zero denominator', num=num, den=den)
    if den < 0 or num < den:
        raise InvalidInput('cf_expansion', 'expected num >= den >= 1', num=num, den=den)
    quotients = []
    while den:
        q, r = divmod(num, den)
        quotients.append(q)
        num, den = den, r
    return QuotientPattern(quotients)


def convergents(pattern):
    """Return the convergents ``h_i/k_i`` of a continued fraction as
    ``(numerator, denominator)`` pairs.

    >>> convergents([2, 3])
    [(2, 1), (7, 3)]
    """
    h_prev, h_cur = 0, 1
    k_prev, k_cur = 1, 0
    ret = []
    for q in as_pattern(pattern):
        h_prev, h_cur = h_cur, q * h_cur + h_prev
        k_prev, k_cur = k_cur, q * k_cur + k_prev
        ret.append((h_cur, k_cur))
    return ret


def ones_prefix_len(pattern):
    """Return the length of the all-ones prefix of *pattern*.

    >>> ones_prefix_len([1, 1, 1, 2, 1])
    3
    """
    count = 0
    for q in pattern:
        if q != 1:
            break
        count += 1
    return count


def d_sequence(pattern):
    """Return the signed cofactors ``d_0 ... d_len`` driven by
    *pattern*, where ``d_{-1} = 0``, ``d_0 = 1`` and
    ``d_i = d_{i-2} - q_i*d_{i-1}``. The absolute values are the
    continuants of the pattern.

    >>> d_sequence([1, 2, 1])
    [1, -1, 3, -4]
    """
    pattern = as_pattern(pattern)
    if not len(pattern):
        raise InvalidInput('d_sequence', 'expected a nonempty pattern', q=pattern.q)
    d_prev, d_cur = 0, 1
    ret = [d_cur]
    for q in pattern:
        d_prev, d_cur = d_cur, d_prev - q * d_cur
        if abs(d_cur) > MAX_INPUT:
            raise Overflow('cofactor', abs(d_cur), MAX_INPUT)
        ret.append(d_cur)
    return ret


def dm_closed_form(m, p):
    """Return ``|d_m|`` for the length-*m* pattern of ones with a single
    2 at position *p*: ``F_{m-p+1}*F_{p+2} + F_{m-p}*F_p``.

    >>> dm_closed_form(10, 2), dm_closed_form(17, 2)
    (123, 3571)
    """
    if not 1 <= p <= m:
        raise InvalidInput('dm_closed_form', 'expected 1 <= p <= m', m=m, p=p)
    return fib(m - p + 1) * fib(p + 2) + fib(m - p) * fib(p)


def lemma2_thresholds(m):
    """Return the smallest ``|d_m|`` reachable by a length-*m* pattern
    with a single 2, with any quotient of 3 or more, and with two 2s:
    ``(F_{m+1} + F_{m-1}, F_{m+2}, F_{m+2} + 2*F_{m-3})``.

    >>> lemma2_thresholds(3)
    (4, 5, 5)
    """
    if m < 3:
        raise InvalidInput('lemma2_thresholds', f'expected m >= 3, got {m}', m=m)
    return (fib(m + 1) + fib(m - 1),
            fib(m + 2),
            fib(m + 2) + 2 * fib(m - 3))
