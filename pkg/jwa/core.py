"""*jwa* reduces pairs modulo *k*.

The ``jwa`` package centers on one loop, :func:`jwa_trace`, which
takes a modulus *k* and a reduced input ``c = x/y mod k`` and walks
the extended Euclidean recurrence on ``(k, c)`` until the current
remainder drops below ``sqrt(k)``. What comes out is a small pair
``(n, d)`` with ``n*y = d*x (mod k)``, the building block of k-ary
GCD reduction.

A few conventional terms you'll see below:

* **trace** - the full record of one run: quotients ``q_i``,
  remainders ``n_i`` and signed cofactors ``d_i`` for
  ``i = -1, 0, 1, ..., t``.
* **t** - the iteration count of a run, ``t(k, c)``.

All arithmetic here is exact integer arithmetic; the loop test
``n >= sqrt(k)`` is always evaluated as ``n*n >= k``.
"""

import math

import attr
from boltons.funcutils import format_invocation

# all public inputs are bounded by this; products stay exact regardless
MAX_INPUT = 2 ** 62


class JWAError(Exception):
    """The base exception for all the errors that might be raised from
    ``jwa`` computations.

    Subtypes carry the offending values as attributes, so callers can
    react without parsing messages.
    """
    def __str__(self):
        try:
            exc_get_message = self.get_message
        except AttributeError:
            exc_get_message = super().__str__
        return exc_get_message()


class InvalidInput(JWAError, ValueError):
    """Raised when arguments violate an operation's preconditions, for
    instance a *c* that shares a factor with *k*:

    >>> jwa_trace(16, 4)
    Traceback (most recent call last):
    ...
    InvalidInput: jwa_trace(c=4, k=16): expected gcd(k, c) == 1, got 4

    Args:
       op (str): Name of the operation that rejected the input.
       reason (str): What was expected, and what was found.
       values: The relevant inputs, echoed in the message.
    """
    def __init__(self, op, reason, **values):
        self.op = op
        self.reason = reason
        self.values = values
        super().__init__(op, reason, values)

    def get_message(self):
        return f'{format_invocation(self.op, kwargs=self.values)}: {self.reason}'

    def __repr__(self):
        cn = self.__class__.__name__
        return format_invocation(cn, (self.op, self.reason), self.values)


class DivisionByZero(InvalidInput, ZeroDivisionError):
    """Raised when a zero denominator reaches a continued fraction
    expansion."""


class NotInvertible(JWAError, ValueError):
    """Raised when a modular inverse does not exist.

    >>> mod_inverse(6, 8)
    Traceback (most recent call last):
    ...
    NotInvertible: 6 has no inverse modulo 8 (gcd is 2)
    """
    def __init__(self, a, k, gcd):
        self.a = a
        self.k = k
        self.gcd = gcd
        super().__init__(a, k, gcd)

    def get_message(self):
        return f'{self.a} has no inverse modulo {self.k} (gcd is {self.gcd})'

    def __repr__(self):
        cn = self.__class__.__name__
        return format_invocation(cn, (self.a, self.k, self.gcd))


class Overflow(JWAError, OverflowError):
    """Raised when a value leaves the supported integer width, e.g. a
    Fibonacci index past the precomputed table."""
    def __init__(self, what, value, limit):
        self.what = what
        self.value = value
        self.limit = limit
        super().__init__(what, value, limit)

    def get_message(self):
        return f'{self.what} {self.value!r} exceeds the supported limit {self.limit!r}'


class TooLarge(JWAError, ValueError):
    """Raised when an exhaustive computation is requested above the
    configured brute force ceiling."""
    def __init__(self, op, k, ceiling):
        self.op = op
        self.k = k
        self.ceiling = ceiling
        super().__init__(op, k, ceiling)

    def get_message(self):
        return (f'{self.op} needs exhaustive search, but k={self.k} is above'
                f' the brute force ceiling {self.ceiling}')


class Inconsistent(JWAError):
    """Raised when two computations that must agree do not. This
    always indicates a bug, never bad input.
    """
    def __init__(self, op, detail):
        self.op = op
        self.detail = detail
        super().__init__(op, detail)

    def get_message(self):
        return f'{self.op}: {self.detail}'


class NoInverse(Inconsistent):
    """Raised when consecutive continuants turn out not to be coprime,
    which would make a Diophantine system unsolvable modulo one of
    them."""


def _check_positive(op, **values):
    for name, value in sorted(values.items()):
        if not isinstance(value, int) or isinstance(value, bool):
            raise InvalidInput(op, f'expected integer {name}, not {type(value).__name__}',
                               **values)
        if value <= 0:
            raise InvalidInput(op, f'expected positive {name}, got {value}', **values)
        if value > MAX_INPUT:
            raise InvalidInput(op, f'expected {name} <= 2**62, got {value}', **values)


def isqrt(n):
    """Return the integer square root of *n*, the ``r`` with
    ``r*r <= n < (r+1)*(r+1)``.

    >>> isqrt(15849)
    125
    """
    if n < 0:
        raise InvalidInput('isqrt', f'expected n >= 0, got {n}', n=n)
    return math.isqrt(n)


def isqrt_ceil(n):
    """Return the smallest ``r >= 0`` with ``r*r >= n``.

    >>> isqrt_ceil(16), isqrt_ceil(17)
    (4, 5)
    """
    if n <= 0:
        return 0
    return isqrt(n - 1) + 1


def mod_inverse(a, k):
    """Return ``w`` in ``[1, k-1]`` with ``a*w = 1 (mod k)``.

    >>> mod_inverse(5, 8)
    5
    """
    if not isinstance(k, int) or k <= 1:
        raise InvalidInput('mod_inverse', f'expected modulus k > 1, got {k!r}', a=a, k=k)
    g = math.gcd(a % k, k)
    if g != 1:
        raise NotInvertible(a, k, g)
    return pow(a % k, -1, k)


def mod_div(x, y, k):
    """Return ``c = x/y mod k``, the ``c`` in ``[1, k-1]`` with
    ``c*y = x (mod k)``.

    >>> mod_div(3, 5, 8)
    7
    """
    _check_positive('mod_div', x=x, y=y)
    if k <= 1:
        raise InvalidInput('mod_div', f'expected modulus k > 1, got {k}', x=x, y=y, k=k)
    y_inv = mod_inverse(y, k)
    g = math.gcd(x, k)
    if g != 1:
        raise InvalidInput('mod_div', f'expected gcd(k, x) == 1, got {g}', x=x, k=k)
    return x * y_inv % k


@attr.s(frozen=True)
class JwaInput:
    """The actual input data of a run: the modulus *k* and the reduced
    input *c*, with ``0 < c < k`` and ``gcd(k, c) == 1``."""
    k = attr.ib()
    c = attr.ib()

    @classmethod
    def checked(cls, k, c, op='jwa_trace'):
        _check_positive(op, k=k, c=c)
        if k <= 1:
            raise InvalidInput(op, f'expected k > 1, got {k}', k=k, c=c)
        if c >= k:
            raise InvalidInput(op, f'expected 0 < c < k, got c={c}', k=k, c=c)
        g = math.gcd(k, c)
        if g != 1:
            raise InvalidInput(op, f'expected gcd(k, c) == 1, got {g}', k=k, c=c)
        return cls(k, c)


@attr.s(frozen=True)
class TraceStep:
    """One row of a trace. *q* is ``None`` for the seed rows ``i = -1``
    and ``i = 0``."""
    i = attr.ib()
    q = attr.ib()
    n = attr.ib()
    d = attr.ib()

    def to_dict(self):
        return {'i': self.i, 'q': self.q, 'n': self.n, 'd': self.d}


@attr.s(frozen=True)
class ReducedPair:
    """The ``(n, d)`` output of a run. Unpacks like a tuple:

    >>> n, d = ReducedPair(19, -21)
    >>> (n, d)
    (19, -21)
    """
    n = attr.ib()
    d = attr.ib()

    def __iter__(self):
        return iter((self.n, self.d))


@attr.s(frozen=True)
class JwaTrace:
    """The full run record for one ``(k, c)``.

    *steps* holds rows for ``i = -1, 0, ..., t``; the seeds are
    ``n_{-1} = k, n_0 = c, d_{-1} = 0, d_0 = 1``.
    """
    input = attr.ib()
    steps = attr.ib(converter=tuple)
    t = attr.ib()

    @property
    def quotients(self):
        return [s.q for s in self.steps[2:]]

    @property
    def remainders(self):
        return [s.n for s in self.steps]

    @property
    def cofactors(self):
        return [s.d for s in self.steps]

    @property
    def final(self):
        last = self.steps[-1]
        return ReducedPair(last.n, last.d)


@attr.s(frozen=True)
class KaryStep:
    """Result of one k-ary reduction ``(u, v) -> (u', v')``."""
    uprime = attr.ib()
    vprime = attr.ib()
    a = attr.ib()
    b = attr.ib()

    def __iter__(self):
        return iter((self.uprime, self.vprime, self.a, self.b))


def jwa_trace(k, c):
    """Run the reduction loop on ``(k, c)`` and return the complete
    :class:`JwaTrace`.

    Each iteration performs one extended Euclidean step,
    ``n_{i+1} = n_{i-1} - q*n_i`` and ``d_{i+1} = d_{i-1} - q*d_i``
    with ``q = n_{i-1} // n_i``, for as long as ``n_i*n_i >= k``.

    >>> tr = jwa_trace(16, 11)
    >>> tr.t, tr.quotients, tuple(tr.final)
    (2, [1, 2], (1, 3))
    """
    jwa_input = JwaInput.checked(k, c)
    steps = [TraceStep(-1, None, k, 0), TraceStep(0, None, c, 1)]
    n_prev, n_cur = k, c
    d_prev, d_cur = 0, 1
    i = 0
    while n_cur * n_cur >= k:
        q, r = divmod(n_prev, n_cur)
        n_prev, n_cur = n_cur, r
        d_prev, d_cur = d_cur, d_prev - q * d_cur
        i += 1
        steps.append(TraceStep(i, q, n_cur, d_cur))
    return JwaTrace(jwa_input, steps, i)


def _count(k, c):
    # remainder-only loop, no validation; used by the exhaustive scans
    a, b, t = k, c, 0
    while b * b >= k:
        a, b = b, a % b
        t += 1
    return t


def iteration_count(k, c):
    """Return ``t(k, c)``, the number of loop iterations on ``(k, c)``.

    >>> iteration_count(1024, 633)
    7
    """
    JwaInput.checked(k, c, op='iteration_count')
    return _count(k, c)


def jwa_reduce(k, x, y):
    """Reduce ``(x, y)`` modulo *k*: compute ``c = x/y mod k`` and run
    the loop, returning the final :class:`ReducedPair` ``(n, d)``
    with ``n*y = d*x (mod k)`` and ``n*n, d*d < k``.

    >>> jwa_reduce(1024, 633, 1)
    ReducedPair(n=19, d=-21)
    """
    _check_positive('jwa_reduce', k=k, x=x, y=y)
    if k <= 1:
        raise InvalidInput('jwa_reduce', f'expected k > 1, got {k}', k=k, x=x, y=y)
    for name, value in (('x', x), ('y', y)):
        g = math.gcd(k, value)
        if g != 1:
            raise InvalidInput('jwa_reduce', f'expected gcd(k, {name}) == 1, got {g}',
                               k=k, x=x, y=y)
    c = mod_div(x, y, k)
    return jwa_trace(k, c).final


def kary_step(u, v, k):
    """Apply one k-ary reduction to ``(u, v)``: find ``(a, b)`` with
    ``a*u + b*v = 0 (mod k)`` and ``a*a, b*b < k``, then return
    ``|a*u + b*v| / k`` and ``min(u, v)``.

    >>> tuple(kary_step(633, 1, 1024))
    (13, 1, -21, -19)
    """
    n, d = jwa_reduce(k, u, v)
    a, b = d, -n
    combo = a * u + b * v
    if combo % k:
        raise Inconsistent('kary_step', f'a*u + b*v = {combo} is not a multiple of k={k}')
    return KaryStep(abs(combo) // k, min(u, v), a, b)


def verify_output(k, x, y, pair):
    """Check a reduced pair against the output contract:
    ``n*y = d*x (mod k)``, ``0 < n``, ``n*n < k``, ``0 < |d|`` and
    ``d*d < k``.

    >>> verify_output(1024, 633, 1, (19, -21))
    True
    >>> verify_output(1024, 633, 1, (19, 21))
    False
    """
    try:
        n, d = pair
    except (TypeError, ValueError):
        return False
    if not 0 < n or n * n >= k:
        return False
    if d == 0 or d * d >= k:
        return False
    return (n * y - d * x) % k == 0
