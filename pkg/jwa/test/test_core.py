import pytest

from jwa import (jwa_trace,
                 jwa_reduce,
                 iteration_count,
                 kary_step,
                 verify_output,
                 isqrt,
                 isqrt_ceil,
                 mod_inverse,
                 mod_div,
                 ReducedPair,
                 JWAError,
                 InvalidInput,
                 NotInvertible)


def test_trace_1024_633():
    tr = jwa_trace(1024, 633)
    assert tr.t == 7
    assert tr.quotients == [1] * 7
    assert tr.remainders == [1024, 633, 391, 242, 149, 93, 56, 37, 19]
    assert tr.cofactors == [0, 1, -1, 2, -3, 5, -8, 13, -21]
    assert tr.final == ReducedPair(19, -21)
    assert len(tr.steps) == tr.t + 2

    assert tr.steps[0].q is None and tr.steps[1].q is None
    assert tr.steps[-1].to_dict() == {'i': 7, 'q': 1, 'n': 19, 'd': -21}


def test_trace_small():
    tr = jwa_trace(16, 11)
    assert tr.t == 2
    assert tr.quotients == [1, 2]
    assert tuple(tr.final) == (1, 3)

    # c already below sqrt(k)
    tr = jwa_trace(16, 3)
    assert tr.t == 0
    assert tuple(tr.final) == (3, 1)

    # the loop test is n*n >= k, so n == sqrt(k) keeps going
    assert iteration_count(25, 6) == 1
    assert iteration_count(16, 11) == 2


def test_reduce():
    assert jwa_reduce(1024, 633, 1) == ReducedPair(19, -21)

    n, d = jwa_reduce(1024, 633, 633)
    assert (n, d) == (1, 1)

    for x, y in [(3, 5), (17, 9), (999, 1), (1, 1023)]:
        pair = jwa_reduce(1024, x, y)
        assert verify_output(1024, x, y, pair)


def test_reduce_rejects_common_factors():
    with pytest.raises(InvalidInput) as exc_info:
        jwa_reduce(16, 4, 2)
    assert 'gcd(k, x)' in str(exc_info.value)

    with pytest.raises(InvalidInput) as exc_info:
        jwa_reduce(16, 3, 2)
    assert 'gcd(k, y)' in str(exc_info.value)


def test_kary_step():
    step = kary_step(633, 1, 1024)
    assert tuple(step) == (13, 1, -21, -19)
    assert (step.a * 633 + step.b * 1) % 1024 == 0
    assert step.a ** 2 < 1024 and step.b ** 2 < 1024


def test_verify_output():
    assert verify_output(1024, 633, 1, (19, -21))
    assert not verify_output(1024, 633, 1, (19, 21))
    assert not verify_output(1024, 633, 1, (0, 1))
    assert not verify_output(1024, 633, 1, (32, 1))
    assert not verify_output(1024, 633, 1, None)


def test_isqrt():
    assert isqrt(0) == 0
    assert isqrt(15849) == 125
    assert isqrt(2 ** 62) == 2 ** 31
    assert isqrt(2 ** 62 - 1) == 2 ** 31 - 1
    assert isqrt_ceil(16) == 4
    assert isqrt_ceil(17) == 5
    assert isqrt_ceil(0) == 0

    with pytest.raises(InvalidInput):
        isqrt(-1)


def test_mod_inverse():
    w = mod_inverse(76, 15849)
    assert 0 < w < 15849
    assert 76 * w % 15849 == 1

    assert mod_inverse(-1, 16) == 15

    with pytest.raises(NotInvertible) as exc_info:
        mod_inverse(6, 8)
    assert exc_info.value.gcd == 2

    with pytest.raises(InvalidInput):
        mod_inverse(3, 1)


def test_isqrt_exhaustive():
    n = 0
    for root in range(1001):
        top = min((root + 1) ** 2, 10 ** 6 + 1)
        while n < top:
            assert isqrt(n) == root
            assert isqrt_ceil(n) == (root if n == root * root else root + 1)
            n += 1
    assert n == 10 ** 6 + 1


def test_mod_inverse_exhaustive():
    for k in range(2, 501):
        for a in range(1, k):
            found = [w for w in range(1, k) if a * w % k == 1]
            if found:
                assert [mod_inverse(a, k)] == found
            else:
                with pytest.raises(NotInvertible):
                    mod_inverse(a, k)


def test_mod_div():
    assert mod_div(3, 5, 8) == 7
    assert mod_div(633, 1, 1024) == 633

    with pytest.raises(NotInvertible):
        mod_div(3, 4, 8)
    with pytest.raises(InvalidInput):
        mod_div(4, 3, 8)


@pytest.mark.parametrize('k, c', [(16, 4),   # shared factor
                                  (16, 16),  # c >= k
                                  (16, 0),
                                  (1, 1),
                                  (0, 1),
                                  (2 ** 62 + 1, 3),
                                  (16.0, 3),
                                  (16, True)])
def test_trace_invalid_input(k, c):
    with pytest.raises(InvalidInput):
        jwa_trace(k, c)
    with pytest.raises(JWAError):
        iteration_count(k, c)
