import math
from fractions import Fraction

import numpy as np
import pytest

from goodvar.sequences import (
    DH_XI,
    Sequence,
    alternating_unit,
    chi4,
    dh_sequence,
    liouville_sieve,
    mobius_sieve,
    ones,
    ramanujan_tau,
    summatory,
    unit,
)


def factorize(n):
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius_brute(n):
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return (-1) ** len(f)


def test_mobius_examples():
    mu = mobius_sieve(30)
    assert mu[1] == 1          # empty product
    assert mu[12] == 0         # 12 = 2^2 * 3
    assert mu[30] == -1        # three distinct primes


def test_mobius_against_bruteforce():
    mu = mobius_sieve(2000)
    for n in range(1, 2001):
        assert mu[n] == mobius_brute(n)


def test_mobius_divisor_sum_identity():
    # sum_{d|n} mu(d) = [n == 1]
    mu = mobius_sieve(500)
    for n in range(1, 501):
        s = sum(mu[d] for d in range(1, n + 1) if n % d == 0)
        assert s == (1 if n == 1 else 0)


def test_liouville_examples():
    lam = liouville_sieve(16)
    assert lam[1] == 1
    assert lam[12] == -1       # Omega(12) = 3
    assert lam[16] == 1        # Omega(16) = 4


def test_liouville_from_omega():
    lam = liouville_sieve(2000)
    for n in range(1, 2001):
        omega = sum(factorize(n).values())
        assert lam[n] == (-1) ** omega


def test_liouville_mobius_square_identity():
    # lambda(n) = sum_{d^2 | n} mu(n / d^2)
    N = 10 ** 4
    lam = liouville_sieve(N)
    mu = mobius_sieve(N)
    for n in range(1, N + 1):
        s = 0
        d = 1
        while d * d <= n:
            if n % (d * d) == 0:
                s += mu[n // (d * d)]
            d += 1
        assert lam[n] == s


def test_unimodularity():
    mu = mobius_sieve(1000)
    lam = liouville_sieve(1000)
    assert all(mu[n] ** 2 <= 1 for n in range(1, 1001))
    assert all(lam[n] ** 2 == 1 for n in range(1, 1001))


def test_summatory():
    mu = mobius_sieve(10)
    M = summatory(mu)
    assert M[1] == 1
    assert M[5] == -2          # 1 - 1 - 1 + 0 - 1
    assert M.exact
    lam = liouville_sieve(10)
    assert summatory(lam)[10] == sum(lam[k] for k in range(1, 11)) == 0
    flo = Sequence(np.ones(4))
    assert not summatory(flo).exact
    assert summatory(flo)[4] == pytest.approx(4.0)


def tau_naive(n):
    # sequential (1 - q^m)^24 products, no binary exponentiation
    deg = n - 1
    poly = [0] * (deg + 1)
    poly[0] = 1
    for m in range(1, deg + 1):
        for _ in range(24):
            nxt = poly[:]
            for i in range(deg + 1 - m):
                nxt[i + m] -= poly[i]
            poly = nxt
    return poly


KNOWN_TAU = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]


def test_tau_known_values():
    tau = ramanujan_tau(10)
    assert [tau[k] for k in range(1, 11)] == KNOWN_TAU


def test_tau_against_naive_expansion():
    tau = ramanujan_tau(60)
    naive = tau_naive(60)
    assert [tau[k] for k in range(1, 61)] == naive[:60]


def test_tau_multiplicative():
    N = 1000
    tau = ramanujan_tau(N)
    for a in range(2, 40):
        for b in range(a + 1, N // a + 1):
            if math.gcd(a, b) == 1:
                assert tau[a * b] == tau[a] * tau[b]


def test_tau_exactness():
    tau = ramanujan_tau(5)
    assert tau.exact
    assert all(isinstance(v, int) for v in tau)


def test_chi4_pattern():
    c = chi4(12)
    assert c[1] == 1
    assert c[4] == 0
    assert c[7] == -1          # 7 = 3 mod 4
    for n in range(1, 9):
        assert c[n] == c[n + 4]


def test_dh_pattern():
    h = dh_sequence(15)
    assert h[1] == 1.0
    assert h[2] == pytest.approx(0.2840790, abs=5e-8)
    assert h[5] == 0.0
    for n in range(1, 11):
        assert h[n] == h[n + 5]
    assert not h.exact
    # xi from its defining radicals
    assert DH_XI == pytest.approx((-2 + math.sqrt(10 - 2 * math.sqrt(5))) / (math.sqrt(5) - 1))


def test_alternating_unit():
    a = alternating_unit(8)
    assert a[1] == 1 and a[2] == -1
    assert summatory(a)[7] == 1


def test_ones_unit():
    assert all(v == 1 for v in ones(5))
    e = unit(5)
    assert e[1] == 1 and all(e[k] == 0 for k in range(2, 6))


def test_sequence_indexing_contract():
    s = Sequence([3, 1, 4])
    with pytest.raises(IndexError):
        s[0]
    with pytest.raises(IndexError):
        s[4]
    assert len(s) == 3
    with pytest.raises(ValueError):
        Sequence([])
    with pytest.raises(ValueError):
        mobius_sieve(0)


def test_sequence_exactness_inference():
    assert Sequence([1, Fraction(1, 2)]).exact
    assert not Sequence([1.0, 2.0]).exact
    assert not Sequence(np.array([1.0])).exact
