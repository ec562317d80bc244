"""Arithmetic coefficient sequences.

Every sequence is 1-based and immutable after construction.  Exact sequences
hold Python ints / Fractions (no overflow by construction); float sequences
hold a read-only numpy array.  Provided generators:

- mobius_sieve, liouville_sieve       (linear smallest-prime-factor sieve)
- ramanujan_tau                       (eta-product power series, exact ints)
- chi4                                (period-4 pattern 1, 0, -1, 0)
- dh_sequence                         (Davenport-Heilbronn period-5 pattern)
- alternating_unit                    ((-1)^(n-1))
- ones, unit                          (Dirichlet-algebra staples)
- summatory                           (partial sums, exactness preserved)
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence as PySequence

import numpy as np

Number = int | float | Fraction

# Davenport-Heilbronn weight: xi = (-2 + sqrt(10 - 2 sqrt 5)) / (-1 + sqrt 5)
DH_XI = (-2.0 + math.sqrt(10.0 - 2.0 * math.sqrt(5.0))) / (-1.0 + math.sqrt(5.0))


class Sequence:
    """Real-valued sequence indexed 1..N with provenance label.

    ``exact=True`` means every entry is an int or Fraction and arithmetic on
    the sequence stays exact.  Index 0 does not exist; ``seq[n]`` requires
    1 <= n <= len(seq).
    """

    __slots__ = ("_v", "label", "exact")

    def __init__(self, values: Iterable[Number], label: str = "", exact: bool | None = None):
        if isinstance(values, np.ndarray):
            v = values.astype(float)
            v.setflags(write=False)
            inferred = False
        else:
            v = list(values)
            inferred = all(isinstance(x, (int, Fraction)) for x in v)
        if len(v) < 1:
            raise ValueError("sequence must have length >= 1")
        self._v = v
        self.label = label
        self.exact = inferred if exact is None else exact
        if self.exact and isinstance(self._v, np.ndarray):
            raise ValueError("exact sequence cannot be backed by a float array")

    def __len__(self) -> int:
        return len(self._v)

    def __getitem__(self, n: int) -> Number:
        if not 1 <= n <= len(self._v):
            raise IndexError(f"index {n} outside 1..{len(self._v)}")
        return self._v[n - 1]

    def __iter__(self):
        return iter(self._v)

    def __repr__(self) -> str:
        head = ", ".join(str(x) for x in self._v[:6])
        tail = ", ..." if len(self._v) > 6 else ""
        return f"Sequence({self.label or 'anon'}, N={len(self._v)}: {head}{tail})"

    def to_floats(self) -> np.ndarray:
        """Entries as a float array of length N (0-based offset dropped)."""
        if isinstance(self._v, np.ndarray):
            return self._v
        return np.array([float(x) for x in self._v])

    def prefixed(self) -> np.ndarray:
        """Float entries padded with a leading zero so arr[n] is entry n."""
        out = np.zeros(len(self._v) + 1)
        out[1:] = self.to_floats()
        return out


def _spf_sieve(n: int) -> np.ndarray:
    """Smallest-prime-factor table for 0..n (spf[0] = spf[1] = 0)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    primes: list[int] = []
    for i in range(2, n + 1):
        if spf[i] == 0:
            spf[i] = i
            primes.append(i)
        ii = int(spf[i])
        for p in primes:
            if p > ii or i * p > n:
                break
            spf[i * p] = p
    return spf


def smallest_prime_factors(n: int) -> np.ndarray:
    """Public wrapper around the linear sieve (used by divisor enumeration)."""
    return _spf_sieve(n)


def mobius_sieve(n: int) -> Sequence:
    """mu(1..n) by the linear sieve; mu(k) in {-1, 0, 1}."""
    if n < 1:
        raise ValueError("n >= 1 required")
    mu = np.zeros(n + 1, dtype=np.int64)
    mu[1] = 1
    spf = np.zeros(n + 1, dtype=np.int64)
    primes: list[int] = []
    for i in range(2, n + 1):
        if spf[i] == 0:
            spf[i] = i
            primes.append(i)
            mu[i] = -1
        ii = int(spf[i])
        for p in primes:
            if p > ii or i * p > n:
                break
            spf[i * p] = p
            mu[i * p] = 0 if i % p == 0 else -mu[i]
    return Sequence([int(x) for x in mu[1:]], label="mobius")


def liouville_sieve(n: int) -> Sequence:
    """liouville(1..n) = (-1)^Omega(k), linear sieve."""
    if n < 1:
        raise ValueError("n >= 1 required")
    lam = np.zeros(n + 1, dtype=np.int64)
    lam[1] = 1
    spf = np.zeros(n + 1, dtype=np.int64)
    primes: list[int] = []
    for i in range(2, n + 1):
        if spf[i] == 0:
            spf[i] = i
            primes.append(i)
            lam[i] = -1
        ii = int(spf[i])
        for p in primes:
            if p > ii or i * p > n:
                break
            spf[i * p] = p
            lam[i * p] = -lam[i]
    return Sequence([int(x) for x in lam[1:]], label="liouville")


def summatory(s: Sequence) -> Sequence:
    """Partial sums: entry n is sum of s(1..n).  Exactness preserved."""
    if s.exact:
        out = []
        acc: Number = 0
        for x in s:
            acc = acc + x
            out.append(acc)
        return Sequence(out, label=f"sum({s.label})", exact=True)
    return Sequence(np.cumsum(s.to_floats()), label=f"sum({s.label})")


def _polymul_trunc(a: list[int], b: list[int], deg: int) -> list[int]:
    """Product of integer polynomials truncated past q^deg, skipping zeros."""
    out = [0] * (deg + 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        top = min(len(b), deg + 1 - i)
        for j in range(top):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def _eta_series(deg: int) -> list[int]:
    """prod_{m>=1} (1 - q^m) mod q^(deg+1), by the pentagonal-number theorem."""
    e = [0] * (deg + 1)
    e[0] = 1
    k = 1
    while True:
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > deg and g2 > deg:
            break
        sign = -1 if k % 2 == 1 else 1
        if g1 <= deg:
            e[g1] = sign
        if g2 <= deg:
            e[g2] = sign
        k += 1
    return e


def ramanujan_tau(n: int) -> Sequence:
    """tau(1..n): coefficient of q^k in q * prod (1 - q^m)^24, exact ints.

    The 24th power is formed by binary exponentiation of the pentagonal
    series (2 -> 4 -> 8 -> 16, then 16 * 8), every product truncated at
    degree n - 1.
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    deg = n - 1
    e1 = _eta_series(deg)
    e2 = _polymul_trunc(e1, e1, deg)
    e4 = _polymul_trunc(e2, e2, deg)
    e8 = _polymul_trunc(e4, e4, deg)
    e16 = _polymul_trunc(e8, e8, deg)
    e24 = _polymul_trunc(e16, e8, deg)
    return Sequence(e24, label="ramanujan_tau", exact=True)


def chi4(n: int) -> Sequence:
    """Non-principal character mod 4: pattern 1, 0, -1, 0."""
    if n < 1:
        raise ValueError("n >= 1 required")
    pat = (1, 0, -1, 0)
    return Sequence([pat[(k - 1) % 4] for k in range(1, n + 1)], label="chi4")


def dh_sequence(n: int) -> Sequence:
    """Davenport-Heilbronn coefficients: period-5 pattern [1, xi, -xi, -1, 0].

    Float-only; there is no exact representation of xi, so exact consumers
    must reject this sequence.
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    pat = (1.0, DH_XI, -DH_XI, -1.0, 0.0)
    return Sequence(np.array([pat[(k - 1) % 5] for k in range(1, n + 1)]), label="dh")


def alternating_unit(n: int) -> Sequence:
    """(-1)^(k-1) for k = 1..n."""
    if n < 1:
        raise ValueError("n >= 1 required")
    return Sequence([1 if k % 2 == 1 else -1 for k in range(1, n + 1)], label="alt")


def ones(n: int) -> Sequence:
    """All-ones sequence (Dirichlet coefficients of the zeta function)."""
    if n < 1:
        raise ValueError("n >= 1 required")
    return Sequence([1] * n, label="ones")


def unit(n: int) -> Sequence:
    """Convolution unit e1 = (1, 0, 0, ...)."""
    if n < 1:
        raise ValueError("n >= 1 required")
    return Sequence([1] + [0] * (n - 1), label="unit")
