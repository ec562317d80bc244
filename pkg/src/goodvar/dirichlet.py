"""Dirichlet coefficient algebra: convolution, inversion, floor-sum bridge.

The bridge identity connects a coefficient kernel to plain floor sums: if
y = x * z (Dirichlet convolution) and g(t) = sum_k z_k floor(t/k), then

    sum_k x_k g(t/k) = sum_k y_k floor(t/k)

for every integer t.  It is an exact combinatorial identity (both sides
count lattice points under a hyperbola with weights x_d z_e), so the check
runs in exact arithmetic whenever the inputs allow it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .sequences import Sequence, smallest_prime_factors


def convolve(x: Sequence, z: Sequence, n: int) -> Sequence:
    """Dirichlet convolution y_m = sum_{d|m} x_d z_{m/d} for m <= n.

    Runs over (d, multiple) pairs, O(n log n) operations; exact when both
    inputs are exact.
    """
    if len(x) < n or len(z) < n:
        raise ValueError(f"inputs must be defined up to n={n}")
    exact = x.exact and z.exact
    y: list = [0] * (n + 1)
    for d in range(1, n + 1):
        xd = x[d]
        if xd == 0:
            continue
        for j in range(1, n // d + 1):
            zj = z[j]
            if zj != 0:
                y[d * j] += xd * zj
    if exact:
        return Sequence(y[1:], label=f"({x.label})*({z.label})", exact=True)
    return Sequence(np.array([float(v) for v in y[1:]]), label=f"({x.label})*({z.label})")


def _divisors_from_spf(m: int, spf: np.ndarray) -> list[int]:
    """All divisors of m from its smallest-prime-factor factorization."""
    divs = [1]
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        pk = 1
        new = []
        for _ in range(e):
            pk *= p
            new.extend(d * pk for d in divs)
        divs.extend(new)
    return divs


def invert(c: Sequence, n: int) -> Sequence:
    """Dirichlet inverse x of c: convolve(c, x) = unit.

    x_1 = 1/c_1 and x_m = -(1/c_1) sum_{d|m, d>1} c_d x_{m/d}.  Divisors are
    enumerated through a smallest-prime-factor table, O(d(m)) per index.
    """
    if len(c) < n:
        raise ValueError(f"input must be defined up to n={n}")
    if c[1] == 0:
        raise ZeroDivisionError("leading coefficient c_1 is zero; no Dirichlet inverse")
    exact = c.exact
    spf = smallest_prime_factors(n) if n >= 2 else None
    c1 = c[1]

    def divide(v):
        # -v / c1, staying in ints when c1 is a unit
        if not exact:
            return -v / c1
        if c1 == 1:
            return -v
        if c1 == -1:
            return v
        if isinstance(v, int) and isinstance(c1, int):
            return Fraction(-v, c1)
        return -v / c1

    x: list = [0] * (n + 1)
    x[1] = divide(-1)
    for m in range(2, n + 1):
        s = 0
        for d in _divisors_from_spf(m, spf):
            if d > 1:
                cd = c[d]
                if cd != 0 and x[m // d] != 0:
                    s += cd * x[m // d]
        x[m] = divide(s) if s != 0 else 0
    if exact:
        return Sequence(x[1:], label=f"inv({c.label})", exact=True)
    return Sequence(np.array([float(v) for v in x[1:]]), label=f"inv({c.label})")


def floor_sum_table(z: Sequence, t: int) -> list:
    """G[u] = sum_{k <= u} z_k floor(u/k) for integer u = 0..t.

    Incremental: floor(u/k) steps by one exactly at multiples of k, so a
    delta array accumulated at every multiple and prefix-summed gives G.
    Since floor((t/k)/j) = floor(floor(t/k)/j), the integer table also
    evaluates g at every rational t/k via G[t // k].
    """
    delta: list = [0] * (t + 1)
    for k in range(1, t + 1):
        zk = z[k] if k <= len(z) else 0
        if zk != 0:
            for mult in range(k, t + 1, k):
                delta[mult] += zk
    G: list = [0] * (t + 1)
    acc = 0
    for u in range(1, t + 1):
        acc += delta[u]
        G[u] = acc
    return G


@dataclass
class BridgeCheck:
    equal: bool
    lhs: object
    rhs: object
    t: int


def lemma1_check(x: Sequence, z: Sequence, t: int, rel_tol: float = 1e-9) -> BridgeCheck:
    """Verify sum_k x_k g(t/k) = sum_k y_k floor(t/k) with y = x * z.

    The left side evaluates g literally (via its integer-argument table);
    the right side goes through the convolution, so the two routes are
    independent.  Exact inputs compare exactly; float inputs (the
    Davenport-Heilbronn stream) compare at relative tolerance rel_tol.
    """
    if t < 1:
        raise ValueError("t >= 1 required")
    if len(x) < t or len(z) < t:
        raise ValueError(f"sequences must be defined up to t={t}")
    exact = x.exact and z.exact
    G = floor_sum_table(z, t)
    lhs = sum(x[k] * G[t // k] for k in range(1, t + 1) if x[k] != 0)
    y = convolve(x, z, t)
    rhs = sum(y[k] * (t // k) for k in range(1, t + 1) if y[k] != 0)
    if exact:
        equal = lhs == rhs
    else:
        lhs = float(lhs)
        rhs = float(rhs)
        scale = max(abs(lhs), abs(rhs), 1.0)
        equal = abs(lhs - rhs) <= rel_tol * scale
    return BridgeCheck(equal=equal, lhs=lhs, rhs=rhs, t=t)
