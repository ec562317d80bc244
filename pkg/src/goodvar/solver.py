"""Triangular deconvolution engine.

Given a kernel theta and a target f, solve the recurrence

    f(n) = sum_{k=1}^{n} a_k theta(n/k)        (normalized form)
    f(n) = sum_{k=1}^{n} a_k g(n/k)            (raw form, g(x) = x theta(x))

for the coefficients a, one n at a time: a_n = (f(n) - known terms) / pivot.

Everything runs internally in the raw picture.  A normalized solve with
target f is the raw solve of g with target T(n) = n f(n), followed by
a_k = u_k / k; this keeps one set of update rules per kernel family.

Fast paths (exact and float, all O(N log N) or better):

  floor / coeffs(z)   maintain c = z * u (Dirichlet).  T(n) - T(n-1) equals
                      the divisor sum of c at n, so each step needs one
                      divisor-sum lookup; contributions are pushed to the
                      multiples of n as soon as u_n is known.
  pow2                T(n) = U(n) + R(n) with R(n) = U(n//2) + 2 R(n//2).
  m(m)                T(n) = U(n) + sum_{j=2}^{m-1} U(n//j)
                             + (1 - 1/m) n V(n//m) + (2 - m) U(n//m).
  linear, smooth,     closed prefix-sum forms in U = sum u_k, V = sum u_k/k,
  v23, dirac, frac,   W = sum k u_k (see each update rule); frac also keeps
  pw32                the floor-kernel divisor pushes for its r*floor(x) part.

The generic path evaluates the defining sum directly in O(N^2) and exists
for the kernels with no structure to exploit (sqrtfloor) and as the
cross-check oracle for every fast path.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .kernels import (
    CoeffKernel,
    DiracKernel,
    ExactnessError,
    FloorKernel,
    FracKernel,
    LinearKernel,
    MKernel,
    Pow2Kernel,
    PW32Kernel,
    SmoothKernel,
    ThetaFunction,
    V23Kernel,
)
from .sequences import Sequence, summatory

#: default cap for the O(N^2) generic path; lift with allow_large=True
GENERIC_CAP = 20_000
#: default cap for exact (unbounded-rational) solves; lift with allow_large=True
EXACT_CAP = 10_000


# ---------------------------------------------------------------------------
# targets

class Target:
    """Right-hand side f of the recurrence, evaluated lazily per n.

    Kinds: recip (1/n), power:beta (n^-beta), floorsqrt_over_n, floorsqrt,
    const:c, zero, file (CSV n,value), seq (wraps a Sequence).
    """

    def __init__(self, kind: str, beta=None, c=None, table=None, path: str = ""):
        self.kind = kind
        self.beta = beta
        self.c = c
        self.table = table
        self.path = path

    # -- float --------------------------------------------------------------
    def value(self, n: int) -> float:
        k = self.kind
        if k == "recip":
            return 1.0 / n
        if k == "power":
            return float(n) ** -float(self.beta)
        if k == "floorsqrt_over_n":
            return math.isqrt(n) / n
        if k == "floorsqrt":
            return float(math.isqrt(n))
        if k == "const":
            return float(self.c)
        if k == "zero":
            return 0.0
        return float(self.table[n])

    def times_n(self, n: int) -> float:
        """n * f(n) without the roundtrip through f(n) (raw-picture target)."""
        k = self.kind
        if k == "recip":
            return 1.0
        if k == "power":
            return float(n) ** (1.0 - float(self.beta))
        if k == "floorsqrt_over_n":
            return float(math.isqrt(n))
        if k == "floorsqrt":
            return float(n * math.isqrt(n))
        if k == "const":
            return n * float(self.c)
        if k == "zero":
            return 0.0
        return n * float(self.table[n])

    def times_n_array(self, n_max: int) -> np.ndarray:
        """Vector of n*f(n) for n = 0..n_max (entry 0 unused)."""
        ns = np.arange(n_max + 1, dtype=float)
        k = self.kind
        if k == "recip":
            out = np.ones(n_max + 1)
        elif k == "power":
            with np.errstate(divide="ignore"):
                out = ns ** (1.0 - float(self.beta))
        elif k in ("floorsqrt_over_n", "floorsqrt"):
            r = _isqrt_array(n_max)
            out = r if k == "floorsqrt_over_n" else ns * r
        elif k == "const":
            out = ns * float(self.c)
        elif k == "zero":
            out = np.zeros(n_max + 1)
        else:
            out = ns * np.array([0.0] + [float(self.table[n]) for n in range(1, n_max + 1)])
        out[0] = 0.0
        return out

    # -- exact --------------------------------------------------------------
    @property
    def exact_capable(self) -> bool:
        if self.kind in ("recip", "floorsqrt_over_n", "floorsqrt", "zero"):
            return True
        if self.kind == "power":
            return isinstance(self.beta, int) or (
                isinstance(self.beta, Fraction) and self.beta.denominator == 1)
        if self.kind == "const":
            return isinstance(self.c, (int, Fraction))
        if self.kind in ("file", "seq"):
            return self._table_exact
        return False

    def times_n_exact(self, n: int):
        k = self.kind
        if k == "recip":
            return 1
        if k == "power":
            b = int(self.beta)
            return Fraction(n) ** (1 - b)
        if k == "floorsqrt_over_n":
            return math.isqrt(n)
        if k == "floorsqrt":
            return n * math.isqrt(n)
        if k == "const":
            return n * self.c
        if k == "zero":
            return 0
        if not self._table_exact:
            raise ExactnessError(f"{k} target holds float values")
        return n * self.table[n]

    @property
    def _table_exact(self) -> bool:
        if isinstance(self.table, Sequence):
            return self.table.exact
        return getattr(self, "_exact_table_flag", False)

    # -- construction -------------------------------------------------------
    @classmethod
    def parse(cls, spec: str) -> "Target":
        spec = spec.strip()
        fam, _, rest = spec.partition(":")
        fam = fam.lower()
        if fam in ("recip", "zero", "floorsqrt", "floorsqrt_over_n"):
            if rest:
                raise ValueError(f"target {fam} takes no parameters")
            return cls(fam)
        if fam == "power":
            key, _, val = rest.partition("=")
            if key != "beta" or not val:
                raise ValueError(f"power target needs beta=..., got {spec!r}")
            return cls("power", beta=Fraction(val))
        if fam == "const":
            key, _, val = rest.partition("=")
            if key != "c" or not val:
                raise ValueError(f"const target needs c=..., got {spec!r}")
            return cls("const", c=Fraction(val))
        if fam == "file":
            return cls.from_file(rest)
        if spec.startswith("file="):
            return cls.from_file(spec[5:])
        raise ValueError(f"unknown target spec {spec!r}")

    @classmethod
    def from_file(cls, path: str) -> "Target":
        table: dict[int, int | float | Fraction] = {}
        exact = True
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if [h.strip() for h in header[:2]] != ["n", "value"]:
                raise ValueError(f"target file {path} must have header n,value")
            for row in reader:
                try:
                    v: int | float | Fraction = Fraction(row[1])
                except ValueError:
                    v = float(row[1])
                    exact = False
                table[int(row[0])] = v
        t = cls("file", table=table, path=path)
        t._exact_table_flag = exact
        return t

    @classmethod
    def from_sequence(cls, seq: Sequence) -> "Target":
        return cls("seq", table=seq)

    def spec(self) -> str:
        k = self.kind
        if k == "power":
            return f"power:beta={self.beta}"
        if k == "const":
            return f"const:c={self.c}"
        if k == "file":
            return f"file={self.path}"
        return k

    def __repr__(self) -> str:
        return f"<target {self.spec()}>"


def _isqrt_array(n_max: int) -> np.ndarray:
    r = np.floor(np.sqrt(np.arange(n_max + 1, dtype=float)))
    # float sqrt can land one off right at perfect squares
    ns = np.arange(n_max + 1, dtype=np.int64)
    ri = r.astype(np.int64)
    ri += ((ri + 1) * (ri + 1) <= ns).astype(np.int64)
    ri -= (ri * ri > ns).astype(np.int64)
    return ri.astype(float)


# ---------------------------------------------------------------------------
# run record

@dataclass
class DeconvRun:
    theta: ThetaFunction
    target: Target
    n: int
    a: Sequence
    A: Sequence
    mode: str                  # "exact" | "float"
    kernel_form: str           # "normalized" | "raw"
    elapsed: float
    path: str                  # "fast" | "generic"

    def verify(self, rel_tol: float = 1e-6, n_checks: int = 200) -> float:
        """Re-evaluate the forward sum on sample points; return worst error.

        Exact runs must reproduce the target identically; float runs within
        rel_tol relative (absolute near zero).
        """
        ns = sorted(set(np.unique(np.geomspace(1, self.n, n_checks).astype(int))))
        f = forward(self.theta, self.a, self.n, kernel_form=self.kernel_form)
        worst = 0.0
        for n in ns:
            if self.mode == "exact":
                want = self.target.times_n_exact(n)
                got = f[n] * n if self.kernel_form == "normalized" else f[n]
                if got != want:
                    raise AssertionError(f"exact forward mismatch at n={n}: {got} != {want}")
            else:
                want = self.target.value(n)
                got = f[n]
                err = abs(got - want) / max(abs(want), 1e-12)
                worst = max(worst, err)
        if self.mode == "float" and worst > rel_tol:
            raise AssertionError(f"float forward error {worst:.3e} exceeds {rel_tol}")
        return worst


# ---------------------------------------------------------------------------
# raw-picture fast cores (float).  Each returns u[0..N] with u[0] = 0.

def _core_coeffs_float(kern: CoeffKernel | FloorKernel, T: np.ndarray, N: int) -> np.ndarray:
    if isinstance(kern, FloorKernel):
        z1 = 1.0
        zarr = None
    else:
        zarr = kern.coefficient_array(N)
        z1 = zarr[1]
        if not np.any(zarr[2:]):
            zarr = None
    D = np.zeros(N + 1)
    u = np.zeros(N + 1)
    if zarr is not None:
        C = np.zeros(N + 1)
    S = 0.0
    for n in range(1, N + 1):
        Tn = T[n]
        cn = Tn - S - D[n]
        if zarr is None:
            u[n] = cn / z1
        else:
            u[n] = (cn - C[n]) / z1
        S = Tn
        if 2 * n <= N:
            D[2 * n:: n] += cn
            if zarr is not None:
                C[2 * n:: n] += u[n] * zarr[2: N // n + 1]
    return u


def _core_pow2_float(T: np.ndarray, N: int) -> np.ndarray:
    U = np.zeros(N + 1)
    R = np.zeros(N + 1)
    u = np.zeros(N + 1)
    for n in range(1, N + 1):
        h = n >> 1
        Rn = U[h] + 2.0 * R[h]
        R[n] = Rn
        un = T[n] - U[n - 1] - Rn
        u[n] = un
        U[n] = U[n - 1] + un
    return u


def _core_m_float(m: int, T: np.ndarray, N: int) -> np.ndarray:
    U = np.zeros(N + 1)
    V = np.zeros(N + 1)
    u = np.zeros(N + 1)
    cm = 1.0 - 1.0 / m
    c2 = 2.0 - m
    for n in range(1, N + 1):
        s = U[n - 1]
        for j in range(2, m):
            s += U[n // j]
        k = n // m
        s += cm * n * V[k] + c2 * U[k]
        un = T[n] - s
        u[n] = un
        U[n] = U[n - 1] + un
        V[n] = V[n - 1] + un / n
    return u


def _core_linear_float(r: float, s: float, T: np.ndarray, N: int) -> np.ndarray:
    U = 0.0
    V = 0.0
    u = np.zeros(N + 1)
    d = s - r
    for n in range(1, N + 1):
        un = (T[n] - d * U - r * n * V) / s
        u[n] = un
        U += un
        V += un / n
    return u


def _core_smooth_float(lam: float, T: np.ndarray, N: int) -> np.ndarray:
    U = 0.0
    V = 0.0
    W = 0.0
    u = np.zeros(N + 1)
    for n in range(1, N + 1):
        un = T[n] - n * V + lam * U - lam * W / n
        u[n] = un
        U += un
        V += un / n
        W += un * n
    return u


def _core_v23_float(T: np.ndarray, N: int) -> np.ndarray:
    U = np.zeros(N + 1)
    V = np.zeros(N + 1)
    u = np.zeros(N + 1)
    for n in range(1, N + 1):
        h = n >> 1
        un = T[n] - U[n - 1] + 2.0 * U[h] - n * V[h]
        u[n] = un
        U[n] = U[n - 1] + un
        V[n] = V[n - 1] + un / n
    return u


def _core_dirac_float(r: float, T: np.ndarray, N: int) -> np.ndarray:
    V = 0.0
    u = np.zeros(N + 1)
    w = 2.0 * r - 2.0
    for n in range(1, N + 1):
        un = T[n] - n * V
        if n % 2 == 0:
            un -= w * u[n // 2]
        u[n] = un
        V += un / n
    return u


def _core_frac_float(r: float, T: np.ndarray, N: int) -> np.ndarray:
    D = np.zeros(N + 1)
    u = np.zeros(N + 1)
    V = 0.0
    SF = 0.0
    q = 1.0 - r
    for n in range(1, N + 1):
        un = T[n] - q * n * V - r * (SF + D[n])
        u[n] = un
        SF += D[n] + un
        V += un / n
        if 2 * n <= N:
            D[2 * n:: n] += un
    return u


def _core_pw32_float(T: np.ndarray, N: int) -> np.ndarray:
    U = np.zeros(N + 1)
    V = np.zeros(N + 1)
    u = np.zeros(N + 1)
    for n in range(1, N + 1):
        k2 = n // 2
        k3 = n // 3
        kp = k3 - 1 if n % 3 == 0 else k3
        s = U[n - 1] + U[k2] - 2.0 * U[k3] + U[kp] + 0.5 * n * V[kp]
        if n % 3 == 0:
            s += 3.0 * u[k3]
        un = T[n] - s
        u[n] = un
        U[n] = U[n - 1] + un
        V[n] = V[n - 1] + un / n
    return u


# ---------------------------------------------------------------------------
# raw-picture fast cores (exact).  T is a list of exact values, 1-based.

def _core_coeffs_exact(kern: CoeffKernel | FloorKernel, T: list, N: int) -> list:
    if isinstance(kern, FloorKernel):
        z1 = 1
        support: list[tuple[int, int | Fraction]] = []
    else:
        z1 = kern.z[1]
        support = []
        for j in range(2, N + 1):
            zj = kern.coefficient(j)
            if zj != 0:
                support.append((j, zj))
    D = [0] * (N + 1)
    C = [0] * (N + 1)
    u = [0] * (N + 1)
    S = 0
    for n in range(1, N + 1):
        Tn = T[n]
        cn = Tn - S - D[n]
        un = (cn - C[n]) / z1 if z1 != 1 else cn - C[n]
        u[n] = un
        S = Tn
        for mult in range(2 * n, N + 1, n):
            D[mult] += cn
        if support and un != 0:
            for j, zj in support:
                jn = j * n
                if jn > N:
                    break
                C[jn] += zj * un
    return u


def _core_pow2_exact(T: list, N: int) -> list:
    U = [0] * (N + 1)
    R = [0] * (N + 1)
    u = [0] * (N + 1)
    for n in range(1, N + 1):
        h = n >> 1
        Rn = U[h] + 2 * R[h]
        R[n] = Rn
        un = T[n] - U[n - 1] - Rn
        u[n] = un
        U[n] = U[n - 1] + un
    return u


def _core_m_exact(m: int, T: list, N: int) -> list:
    U = [0] * (N + 1)
    V = [0] * (N + 1)
    u = [0] * (N + 1)
    cm = 1 - Fraction(1, m)
    c2 = 2 - m
    for n in range(1, N + 1):
        s = U[n - 1]
        for j in range(2, m):
            s += U[n // j]
        k = n // m
        s += cm * n * V[k] + c2 * U[k]
        un = T[n] - s
        u[n] = un
        U[n] = U[n - 1] + un
        V[n] = V[n - 1] + Fraction(un, n)
    return u


def _core_linear_exact(r: Fraction, s: Fraction, T: list, N: int) -> list:
    U = Fraction(0)
    V = Fraction(0)
    u: list = [0] * (N + 1)
    d = s - r
    for n in range(1, N + 1):
        un = (T[n] - d * U - r * n * V) / s
        u[n] = un
        U += un
        V += Fraction(un, n) if isinstance(un, int) else un / n
    return u


def _core_smooth_exact(lam: Fraction, T: list, N: int) -> list:
    U = Fraction(0)
    V = Fraction(0)
    W = Fraction(0)
    u: list = [0] * (N + 1)
    for n in range(1, N + 1):
        un = T[n] - n * V + lam * U - lam * W / n
        u[n] = un
        U += un
        V += un / n if isinstance(un, Fraction) else Fraction(un, n)
        W += un * n
    return u


def _core_v23_exact(T: list, N: int) -> list:
    U = [0] * (N + 1)
    V = [0] * (N + 1)
    u = [0] * (N + 1)
    for n in range(1, N + 1):
        h = n >> 1
        un = T[n] - U[n - 1] + 2 * U[h] - n * V[h]
        u[n] = un
        U[n] = U[n - 1] + un
        V[n] = V[n - 1] + (Fraction(un, n) if isinstance(un, int) else un / n)
    return u


def _core_dirac_exact(r: Fraction, T: list, N: int) -> list:
    V = Fraction(0)
    u: list = [0] * (N + 1)
    w = 2 * r - 2
    for n in range(1, N + 1):
        un = T[n] - n * V
        if n % 2 == 0:
            un -= w * u[n // 2]
        u[n] = un
        V += un / n if isinstance(un, Fraction) else Fraction(un, n)
    return u


def _core_frac_exact(r: Fraction, T: list, N: int) -> list:
    D = [0] * (N + 1)
    u: list = [0] * (N + 1)
    V = Fraction(0)
    SF = Fraction(0)
    q = 1 - r
    for n in range(1, N + 1):
        un = T[n] - q * n * V - r * (SF + D[n])
        u[n] = un
        SF += D[n] + un
        V += un / n if isinstance(un, Fraction) else Fraction(un, n)
        for mult in range(2 * n, N + 1, n):
            D[mult] += un
    return u


def _core_pw32_exact(T: list, N: int) -> list:
    U = [0] * (N + 1)
    V = [0] * (N + 1)
    u = [0] * (N + 1)
    half = Fraction(1, 2)
    for n in range(1, N + 1):
        k2 = n // 2
        k3 = n // 3
        kp = k3 - 1 if n % 3 == 0 else k3
        s = U[n - 1] + U[k2] - 2 * U[k3] + U[kp] + half * n * V[kp]
        if n % 3 == 0:
            s += 3 * u[k3]
        un = T[n] - s
        u[n] = un
        U[n] = U[n - 1] + un
        V[n] = V[n - 1] + (Fraction(un, n) if isinstance(un, int) else un / n)
    return u


# ---------------------------------------------------------------------------
# generic O(N^2) path

def _core_generic_float(theta: ThetaFunction, T: np.ndarray, N: int) -> np.ndarray:
    u = np.zeros(N + 1)
    g1 = theta(1.0)
    u[1] = T[1] / g1
    for n in range(2, N + 1):
        ks = np.arange(1, n, dtype=float)
        xs = n / ks
        gv = xs * theta.eval_many(xs)
        u[n] = (T[n] - gv @ u[1:n]) / g1
    return u


def _core_generic_exact(theta: ThetaFunction, T: list, N: int) -> list:
    u: list = [0] * (N + 1)
    g1 = theta.g_exact(Fraction(1))
    for n in range(1, N + 1):
        s = 0
        for k in range(1, n):
            uk = u[k]
            if uk:
                s += uk * theta.g_exact(Fraction(n, k))
        un = (T[n] - s) / g1 if g1 != 1 else T[n] - s
        u[n] = un
    return u


_FAST_FLOAT: dict[type, Callable] = {
    FloorKernel: lambda th, T, N: _core_coeffs_float(th, T, N),
    CoeffKernel: lambda th, T, N: _core_coeffs_float(th, T, N),
    Pow2Kernel: lambda th, T, N: _core_pow2_float(T, N),
    MKernel: lambda th, T, N: _core_m_float(th.m, T, N),
    LinearKernel: lambda th, T, N: _core_linear_float(float(th.r), float(th.s), T, N),
    SmoothKernel: lambda th, T, N: _core_smooth_float(float(th.lam), T, N),
    V23Kernel: lambda th, T, N: _core_v23_float(T, N),
    DiracKernel: lambda th, T, N: _core_dirac_float(float(th.r), T, N),
    FracKernel: lambda th, T, N: _core_frac_float(float(th.r), T, N),
    PW32Kernel: lambda th, T, N: _core_pw32_float(T, N),
}

_FAST_EXACT: dict[type, Callable] = {
    FloorKernel: lambda th, T, N: _core_coeffs_exact(th, T, N),
    CoeffKernel: lambda th, T, N: _core_coeffs_exact(th, T, N),
    Pow2Kernel: lambda th, T, N: _core_pow2_exact(T, N),
    MKernel: lambda th, T, N: _core_m_exact(th.m, T, N),
    LinearKernel: lambda th, T, N: _core_linear_exact(th.r, th.s, T, N),
    SmoothKernel: lambda th, T, N: _core_smooth_exact(th.lam, T, N),
    V23Kernel: lambda th, T, N: _core_v23_exact(T, N),
    DiracKernel: lambda th, T, N: _core_dirac_exact(th.r, T, N),
    FracKernel: lambda th, T, N: _core_frac_exact(th.r, T, N),
    PW32Kernel: lambda th, T, N: _core_pw32_exact(T, N),
}


def _check_caps(theta, n, mode, use_fast, allow_large):
    if mode == "exact" and n > EXACT_CAP and not allow_large:
        raise ValueError(
            f"exact solve capped at N={EXACT_CAP} (denominators grow); "
            "pass allow_large=True to override")
    if not use_fast and n > GENERIC_CAP and not allow_large:
        raise ValueError(
            f"generic O(N^2) path capped at N={GENERIC_CAP} for "
            f"{theta.family}; pass allow_large=True to override")


def solve(theta: ThetaFunction, target: Target, n: int, mode: str = "float",
          kernel_form: str = "normalized", force_generic: bool = False,
          allow_large: bool = False) -> DeconvRun:
    """Solve f(n) = sum a_k theta(n/k) (or the raw-form variant) for a.

    mode="exact" runs in unbounded rationals and requires both the kernel
    and the target to evaluate exactly; mode="float" uses float64.
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    if kernel_form not in ("normalized", "raw"):
        raise ValueError("kernel_form must be 'normalized' or 'raw'")
    if theta.pivot == 0.0:
        raise ValueError("kernel pivot theta(1) is zero")
    use_fast = (not force_generic) and type(theta) in _FAST_FLOAT
    _check_caps(theta, n, mode, use_fast, allow_large)
    t0 = time.perf_counter()
    if mode == "exact":
        if not theta.exact_capable:
            raise ExactnessError(
                f"{theta.family} kernel yields irrational values; exact mode refused")
        if not target.exact_capable:
            raise ExactnessError(
                f"target {target.spec()} is not exactly representable; exact mode refused")
        if kernel_form == "normalized":
            T = [0] + [target.times_n_exact(i) for i in range(1, n + 1)]
        else:
            T = [0] + [_exact_f(target, i) for i in range(1, n + 1)]
        core = _FAST_EXACT[type(theta)] if use_fast else _core_generic_exact
        u = core(theta, T, n)
        if kernel_form == "normalized":
            a_vals = [u[k] if k == 1 else _div_exact(u[k], k) for k in range(1, n + 1)]
        else:
            a_vals = u[1:]
        a = Sequence(a_vals, label=f"a[{theta.spec()}|{target.spec()}]", exact=True)
    elif mode == "float":
        if kernel_form == "normalized":
            T = target.times_n_array(n)
        else:
            T = np.array([0.0] + [target.value(i) for i in range(1, n + 1)])
        core = _FAST_FLOAT[type(theta)] if use_fast else _core_generic_float
        u = core(theta, T, n)
        if kernel_form == "normalized":
            a_arr = u[1:] / np.arange(1, n + 1, dtype=float)
        else:
            a_arr = u[1:].copy()
        a = Sequence(a_arr, label=f"a[{theta.spec()}|{target.spec()}]")
    else:
        raise ValueError("mode must be 'exact' or 'float'")
    elapsed = time.perf_counter() - t0
    return DeconvRun(theta=theta, target=target, n=n, a=a, A=summatory(a),
                     mode=mode, kernel_form=kernel_form, elapsed=elapsed,
                     path="fast" if use_fast else "generic")


def _exact_f(target: Target, i: int):
    v = target.times_n_exact(i)
    return Fraction(v, i) if isinstance(v, int) else v / i


def _div_exact(v, k: int):
    return Fraction(v, k) if isinstance(v, int) else v / k


# ---------------------------------------------------------------------------
# forward evaluation

def forward(theta: ThetaFunction, a: Sequence, n: int,
            kernel_form: str = "normalized", force_generic: bool = False) -> Sequence:
    """Evaluate f(m) = sum_{k<=m} a_k theta(m/k) (or raw g-form) for m <= n.

    Fast kernels reuse their prefix-sum structure; anything else falls back
    to the direct O(N^2) sum.
    """
    if len(a) < n:
        raise ValueError(f"coefficients defined up to {len(a)} < n={n}")
    if kernel_form not in ("normalized", "raw"):
        raise ValueError("kernel_form must be 'normalized' or 'raw'")
    exact = a.exact
    use_fast = (not force_generic) and type(theta) in _FAST_FLOAT
    # the raw cores sum u_k g(m/k); a normalized sum is (1/m) sum (k a_k) g(m/k)
    if exact:
        if not theta.exact_capable:
            raise ExactnessError(f"{theta.family} kernel cannot evaluate exactly")
        if kernel_form == "normalized":
            u = [0] + [k * a[k] for k in range(1, n + 1)]
        else:
            u = [0] + [a[k] for k in range(1, n + 1)]
        T = (_forward_exact_fast if use_fast else _forward_exact_generic)(theta, u, n)
        if kernel_form == "normalized":
            vals = [_div_exact(T[m], m) for m in range(1, n + 1)]
        else:
            vals = T[1:]
        return Sequence(vals, label=f"forward[{theta.spec()}]", exact=True)
    u = np.zeros(n + 1)
    u[1:] = a.to_floats()[:n]
    if kernel_form == "normalized":
        u[1:] *= np.arange(1, n + 1, dtype=float)
    T = (_forward_float_fast if use_fast else _forward_float_generic)(theta, u, n)
    if kernel_form == "normalized":
        vals = T[1:] / np.arange(1, n + 1, dtype=float)
    else:
        vals = T[1:]
    return Sequence(vals, label=f"forward[{theta.spec()}]")


def _forward_float_fast(theta: ThetaFunction, u: np.ndarray, N: int) -> np.ndarray:
    """T(m) = sum_{k<=m} u_k g(m/k) for every m <= N via the fast structure."""
    T = np.zeros(N + 1)
    if isinstance(theta, (FloorKernel, CoeffKernel)):
        if isinstance(theta, FloorKernel):
            zarr = None
            z1 = 1.0
        else:
            zarr = theta.coefficient_array(N)
            z1 = zarr[1]
            if not np.any(zarr[2:]):
                zarr = None
        D = np.zeros(N + 1)
        C = np.zeros(N + 1)
        S = 0.0
        for m in range(1, N + 1):
            cm = z1 * u[m] + C[m]
            S += D[m] + cm
            T[m] = S
            if 2 * m <= N:
                D[2 * m:: m] += cm
                if zarr is not None:
                    C[2 * m:: m] += u[m] * zarr[2: N // m + 1]
        return T
    U = np.zeros(N + 1)
    np.cumsum(u, out=U)
    V = np.zeros(N + 1)
    V[1:] = np.cumsum(u[1:] / np.arange(1, N + 1))
    if isinstance(theta, Pow2Kernel):
        R = np.zeros(N + 1)
        for m in range(1, N + 1):
            R[m] = U[m >> 1] + 2.0 * R[m >> 1]
            T[m] = U[m] + R[m]
        return T
    if isinstance(theta, MKernel):
        mm = theta.m
        cm = 1.0 - 1.0 / mm
        c2 = 2.0 - mm
        for m in range(1, N + 1):
            s = U[m]
            for j in range(2, mm):
                s += U[m // j]
            k = m // mm
            T[m] = s + cm * m * V[k] + c2 * U[k]
        return T
    if isinstance(theta, LinearKernel):
        r = float(theta.r)
        s = float(theta.s)
        ms = np.arange(N + 1, dtype=float)
        T[1:] = (s - r) * U[1:] + r * ms[1:] * V[1:]
        return T
    if isinstance(theta, SmoothKernel):
        lam = float(theta.lam)
        W = np.zeros(N + 1)
        W[1:] = np.cumsum(u[1:] * np.arange(1, N + 1))
        ms = np.arange(N + 1, dtype=float)
        T[1:] = ms[1:] * V[1:] - lam * U[1:] + lam * W[1:] / ms[1:]
        return T
    if isinstance(theta, V23Kernel):
        for m in range(1, N + 1):
            h = m >> 1
            T[m] = U[m] - 2.0 * U[h] + m * V[h]
        return T
    if isinstance(theta, DiracKernel):
        w = 2.0 * float(theta.r) - 2.0
        for m in range(1, N + 1):
            T[m] = m * V[m]
            if m % 2 == 0:
                T[m] += w * u[m // 2]
        return T
    if isinstance(theta, FracKernel):
        r = float(theta.r)
        q = 1.0 - r
        D = np.zeros(N + 1)
        SF = 0.0
        for m in range(1, N + 1):
            SF += D[m] + u[m]
            T[m] = q * m * V[m] + r * SF
            if 2 * m <= N:
                D[2 * m:: m] += u[m]
        return T
    if isinstance(theta, PW32Kernel):
        for m in range(1, N + 1):
            k2 = m // 2
            k3 = m // 3
            kp = k3 - 1 if m % 3 == 0 else k3
            s = U[m] + U[k2] - 2.0 * U[k3] + U[kp] + 0.5 * m * V[kp]
            if m % 3 == 0:
                s += 3.0 * u[k3]
            T[m] = s
        return T
    raise AssertionError(f"no fast forward for {theta.family}")


def _forward_float_generic(theta: ThetaFunction, u: np.ndarray, N: int) -> np.ndarray:
    T = np.zeros(N + 1)
    for m in range(1, N + 1):
        ks = np.arange(1, m + 1, dtype=float)
        xs = m / ks
        T[m] = (xs * theta.eval_many(xs)) @ u[1: m + 1]
    return T


def _forward_exact_generic(theta: ThetaFunction, u: list, N: int) -> list:
    T: list = [0] * (N + 1)
    for m in range(1, N + 1):
        s = 0
        for k in range(1, m + 1):
            if u[k]:
                s += u[k] * theta.g_exact(Fraction(m, k))
        T[m] = s
    return T


def _forward_exact_fast(theta: ThetaFunction, u: list, N: int) -> list:
    T: list = [0] * (N + 1)
    if isinstance(theta, (FloorKernel, CoeffKernel)):
        if isinstance(theta, FloorKernel):
            support: list[tuple[int, int | Fraction]] = []
            z1 = 1
        else:
            z1 = theta.z[1]
            support = []
            for j in range(2, N + 1):
                zj = theta.coefficient(j)
                if zj != 0:
                    support.append((j, zj))
        D = [0] * (N + 1)
        C = [0] * (N + 1)
        S = 0
        for m in range(1, N + 1):
            cm = z1 * u[m] + C[m]
            S += D[m] + cm
            T[m] = S
            for mult in range(2 * m, N + 1, m):
                D[mult] += cm
            if support and u[m] != 0:
                for j, zj in support:
                    jm = j * m
                    if jm > N:
                        break
                    C[jm] += zj * u[m]
        return T
    U: list = [0] * (N + 1)
    V: list = [0] * (N + 1)
    for m in range(1, N + 1):
        U[m] = U[m - 1] + u[m]
        V[m] = V[m - 1] + (Fraction(u[m], m) if isinstance(u[m], int) else u[m] / m)
    if isinstance(theta, Pow2Kernel):
        R: list = [0] * (N + 1)
        for m in range(1, N + 1):
            R[m] = U[m >> 1] + 2 * R[m >> 1]
            T[m] = U[m] + R[m]
        return T
    if isinstance(theta, MKernel):
        mm = theta.m
        cm = 1 - Fraction(1, mm)
        c2 = 2 - mm
        for m in range(1, N + 1):
            s = U[m]
            for j in range(2, mm):
                s += U[m // j]
            k = m // mm
            T[m] = s + cm * m * V[k] + c2 * U[k]
        return T
    if isinstance(theta, LinearKernel):
        for m in range(1, N + 1):
            T[m] = (theta.s - theta.r) * U[m] + theta.r * m * V[m]
        return T
    if isinstance(theta, SmoothKernel):
        W: list = [0] * (N + 1)
        for m in range(1, N + 1):
            W[m] = W[m - 1] + u[m] * m
        for m in range(1, N + 1):
            T[m] = m * V[m] - theta.lam * U[m] + Fraction(1, m) * theta.lam * W[m]
        return T
    if isinstance(theta, V23Kernel):
        for m in range(1, N + 1):
            h = m >> 1
            T[m] = U[m] - 2 * U[h] + m * V[h]
        return T
    if isinstance(theta, DiracKernel):
        w = 2 * theta.r - 2
        for m in range(1, N + 1):
            T[m] = m * V[m]
            if m % 2 == 0:
                T[m] += w * u[m // 2]
        return T
    if isinstance(theta, FracKernel):
        q = 1 - theta.r
        D = [0] * (N + 1)
        SF = 0
        for m in range(1, N + 1):
            SF += D[m] + u[m]
            T[m] = q * m * V[m] + theta.r * SF
            for mult in range(2 * m, N + 1, m):
                D[mult] += u[m]
        return T
    if isinstance(theta, PW32Kernel):
        half = Fraction(1, 2)
        for m in range(1, N + 1):
            k2 = m // 2
            k3 = m // 3
            kp = k3 - 1 if m % 3 == 0 else k3
            s = U[m] + U[k2] - 2 * U[k3] + U[kp] + half * m * V[kp]
            if m % 3 == 0:
                s += 3 * u[k3]
            T[m] = s
        return T
    raise AssertionError(f"no fast exact forward for {theta.family}")


# ---------------------------------------------------------------------------
# diagnostics table

def scaled_trace(run: DeconvRun, alpha: float, max_rows: int = 4000) -> np.ndarray:
    """(n, A(n) * n^alpha) thinned to a dyadic-geometric grid of rows."""
    A = run.A.prefixed()
    N = run.n
    if N <= max_rows:
        ns = np.arange(1, N + 1)
    else:
        ns = np.unique(np.geomspace(1, N, max_rows).astype(np.int64))
    vals = A[ns] * ns.astype(float) ** alpha
    return np.column_stack([ns.astype(float), vals])
