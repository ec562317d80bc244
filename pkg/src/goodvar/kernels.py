"""The theta-kernel zoo.

A kernel is a bounded function theta on [1, oo) with nonzero pivot theta(1).
Its "diamond view" theta_d(t) = theta(1/t) on (0, 1] is what the condition
checkers and variational-diagram tables consume.  Families:

    floor        floor(x)/x
    frac(r)      (x - r*frac(x))/x, 0 < r <= 1
    sqrtfloor    1 - frac(x)/(x*sqrt(floor(x)))
    pw32         floor(x)/x for x <= 3, else 1/x + 1/2
    smooth(l)    diamond: 1 - l*t*(1-t)
    linear(r,s)  diamond: (s-r)*t + r
    v23          diamond: 1-t on (0,1/2], t on [1/2,1]
    dirac(r)     r at x = 2 exactly, 1 elsewhere
    pow2         2^floor(log2 x) / x
    m(m)         floor kernel for x < m, else 1/x + 1 - 1/m
    coeffs(z)    g(x)/x with g(x) = sum_k z_k floor(x/k)

Kernels evaluate in float and, where the formula stays rational, exactly on
Fractions (``eval_exact``).  All kernels are immutable and picklable.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .sequences import Sequence, chi4, alternating_unit, dh_sequence, ramanujan_tau, unit

Rational = int | Fraction


class ExactnessError(TypeError):
    """Raised when an exact evaluation is requested from a float-only kernel."""


def _as_fraction(x) -> Fraction:
    # floats convert to their exact binary value, so no hidden rounding
    return x if isinstance(x, Fraction) else Fraction(x)


def _floor_frac(x: Fraction) -> int:
    return x.numerator // x.denominator


class ThetaFunction:
    """Base kernel: scalar/vector float evaluation plus optional exact path."""

    family: str = "?"
    exact_capable: bool = False

    # -- float evaluation ---------------------------------------------------
    def __call__(self, x: float) -> float:
        if x < 1.0:
            raise ValueError(f"theta domain is x >= 1, got {x}")
        return self._eval(float(x))

    def _eval(self, x: float) -> float:
        raise NotImplementedError

    def eval_many(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if xs.size and xs.min() < 1.0:
            raise ValueError("theta domain is x >= 1")
        return self._eval_many(xs)

    def _eval_many(self, xs: np.ndarray) -> np.ndarray:
        return np.array([self._eval(float(x)) for x in xs])

    # -- diamond view -------------------------------------------------------
    def diamond(self, t: float) -> float:
        if not 0.0 < t <= 1.0:
            raise ValueError(f"diamond view lives on (0, 1], got {t}")
        return self._eval(1.0 / t)

    def diamond_many(self, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        if ts.size and (ts.min() <= 0.0 or ts.max() > 1.0):
            raise ValueError("diamond view lives on (0, 1]")
        return self._eval_many(1.0 / ts)

    # -- exact evaluation ---------------------------------------------------
    def eval_exact(self, x: Rational) -> Rational:
        x = _as_fraction(x)
        if x < 1:
            raise ValueError(f"theta domain is x >= 1, got {x}")
        if not self.exact_capable:
            raise ExactnessError(f"{self.family} kernel has no exact rational evaluation")
        return self._eval_exact(x)

    def _eval_exact(self, x: Fraction) -> Rational:
        raise NotImplementedError

    def g_exact(self, x: Rational) -> Rational:
        """g(x) = x * theta(x), exact.  Families whose g is integer-valued
        at their evaluation points override this to skip Fraction churn."""
        x = _as_fraction(x)
        return x * self.eval_exact(x)

    # -- structure ----------------------------------------------------------
    @property
    def pivot(self) -> float:
        return self._eval(1.0)

    def pivot_exact(self) -> Rational:
        return self.eval_exact(Fraction(1))

    def breakpoints(self, t_min: float) -> list[float]:
        """Discontinuities / slope changes of the diamond view in (t_min, 1].

        Smooth families return an empty list.
        """
        if t_min <= 0.0:
            raise ValueError("t_min must be positive")
        return self._breakpoints(t_min)

    def _breakpoints(self, t_min: float) -> list[float]:
        return []

    def spec(self) -> str:
        """Round-trippable spec string for the CLI mini-language."""
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<theta {self.spec()}>"


def _reciprocal_breakpoints(t_min: float, j_max: int | None = None) -> list[float]:
    """t = 1/j for j >= 2 with 1/j > t_min, ascending."""
    top = int(math.floor(1.0 / t_min))
    while top >= 2 and 1.0 / top <= t_min:
        top -= 1
    if j_max is not None:
        top = min(top, j_max)
    return [1.0 / j for j in range(top, 1, -1)]


@dataclass(frozen=True, repr=False)
class FloorKernel(ThetaFunction):
    family: str = field(default="floor", init=False)
    exact_capable: bool = field(default=True, init=False)

    def _eval(self, x: float) -> float:
        return math.floor(x) / x

    def _eval_many(self, xs: np.ndarray) -> np.ndarray:
        return np.floor(xs) / xs

    def _eval_exact(self, x: Fraction) -> Rational:
        return Fraction(_floor_frac(x)) / x

    def g_exact(self, x: Rational) -> Rational:
        return _floor_frac(_as_fraction(x))

    def _breakpoints(self, t_min: float) -> list[float]:
        return _reciprocal_breakpoints(t_min)

    def spec(self) -> str:
        return "floor"


@dataclass(frozen=True, repr=False)
class FracKernel(ThetaFunction):
    """theta_r(x) = (x - r*frac(x)) / x; r = 1 recovers the floor kernel."""

    r: Fraction
    family: str = field(default="frac", init=False)
    exact_capable: bool = field(default=True, init=False)

    def __post_init__(self):
        object.__setattr__(self, "r", _as_fraction(self.r))
        if not 0 < self.r <= 1:
            raise ValueError("frac kernel needs 0 < r <= 1")

    def _eval(self, x: float) -> float:
        r = float(self.r)
        return (x - r * (x - math.floor(x))) / x

    def _eval_many(self, xs: np.ndarray) -> np.ndarray:
        r = float(self.r)
        return (xs - r * (xs - np.floor(xs))) / xs

    def _eval_exact(self, x: Fraction) -> Rational:
        return (x - self.r * (x - _floor_frac(x))) / x

    def _breakpoints(self, t_min: float) -> list[float]:
        return _reciprocal_breakpoints(t_min)

    def spec(self) -> str:
        return f"frac:r={self.r}"


@dataclass(frozen=True, repr=False)
class SqrtFloorKernel(ThetaFunction):
    """theta(x) = 1 - frac(x) / (x * sqrt(floor(x))); float-only."""

    family: str = field(default="sqrtfloor", init=False)

    def _eval(self, x: float) -> float:
        fl = math.floor(x)
        return 1.0 - (x - fl) / (x * math.sqrt(fl))

    def _eval_many(self, xs: np.ndarray) -> np.ndarray:
        fl = np.floor(xs)
        return 1.0 - (xs - fl) / (xs * np.sqrt(fl))

    def _breakpoints(self, t_min: float) -> list[float]:
        return _reciprocal_breakpoints(t_min)

    def spec(self) -> str:
        return "sqrtfloor"


@dataclass(frozen=True, repr=False)
class PW32Kernel(ThetaFunction):
    """Floor kernel up to x = 3 (inclusive), then 1/x + 1/2.

    The diamond view is taken right-continuous at t = 1/3, i.e. the floor
    branch owns the boundary.
    """

    family: str = field(default="pw32", init=False)
    exact_capable: bool = field(default=True, init=False)

    def _eval(self, x: float) -> float:
        if x <= 3.0:
            return math.floor(x) / x
        return 1.0 / x + 0.5

    def _eval_many(self, xs: np.ndarray) -> np.ndarray:
        return np.where(xs <= 3.0, np.floor(xs) / xs, 1.0 / xs + 0.5)

    def _eval_exact(self, x: Fraction) -> Rational:
        if x <= 3:
            return Fraction(_floor_frac(x)) / x
        return 1 / x + Fraction(1, 2)

    def _breakpoints(self, t_min: float) -> list[float]:
        return [t for t in (1.0 / 3.0, 0.5) if t > t_min]

    def spec(self) -> str:
        return "pw32"


@dataclass(frozen=True, repr=False)
class SmoothKernel(ThetaFunction):
    """Parabolic diamond view 1 - lam*t*(1-t)."""

    lam: Fraction
    family: str = field(default="smooth", init=False)
    exact_capable: bool = field(default=True, init=False)

    def __post_init__(self):
        object.__setattr__(self, "lam", _as_fraction(self.lam))

    def _eval(self, x: float) -> float:
        lam = float(self.lam)
        return 1.0 - lam * (x - 1.0) / (x * x)

    def _eval_many(self, xs: np.ndarray) -> np.ndarray:
        lam = float(self.lam)
        return 1.0 - lam * (xs - 1.0) / (xs * xs)

    def _eval_exact(self, x: Fraction) -> Rational:
        return 1 - self.lam * (x - 1) / (x * x)

    def spec(self) -> str:
        return f"smooth:lambda={self.lam}"


@dataclass(frozen=True, repr=False)
class LinearKernel(ThetaFunction):
    """Diamond view (s-r)*t + r; pivot is s, which must be nonzero."""

    r: Fraction
    s: Fraction
    family: str = field(default="linear", init=False)
    exact_capable: bool = field(default=True, init=False)

    def __post_init__(self):
        object.__setattr__(self, "r", _as_fraction(self.r))
        object.__setattr__(self, "s", _as_fraction(self.s))
        if self.s == 0:
            raise ValueError("linear kernel with s = 0 has zero pivot")

    def _eval(self, x: float) -> float:
        return float(self.s - self.r) / x + float(self.r)

    def _eval_many(self, xs: np.ndarray) -> np.ndarray:
        return float(self.s - self.r) / xs + float(self.r)

    def _eval_exact(self, x: Fraction) -> Rational:
        return (self.s - self.r) / x + self.r

    def spec(self) -> str:
        return f"linear:r={self.r},s={self.s}"


@dataclass(frozen=True, repr=False)
class V23Kernel(ThetaFunction):
    """Tent diamond view: 1-t below 1/2, t above; continuous at 1/2."""

    family: str = field(default="v23", init=False)
    exact_capable: bool = field(default=True, init=False)

    def _eval(self, x: float) -> float:
        return 1.0 - 1.0 / x if x >= 2.0 else 1.0 / x

    def _eval_many(self, xs: np.ndarray) -> np.ndarray:
        return np.where(xs >= 2.0, 1.0 - 1.0 / xs, 1.0 / xs)

    def _eval_exact(self, x: Fraction) -> Rational:
        return 1 - 1 / x if x >= 2 else 1 / x

    def _breakpoints(self, t_min: float) -> list[float]:
        return [0.5] if 0.5 > t_min else []

    def spec(self) -> str:
        return "v23"


#: half-width of the float window around x = 2 that the dirac kernel treats
#: as "exactly 2"; rational evaluation compares exactly instead.
DIRAC_EPS = 1e-12


@dataclass(frozen=True, repr=False)
class DiracKernel(ThetaFunction):
    """theta(x) = r at x = 2 exactly, 1 otherwise (0 < r < 1).

    Rational callers get an exact x == 2 test; float callers get a window
    of half-width DIRAC_EPS around 2.
    """

    r: Fraction
    family: str = field(default="dirac", init=False)
    exact_capable: bool = field(default=True, init=False)

    def __post_init__(self):
        object.__setattr__(self, "r", _as_fraction(self.r))
        if not 0 < self.r < 1:
            raise ValueError("dirac kernel needs 0 < r < 1")

    def _eval(self, x: float) -> float:
        return float(self.r) if abs(x - 2.0) <= DIRAC_EPS else 1.0

    def _eval_many(self, xs: np.ndarray) -> np.ndarray:
        return np.where(np.abs(xs - 2.0) <= DIRAC_EPS, float(self.r), 1.0)

    def _eval_exact(self, x: Fraction) -> Rational:
        return self.r if x == 2 else Fraction(1)

    def spec(self) -> str:
        return f"dirac:r={self.r}"


@dataclass(frozen=True, repr=False)
class Pow2Kernel(ThetaFunction):
    """theta(x) = 2^floor(log2 x) / x, dyadic plateaus of x*theta."""

    family: str = field(default="pow2", init=False)
    exact_capable: bool = field(default=True, init=False)

    def _eval(self, x: float) -> float:
        j = math.floor(x).bit_length() - 1
        return float(1 << j) / x

    def _eval_many(self, xs: np.ndarray) -> np.ndarray:
        # floor first so exact powers of two land on the correct plateau
        j = np.floor(np.log2(np.floor(xs)))
        return np.exp2(j) / xs

    def _eval_exact(self, x: Fraction) -> Rational:
        j = _floor_frac(x).bit_length() - 1
        return Fraction(1 << j) / x

    def g_exact(self, x: Rational) -> Rational:
        return 1 << (_floor_frac(_as_fraction(x)).bit_length() - 1)

    def _breakpoints(self, t_min: float) -> list[float]:
        out = []
        j = 1
        while 0.5 ** j > t_min:
            out.append(0.5 ** j)
            j += 1
        return out[::-1]

    def spec(self) -> str:
        return "pow2"


@dataclass(frozen=True, repr=False)
class MKernel(ThetaFunction):
    """Floor kernel truncated at x = m: for x >= m, theta = 1/x + 1 - 1/m.

    The diamond view keeps the first m - 1 floor plateaus and continues with
    the line t + 1 - 1/m below t = 1/m.
    """

    m: int
    family: str = field(default="m", init=False)
    exact_capable: bool = field(default=True, init=False)

    def __post_init__(self):
        if not (isinstance(self.m, int) and self.m >= 2):
            raise ValueError("m kernel needs integer m >= 2")

    def _eval(self, x: float) -> float:
        if x < self.m:
            return math.floor(x) / x
        return 1.0 / x + 1.0 - 1.0 / self.m

    def _eval_many(self, xs: np.ndarray) -> np.ndarray:
        return np.where(xs < self.m, np.floor(xs) / xs, 1.0 / xs + 1.0 - 1.0 / self.m)

    def _eval_exact(self, x: Fraction) -> Rational:
        if x < self.m:
            return Fraction(_floor_frac(x)) / x
        return 1 / x + 1 - Fraction(1, self.m)

    def _breakpoints(self, t_min: float) -> list[float]:
        return _reciprocal_breakpoints(t_min, j_max=self.m)

    def spec(self) -> str:
        return f"m:{self.m}"


@dataclass(frozen=True, repr=False)
class CoeffKernel(ThetaFunction):
    """theta(x) = g(x)/x with g(x) = sum_{k <= x} z_k floor(x/k).

    With ``period`` set, z is the periodic extension of its first ``period``
    entries (chi4, alt, dh); otherwise z has finite support len(z).  Periodic
    kernels with zero pattern sum evaluate g by divisor-block (hyperbola)
    grouping in O(sqrt x); finite-support kernels loop over the support.
    """

    z: Sequence
    period: int | None = None
    name: str = ""
    family: str = field(default="coeffs", init=False)

    def __post_init__(self):
        if self.z[1] == 0:
            raise ValueError("coefficient kernel needs z_1 != 0 (zero pivot)")
        if self.period is not None and len(self.z) < self.period:
            raise ValueError("periodic coefficient kernel needs one full pattern")
        object.__setattr__(self, "exact_capable", self.z.exact)
        # prefix sums of one pattern (period case) or of the whole support
        span = self.period if self.period is not None else len(self.z)
        pref = [0] * (span + 1)
        for k in range(1, span + 1):
            pref[k] = pref[k - 1] + self.z[k]
        object.__setattr__(self, "_pref", pref)

    # prefix sum Z(m) = sum_{k <= m} z_k
    def _prefix(self, m: int):
        if m <= 0:
            return 0
        if self.period is None:
            return self._pref[min(m, len(self.z))]
        full, rem = divmod(m, self.period)
        return full * self._pref[self.period] + self._pref[rem]

    def coefficient(self, k: int):
        """z_k under the periodic / finite-support convention."""
        if self.period is not None:
            return self.z[(k - 1) % self.period + 1]
        return self.z[k] if k <= len(self.z) else 0

    def g_int(self, n: int):
        """g at integer n (g is constant on [n, n+1)), via hyperbola blocks."""
        if n <= 0:
            return 0
        if self.period is None and len(self.z) < n:
            # finite support: plain loop over the support
            return sum(self.z[k] * (n // k) for k in range(1, len(self.z) + 1) if self.z[k] != 0)
        total = 0
        k = 1
        while k <= n:
            v = n // k
            hi = n // v
            total += v * (self._prefix(hi) - self._prefix(k - 1))
            k = hi + 1
        return total

    def _eval(self, x: float) -> float:
        return float(self.g_int(math.floor(x))) / x

    def _eval_many(self, xs: np.ndarray) -> np.ndarray:
        return np.array([float(self.g_int(math.floor(x))) for x in xs]) / xs

    def _eval_exact(self, x: Fraction) -> Rational:
        if not self.exact_capable:
            raise ExactnessError("coefficient kernel holds float coefficients")
        return self.g_int(_floor_frac(x)) / x

    def g_exact(self, x: Rational) -> Rational:
        if not self.exact_capable:
            raise ExactnessError("coefficient kernel holds float coefficients")
        return self.g_int(_floor_frac(_as_fraction(x)))

    def coefficient_array(self, n_max: int) -> np.ndarray:
        """Float z_1..z_n_max as arr[1..n_max] (arr[0] = 0)."""
        out = np.zeros(n_max + 1)
        if self.period is not None:
            pat = np.array([float(self.z[k]) for k in range(1, self.period + 1)])
            reps = -(-n_max // self.period)
            out[1:] = np.tile(pat, reps)[:n_max]
        else:
            top = min(n_max, len(self.z))
            out[1: top + 1] = [float(self.z[k]) for k in range(1, top + 1)]
        return out

    def jump(self, x: int):
        """Jump of g at integer x: sum of z_k over divisors k of x."""
        total = 0
        for k in _divisors(x):
            total += self.coefficient(k)
        return total

    def plateau_edges(self, x_max: int) -> list[int]:
        """Integers 1 <= x <= x_max where g actually jumps, ascending.

        Finite-support kernels heap-merge the multiple streams k, 2k, 3k, ...
        of each support index, so candidates come out ascending without
        buffering every multiple.  Periodic kernels have dense support
        (every residue class with z != 0), so candidates are scanned
        directly; either way a candidate only counts when the divisor sum
        of z over it is nonzero.
        """
        if self.period is not None:
            return [x for x in range(1, x_max + 1) if not self._is_zero(self.jump(x))]
        support = [k for k in range(1, len(self.z) + 1) if self.z[k] != 0]
        heap: list[tuple[int, int]] = [(k, k) for k in support]
        heapq.heapify(heap)
        edges = []
        last = 0
        while heap:
            x, k = heapq.heappop(heap)
            if x > x_max:
                break
            if x != last and not self._is_zero(self.jump(x)):
                edges.append(x)
            last = x
            nxt = x + k
            if nxt <= x_max:
                heapq.heappush(heap, (nxt, k))
        return edges

    def _is_zero(self, v) -> bool:
        if self.exact_capable:
            return v == 0
        return abs(v) < 1e-9

    def _breakpoints(self, t_min: float) -> list[float]:
        x_max = int(math.floor(1.0 / t_min))
        while x_max >= 2 and 1.0 / x_max <= t_min:
            x_max -= 1
        edges = [x for x in self.plateau_edges(x_max) if x >= 2]
        return [1.0 / x for x in reversed(edges)]

    def spec(self) -> str:
        if self.name:
            return f"coeffs:{self.name}"
        return "coeffs:<inline>"


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d * d != n:
                out.append(n // d)
        d += 1
    return out


# ---------------------------------------------------------------------------
# factory + spec mini-language

_NAMED_COEFFS = ("chi4", "tau", "alt", "dh")


def make_theta(family: str, **params) -> ThetaFunction:
    """Build a kernel by family name.

    coeffs takes either z=<Sequence> (+ optional period=, name=) or one of
    the named streams name in {chi4, tau, alt, dh} with zlen= for tau.
    """
    family = family.lower()
    if family == "floor":
        return FloorKernel()
    if family == "frac":
        return FracKernel(r=params["r"])
    if family == "sqrtfloor":
        return SqrtFloorKernel()
    if family == "pw32":
        return PW32Kernel()
    if family == "smooth":
        return SmoothKernel(lam=params.get("lam", params.get("lambda")))
    if family == "linear":
        return LinearKernel(r=params["r"], s=params["s"])
    if family == "v23":
        return V23Kernel()
    if family == "dirac":
        return DiracKernel(r=params["r"])
    if family == "pow2":
        return Pow2Kernel()
    if family == "m":
        return MKernel(m=int(params["m"]))
    if family == "coeffs":
        if "z" in params:
            return CoeffKernel(z=params["z"], period=params.get("period"),
                               name=params.get("name", ""))
        return named_coeff_kernel(params["name"], zlen=params.get("zlen", 1024))
    raise ValueError(f"unknown theta family {family!r}")


def named_coeff_kernel(name: str, zlen: int = 1024) -> CoeffKernel:
    """The four built-in coefficient streams."""
    if name == "chi4":
        return CoeffKernel(z=chi4(4), period=4, name="chi4")
    if name == "alt":
        return CoeffKernel(z=alternating_unit(2), period=2, name="alt")
    if name == "dh":
        return CoeffKernel(z=dh_sequence(5), period=5, name="dh")
    if name == "tau":
        tau = ramanujan_tau(zlen)
        vals = np.array([float(tau[k]) / k ** 5.5 for k in range(1, zlen + 1)])
        return CoeffKernel(z=Sequence(vals, label="tau/k^5.5"), name="tau")
    raise ValueError(f"unknown coefficient stream {name!r}")


def parse_theta(spec: str, zlen: int = 1024) -> ThetaFunction:
    """Parse the CLI mini-language, e.g. 'frac:r=0.8', 'm:4', 'coeffs:chi4'.

    Numeric parameters parse as exact Fractions ('0.8' stays 4/5).  zlen
    bounds the materialized support for coeffs:tau and coeffs:file.
    """
    spec = spec.strip()
    fam, _, rest = spec.partition(":")
    fam = fam.lower()
    if fam in ("floor", "sqrtfloor", "pw32", "v23", "pow2"):
        if rest:
            raise ValueError(f"family {fam} takes no parameters")
        return make_theta(fam)
    if fam == "m":
        return make_theta("m", m=int(rest))
    if fam == "coeffs":
        if rest.startswith("file="):
            return _coeff_kernel_from_file(rest[5:])
        if rest in _NAMED_COEFFS:
            return named_coeff_kernel(rest, zlen=zlen)
        raise ValueError(f"unknown coeffs stream {rest!r}")
    kv = {}
    if rest:
        for part in rest.split(","):
            key, _, val = part.partition("=")
            if not val:
                raise ValueError(f"malformed parameter {part!r} in {spec!r}")
            kv[key.strip()] = Fraction(val.strip())
    if fam == "frac":
        return make_theta("frac", r=kv["r"])
    if fam == "smooth":
        return make_theta("smooth", lam=kv.get("lambda", kv.get("lam")))
    if fam == "linear":
        return make_theta("linear", r=kv["r"], s=kv["s"])
    if fam == "dirac":
        return make_theta("dirac", r=kv["r"])
    raise ValueError(f"unknown theta spec {spec!r}")


def _coeff_kernel_from_file(path: str) -> CoeffKernel:
    import csv

    rows: dict[int, str] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip() for h in header[:2]] != ["n", "value"]:
            raise ValueError(f"coefficient file {path} must have header n,value")
        for row in reader:
            rows[int(row[0])] = row[1]
    n_max = max(rows)
    try:
        vals: list = [Fraction(rows.get(k, "0")) for k in range(1, n_max + 1)]
        seq = Sequence(vals, label=f"file:{path}", exact=True)
    except ValueError:
        seq = Sequence(np.array([float(rows.get(k, 0.0)) for k in range(1, n_max + 1)]),
                       label=f"file:{path}")
    return CoeffKernel(z=seq, name=f"file={path}")


# ---------------------------------------------------------------------------
# variational-diagram sampling

def vd_sample(theta: ThetaFunction, points: int, t_min: float) -> np.ndarray:
    """Table of (t, theta_diamond(t)) with both sides of every breakpoint.

    Returns an array of shape (M, 2) sorted by t ascending.  A pair of
    samples hugs each breakpoint at a separation much smaller than the
    local plateau width, so jumps stay visible in the table.
    """
    if points < 2:
        raise ValueError("points >= 2 required")
    if not 0.0 < t_min < 1.0:
        raise ValueError("t_min must lie in (0, 1)")
    ts = list(np.linspace(t_min, 1.0, points))
    for b in theta.breakpoints(t_min):
        eps = b * b * 5e-7
        ts.append(b)
        if b - eps > t_min:
            ts.append(b - eps)
        if b + eps <= 1.0:
            ts.append(b + eps)
    ts = np.unique(np.clip(np.array(ts), t_min, 1.0))
    ts = ts[ts > 0]
    vals = theta.diamond_many(ts)
    return np.column_stack([ts, vals])
