"""goodvar: kernels of good variation and their deconvolution experiments.

The package turns a bounded kernel theta on [1, oo) plus a decaying target
f into the coefficient sequence a solving f(n) = sum_{k<=n} a_k theta(n/k),
and studies the partial sums A(n) = sum_{k<=n} a_k: closed forms where they
exist, decay-index estimation where they do not, and mechanical checks of
the breakpoint/slope conditions under which a kernel is expected to control
A(n) at a given critical exponent.
"""

__version__ = "0.1.0"

from .sequences import (
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
    DH_XI,
)
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
    SqrtFloorKernel,
    ThetaFunction,
    V23Kernel,
    make_theta,
    named_coeff_kernel,
    parse_theta,
    vd_sample,
)
from .dirichlet import BridgeCheck, convolve, invert, lemma1_check
from .solver import DeconvRun, Target, forward, scaled_trace, solve

__all__ = [
    "Sequence", "alternating_unit", "chi4", "dh_sequence", "liouville_sieve",
    "mobius_sieve", "ones", "ramanujan_tau", "summatory", "unit", "DH_XI",
    "CoeffKernel", "DiracKernel", "ExactnessError", "FloorKernel",
    "FracKernel", "LinearKernel", "MKernel", "Pow2Kernel", "PW32Kernel",
    "SmoothKernel", "SqrtFloorKernel", "ThetaFunction", "V23Kernel",
    "make_theta", "named_coeff_kernel", "parse_theta", "vd_sample",
    "BridgeCheck", "convolve", "invert", "lemma1_check",
    "DeconvRun", "Target", "forward", "scaled_trace", "solve",
    "__version__",
]
