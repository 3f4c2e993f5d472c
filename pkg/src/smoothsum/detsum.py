"""Deterministic floating-point accumulation helpers.

All product logs and long reductions in this library go through `fsum_real`
or `fsum_complex`.  math.fsum is exactly rounded, so the result does not
depend on summation order or thread count; that is what makes end-to-end
byte-reproducibility cheap to guarantee.
"""

import math

import numpy as np


def fsum_real(values) -> float:
    return math.fsum(values)


def fsum_complex(values) -> complex:
    arr = np.asarray(values, dtype=np.complex128)
    return complex(math.fsum(arr.real.tolist()), math.fsum(arr.imag.tolist()))
