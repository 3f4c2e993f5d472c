"""The (alpha, k, N) triple that parameterizes every sum in the library."""

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SumParams:
    """alpha: complex weight base, k: k-free order (>= 2), N: smoothness bound."""

    alpha: complex
    k: int
    N: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.N < 2:
            raise ValueError("N must be >= 2")

    @property
    def log_n(self) -> float:
        return math.log(self.N)

    def abs_alpha(self) -> "SumParams":
        """The companion parameters with alpha replaced by |alpha| (envelopes)."""
        return SumParams(complex(abs(self.alpha)), self.k, self.N)
