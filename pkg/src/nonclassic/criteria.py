"""Nonclassicality criteria built on factorial moments.

Two families are implemented, both signed so that callers can compare
depths of nonclassicality rather than just detect it:

* ``hoa_d(moments, l)`` -- the order-l antibunching criterion
  d(l) = <N^(l+1)> - <N>^(l+1); d(1) < 0 is ordinary antibunching and
  d(l) < 0 for l >= 2 is higher-order antibunching (HOA).

* ``hosps_D(moments, l)`` -- the order-(l-1) sub-Poissonian criterion
  D(l-1), equal to the l-th central moment of the photon-number
  distribution minus that of a Poisson distribution with the same mean.
  It is evaluated through the Stirling-number expansion of power moments
  in factorial moments, with all combinatorial coefficients kept as exact
  integers; D(l-1) < 0 signals higher-order sub-Poissonian photon
  statistics (HOSPS).

Both consume :class:`~nonclassic.fock.FactorialMoments` only, so the same
code path serves analytic closed forms, exact simulation output, and
synthetic test distributions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .fock import FactorialMoments, Mode, TwoModeState, factorial_moments

# Stirling numbers above this row are not needed by any supported moment
# order and are refused rather than silently extended.
STIRLING_BOUND = 20


class StirlingTable:
    """Exact S2(n, k) for 0 <= k <= n <= max_n via the triangle recurrence.

    S2(n, k) counts partitions of an n-element set into k nonempty blocks
    and satisfies S2(n, k) = k*S2(n-1, k) + S2(n-1, k-1).  Entries are
    Python integers, so the table is exact at any size.
    """

    def __init__(self, max_n: int = STIRLING_BOUND):
        if max_n < 0:
            raise ValueError("max_n must be >= 0")
        self.max_n = max_n
        rows: list[list[int]] = [[1]]
        for n in range(1, max_n + 1):
            prev = rows[n - 1]
            row = [0] * (n + 1)
            for k in range(1, n + 1):
                row[k] = k * prev[k] + prev[k - 1] if k < n else prev[k - 1]
            rows.append(row)
        self._rows = rows

    def value(self, n: int, k: int) -> int:
        if not 0 <= n <= self.max_n:
            raise ValueError(f"n={n} outside table bound 0..{self.max_n}")
        if not 0 <= k <= n:
            raise ValueError(f"k={k} outside 0..n={n}")
        return self._rows[n][k]


_TABLE = StirlingTable(STIRLING_BOUND)


def stirling2(n: int, k: int) -> int:
    """Exact Stirling number of the second kind S2(n, k), 0 <= k <= n <= 20."""
    return _TABLE.value(n, k)


def _require_orders(moments: FactorialMoments, needed: int, what: str) -> None:
    if moments.k_max < needed:
        raise ValueError(
            f"{what} needs factorial moments up to order {needed}, "
            f"got only {moments.k_max}"
        )


def hoa_d(moments: FactorialMoments, l: int) -> float:
    """Antibunching criterion d(l) = <N^(l+1)> - <N>^(l+1).

    Negative values mean the (l+1)-photon coincidence rate sits below the
    coherent-state benchmark: l = 1 is ordinary antibunching, l >= 2 is
    higher-order antibunching.
    """
    if l < 1:
        raise ValueError(f"l must be >= 1, got {l}")
    _require_orders(moments, l + 1, f"hoa_d(l={l})")
    return moments.order(l + 1) - moments.mean ** (l + 1)


def hosps_D(moments: FactorialMoments, l: int) -> float:
    """Sub-Poissonian criterion D(l-1) from the Stirling double sum.

    D(l-1) = sum_{k=0}^{l} sum_{i=0}^{l-k} C(l,k) (-1)^k S2(l-k, i)
             [ <N^(i)> <N>^k  -  <N>^(k+i) ]

    The first double sum is the l-th central moment of the distribution,
    the second is the same quantity for Poissonian light of equal mean;
    both are accumulated separately with compensated summation and
    subtracted last, because the physically interesting values are tiny
    differences of large terms.
    """
    if l < 2:
        raise ValueError(f"l must be >= 2, got {l}")
    if l > STIRLING_BOUND:
        raise ValueError(f"l={l} exceeds the Stirling table bound {STIRLING_BOUND}")
    _require_orders(moments, l, f"hosps_D(l={l})")
    mean = moments.mean
    central_terms: list[float] = []
    poisson_terms: list[float] = []
    for k in range(l + 1):
        sign_binom = (-1) ** k * math.comb(l, k)
        mean_k = mean**k
        for i in range(l - k + 1):
            s2 = stirling2(l - k, i)
            if s2 == 0:
                continue
            coeff = float(sign_binom * s2)
            central_terms.append(coeff * moments.order(i) * mean_k)
            poisson_terms.append(coeff * mean ** (k + i))
    return math.fsum(central_terms) - math.fsum(poisson_terms)


def hosps_D2_special(moments: FactorialMoments) -> float:
    """The l = 3 special case written out explicitly:

    D(2) = <N^(3)> + 2<N>^3 - 3<N^(2)><N> + 3<N^(2)> - 3<N>^2

    This is the simplest criterion that detects HOSPS and agrees with
    ``hosps_D(moments, 3)`` identically.
    """
    _require_orders(moments, 3, "hosps_D2_special")
    n1 = moments.mean
    n2 = moments.order(2)
    n3 = moments.order(3)
    return math.fsum([n3, 2.0 * n1**3, -3.0 * n2 * n1, 3.0 * n2, -3.0 * n1**2])


@dataclass(frozen=True)
class CriterionReport:
    """All criteria for one mode of one state at one instant.

    ``d_values[l]`` holds d(l) for l = 1..l_max and ``D_values[j]`` holds
    D(j) for j = 1..l_max-1.  ``leakage`` carries the source state's
    truncation diagnostic (0 for analytic inputs), so a consumer can judge
    how trustworthy small negative values are.
    """

    mode: Mode
    time: float
    d_values: dict[int, float]
    D_values: dict[int, float]
    leakage: float


def report(state: TwoModeState, mode: Mode, time: float, l_max: int = 3) -> CriterionReport:
    """Evaluate d(1..l_max) and D(1..l_max-1) for one mode of a state."""
    if l_max < 1:
        raise ValueError(f"l_max must be >= 1, got {l_max}")
    moments = factorial_moments(state, mode, k_max=l_max + 1)
    d_values = {l: hoa_d(moments, l) for l in range(1, l_max + 1)}
    D_values = {l - 1: hosps_D(moments, l) for l in range(2, l_max + 1)}
    return CriterionReport(
        mode=mode,
        time=time,
        d_values=d_values,
        D_values=D_values,
        leakage=state.leakage(),
    )
