"""Shared brute-force oracles for the test suite.

Everything here is deliberately independent of the library's own code
paths: moments are summed directly from pmfs, set partitions are counted
by enumerating restricted growth strings, and Poisson statistics come
from explicit high-cutoff sums.
"""

from __future__ import annotations

import math

import numpy as np

from nonclassic.fock import FactorialMoments, Mode


def pmf_factorial_moments(pmf, k_max: int, mode: Mode = Mode.A) -> FactorialMoments:
    """Factorial moments summed term by term from a pmf."""
    values = []
    for i in range(1, k_max + 1):
        total = 0.0
        for n, p in enumerate(pmf):
            weight = 1.0
            for j in range(i):
                weight *= n - j
            total += p * weight
        values.append(total)
    return FactorialMoments(mode=mode, values=np.array(values))


def synthetic_moments(values, mode: Mode = Mode.A) -> FactorialMoments:
    return FactorialMoments(mode=mode, values=np.asarray(values, dtype=float))


def pmf_mean(pmf) -> float:
    return float(sum(n * p for n, p in enumerate(pmf)))


def pmf_central_moment(pmf, order: int) -> float:
    mean = pmf_mean(pmf)
    return float(sum(p * (n - mean) ** order for n, p in enumerate(pmf)))


def pmf_raw_moment(pmf, order: int) -> float:
    return float(sum(p * float(n) ** order for n, p in enumerate(pmf)))


def poisson_pmf(mean: float, n_max: int) -> np.ndarray:
    """Poisson probabilities 0..n_max via the stable log recursion."""
    out = np.empty(n_max + 1)
    log_p = -mean
    for n in range(n_max + 1):
        if n > 0:
            log_p += math.log(mean) - math.log(n)
        out[n] = math.exp(log_p)
    return out


def poisson_central_moment(mean: float, order: int) -> float:
    if mean == 0.0:
        return 0.0
    n_max = int(mean + 40.0 * math.sqrt(mean) + 60.0)
    pmf = poisson_pmf(mean, n_max)
    return float(sum(p * (n - mean) ** order for n, p in enumerate(pmf)))


def thermal_pmf(mean: float, n_max: int = 400) -> np.ndarray:
    """Geometric (single-mode thermal) pmf with the given mean."""
    q = mean / (1.0 + mean)
    n = np.arange(n_max + 1)
    pmf = (1.0 - q) * q**n
    return pmf / pmf.sum()


def random_pmf(rng: np.random.Generator, max_len: int = 12) -> np.ndarray:
    length = int(rng.integers(3, max_len + 1))
    w = rng.uniform(0.0, 1.0, size=length)
    return w / w.sum()


def count_set_partitions(n: int, k: int) -> int:
    """Count partitions of an n-set into k nonempty blocks by enumerating
    restricted growth strings (element i may open at most one new block)."""
    if n == 0:
        return 1 if k == 0 else 0
    total = [0]

    def grow(i: int, used: int, labels: list[int]) -> None:
        if i == n:
            if used == k:
                total[0] += 1
            return
        for label in range(min(used + 1, k)):
            labels.append(label)
            grow(i + 1, max(used, label + 1), labels)
            labels.pop()

    grow(0, 0, [])
    return total[0]
