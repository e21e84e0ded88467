"""Built-in invariant checks for the ``selftest`` subcommand.

Each check recomputes its expectation from an independent brute-force
route (set-partition enumeration, direct pmf statistics, dense commutators)
rather than trusting the code path it validates.  All randomness flows
from the configured seed, so a selftest run is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .criteria import hoa_d, hosps_D, hosps_D2_special, stirling2
from .evolution import EvolutionPlan, evolve
from .fock import (
    FactorialMoments,
    FockCutoffs,
    Mode,
    TwoModeState,
    factorial_moments,
    make_coherent_vacuum,
    make_fock,
    number_distribution,
)
from .processes import (
    ProcessSpec,
    build_hamiltonian,
    conserved_charge,
    five_wave_mixing,
    third_harmonic,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def _count_partitions_brute(n: int, k: int) -> int:
    """Count partitions of an n-set into exactly k nonempty blocks by
    explicit enumeration (assign each element to an old or new block)."""
    counts = [0]

    def place(element: int, blocks: list[list[int]]) -> None:
        if element == n:
            if len(blocks) == k:
                counts[0] += 1
            return
        for b in blocks:
            b.append(element)
            place(element + 1, blocks)
            b.pop()
        if len(blocks) < k:
            blocks.append([element])
            place(element + 1, blocks)
            blocks.pop()

    place(0, [])
    return counts[0]


def _random_pmfs(rng: np.random.Generator, count: int, max_len: int = 12) -> list[np.ndarray]:
    pmfs = []
    for _ in range(count):
        length = int(rng.integers(3, max_len + 1))
        w = rng.uniform(0.0, 1.0, size=length)
        pmfs.append(w / w.sum())
    return pmfs


def _pmf_factorial_moments(pmf: np.ndarray, k_max: int) -> FactorialMoments:
    values = []
    for i in range(1, k_max + 1):
        total = 0.0
        for n, p in enumerate(pmf):
            w = 1
            for j in range(i):
                w *= n - j
            total += p * w
        values.append(total)
    return FactorialMoments(mode=Mode.A, values=np.array(values))


def _central_moment(pmf: np.ndarray, order: int) -> float:
    ns = np.arange(len(pmf), dtype=float)
    mean = float(ns @ pmf)
    return float(((ns - mean) ** order) @ pmf)


def _poisson_central_moment(mean: float, order: int) -> float:
    if mean == 0.0:
        return 0.0
    n_max = int(mean + 40.0 * math.sqrt(mean) + 60.0)
    log_p = -mean
    total = 0.0
    for n in range(n_max + 1):
        if n > 0:
            log_p += math.log(mean) - math.log(n)
        total += math.exp(log_p) * (n - mean) ** order
    return total


def check_stirling_vs_enumeration() -> CheckResult:
    worst = ""
    for n in range(0, 11):
        for k in range(0, n + 1):
            expected = _count_partitions_brute(n, k)
            got = stirling2(n, k)
            if got != expected:
                worst = f"S2({n},{k}) = {got}, enumeration gives {expected}"
                return CheckResult("stirling-vs-partition-enumeration", False, worst)
    return CheckResult("stirling-vs-partition-enumeration", True, "exact up to n = 10")


def check_coherent_baseline() -> CheckResult:
    worst = 0.0
    for lam in (0.5, 1.0, 2.0, 4.0):
        cut = FockCutoffs(int(lam + 10 * math.sqrt(lam) + 20), 2)
        state = make_coherent_vacuum(math.sqrt(lam), cut)
        mom = factorial_moments(state, Mode.A, 5)
        for l in range(1, 5):
            worst = max(worst, abs(hoa_d(mom, l)))
        for l in range(2, 6):
            worst = max(worst, abs(hosps_D(mom, l)))
    ok = worst < 1e-9
    return CheckResult("coherent-baseline-zero", ok, f"max |criterion| = {worst:.2e}")


def check_fock_baseline() -> CheckResult:
    for n in range(2, 11):
        cut = FockCutoffs(n + 2, 2)
        mom = factorial_moments(make_fock(n, 0, cut), Mode.A, min(8, n + 1))
        for l in range(1, min(n, mom.k_max)):
            d = hoa_d(mom, l)
            expected = math.factorial(n) / math.factorial(n - l - 1) - float(n) ** (l + 1)
            if d >= 0 or abs(d - expected) > 1e-6 * max(1.0, abs(expected)):
                return CheckResult(
                    "fock-antibunching-sign",
                    False,
                    f"n={n}, l={l}: d={d}, expected {expected}",
                )
    return CheckResult("fock-antibunching-sign", True, "d(l) < 0 for all 1 <= l < n <= 10")


def check_poisson_difference(rng: np.random.Generator, count: int = 1000) -> CheckResult:
    worst = 0.0
    for pmf in _random_pmfs(rng, count):
        mom = _pmf_factorial_moments(pmf, 4)
        for l in (2, 3, 4):
            expected = _central_moment(pmf, l) - _poisson_central_moment(mom.mean, l)
            worst = max(worst, abs(hosps_D(mom, l) - expected))
    ok = worst < 1e-9
    return CheckResult(
        "hosps-poisson-difference-identity", ok, f"max deviation = {worst:.2e} over {count} pmfs"
    )


def check_special_case_equivalence(rng: np.random.Generator, count: int = 1000) -> CheckResult:
    worst = 0.0
    for pmf in _random_pmfs(rng, count):
        mom = _pmf_factorial_moments(pmf, 3)
        worst = max(worst, abs(hosps_D2_special(mom) - hosps_D(mom, 3)))
    ok = worst < 1e-12
    return CheckResult(
        "hosps-d2-special-case", ok, f"max |explicit - double sum| = {worst:.2e}"
    )


def check_hermiticity_and_charge() -> CheckResult:
    for spec in (five_wave_mixing(0.37), third_harmonic(0.51)):
        cut = FockCutoffs(7, 6)
        ham = build_hamiltonian(spec, cut).dense()
        if not np.array_equal(ham, ham.conj().T):
            return CheckResult("hamiltonian-hermitian-and-charge", False, f"{spec.name}: H != H^dag")
        q = conserved_charge(spec, cut)
        comm = ham * q[None, :] - q[:, None] * ham
        if np.max(np.abs(comm)) != 0.0:
            return CheckResult(
                "hamiltonian-hermitian-and-charge", False, f"{spec.name}: [H, Q] != 0"
            )
    return CheckResult(
        "hamiltonian-hermitian-and-charge", True, "H = H^dag and [H, Q] = 0 exactly"
    )


def check_free_evolution() -> CheckResult:
    spec = ProcessSpec(omega1=1.0, omega2=1.5, g=0.0, m=3, n=2, name="free")
    cut = FockCutoffs(25, 4)
    state0 = make_coherent_vacuum(1.0, cut)
    plan = EvolutionPlan(build_hamiltonian(spec, cut), np.array([0.7, 2.3]))
    worst = 0.0
    for state in evolve(state0, plan):
        for mode in (Mode.A, Mode.B):
            delta = number_distribution(state, mode) - number_distribution(state0, mode)
            worst = max(worst, float(np.max(np.abs(delta))))
    ok = worst < 1e-12
    return CheckResult("free-evolution-preserves-statistics", ok, f"max pmf change = {worst:.2e}")


def check_moment_identities(rng: np.random.Generator, count: int = 200) -> CheckResult:
    worst = 0.0
    for _ in range(count):
        cut = FockCutoffs(int(rng.integers(2, 9)), int(rng.integers(2, 9)))
        amp = rng.normal(size=cut.dim) + 1j * rng.normal(size=cut.dim)
        amp /= np.linalg.norm(amp)
        state = TwoModeState(amp, cut)
        for mode in (Mode.A, Mode.B):
            pmf = number_distribution(state, mode)
            ns = np.arange(len(pmf), dtype=float)
            raw2 = float((ns**2) @ pmf)
            raw3 = float((ns**3) @ pmf)
            mom = factorial_moments(state, mode, 3)
            worst = max(worst, abs(raw2 - (mom.order(2) + mom.order(1))))
            worst = max(
                worst, abs(raw3 - (mom.order(3) + 3.0 * mom.order(2) + mom.order(1)))
            )
    ok = worst < 1e-10
    return CheckResult("falling-factorial-identities", ok, f"max deviation = {worst:.2e}")


def run_all(seed: int = 2024) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    return [
        check_stirling_vs_enumeration(),
        check_coherent_baseline(),
        check_fock_baseline(),
        check_poisson_difference(rng),
        check_special_case_equivalence(rng),
        check_hermiticity_and_charge(),
        check_free_evolution(),
        check_moment_identities(rng),
    ]
