"""Truncated two-mode Fock space: states, marginals, and factorial moments.

The basis is the product grid |n_a, n_b> with 0 <= n_a < max_a and
0 <= n_b < max_b, stored row-major with n_b running fastest, i.e. the flat
index of |n_a, n_b> is ``n_a * max_b + n_b``.  Every function here is pure
and every object is immutable after construction, so states can be shared
freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

# Probability allowed to sit beyond the truncation wall before a coherent
# state constructor refuses to proceed.
TAIL_MASS_CEILING = 1e-6

# Norm tolerance enforced on every constructed state.
NORM_TOL = 1e-12

# Falling-factorial weights beyond this order are numerically meaningless
# at the truncation boundary and overflow 64-bit intermediates.
MAX_MOMENT_ORDER = 8


class Mode(Enum):
    """The two bosonic modes: A is the pump, B is the signal."""

    A = "A"
    B = "B"


class TruncationError(ValueError):
    """Raised when the requested state does not fit the truncated basis."""


@dataclass(frozen=True)
class FockCutoffs:
    """Exclusive photon-number bounds for the two modes.

    ``max_a`` and ``max_b`` are the basis sizes per mode; the total basis
    dimension is ``max_a * max_b``.
    """

    max_a: int
    max_b: int

    def __post_init__(self) -> None:
        if self.max_a < 1 or self.max_b < 1:
            raise ValueError(f"cutoffs must be >= 1, got ({self.max_a}, {self.max_b})")

    @property
    def dim(self) -> int:
        return self.max_a * self.max_b

    def index(self, n_a: int, n_b: int) -> int:
        """Flat basis index of |n_a, n_b> (n_b fastest)."""
        return n_a * self.max_b + n_b


@dataclass(frozen=True)
class TwoModeState:
    """Pure state on the truncated two-mode basis.

    ``amplitudes`` has length ``cutoffs.dim`` and unit norm.  ``raw_norm``
    is the norm the amplitudes had *before* the final renormalization:
    for constructors it records the captured probability mass, for evolved
    states the unitarity of the propagation step.  ``1 - raw_norm`` (resp.
    ``|raw_norm - 1|``) is therefore the honest error diagnostic.
    """

    amplitudes: np.ndarray
    cutoffs: FockCutoffs
    raw_norm: float = 1.0

    def __post_init__(self) -> None:
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.shape != (self.cutoffs.dim,):
            raise ValueError(
                f"amplitude vector has shape {amp.shape}, expected ({self.cutoffs.dim},)"
            )
        norm = float(np.linalg.norm(amp))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm!r} deviates from 1 by more than {NORM_TOL}")
        object.__setattr__(self, "amplitudes", amp)

    @property
    def grid(self) -> np.ndarray:
        """Amplitudes reshaped to (max_a, max_b)."""
        return self.amplitudes.reshape(self.cutoffs.max_a, self.cutoffs.max_b)

    def probabilities(self) -> np.ndarray:
        """|amplitude|^2 on the (max_a, max_b) grid."""
        g = self.grid
        return (g.real**2 + g.imag**2)

    def leakage(self) -> float:
        """Probability in the boundary layers n_a = max_a-1 or n_b = max_b-1.

        This is the proxy for truncation error: exact dynamics on the
        infinite lattice differs from the hard-wall dynamics only through
        population that reaches the wall.
        """
        p = self.probabilities()
        top_a = p[-1, :].sum()
        top_b = p[:, -1].sum()
        corner = p[-1, -1]
        return float(top_a + top_b - corner)

    def norm_deficit(self) -> float:
        """|raw_norm - 1|: truncation deficit or unitarity drift."""
        return abs(self.raw_norm - 1.0)


def suggested_pump_cutoff(alpha_sq: float) -> int:
    """Basis size that keeps a coherent state's tail mass negligible.

    Uses mean + 10 standard deviations + 15, which puts the Poisson tail
    far below 1e-12 for any mean of desk-scale interest.
    """
    if alpha_sq < 0 or not math.isfinite(alpha_sq):
        raise ValueError(f"alpha_sq must be finite and >= 0, got {alpha_sq}")
    return int(math.ceil(alpha_sq + 10.0 * math.sqrt(alpha_sq) + 15.0))


def make_coherent_vacuum(alpha: complex, cutoffs: FockCutoffs) -> TwoModeState:
    """Coherent pump, vacuum signal: |alpha, 0> on the truncated basis.

    Amplitudes follow exp(-|alpha|^2/2) alpha^n / sqrt(n!) in the pump
    mode; the state is renormalized after truncation and the captured
    probability mass is recorded in ``raw_norm``.

    Raises :class:`TruncationError` when the tail mass beyond ``max_a``
    exceeds the hard ceiling of 1e-6, which signals a cutoff far too small
    for trustworthy statistics.
    """
    alpha = complex(alpha)
    if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)):
        raise ValueError(f"alpha must be finite, got {alpha!r}")
    amp = np.zeros(cutoffs.dim, dtype=complex)
    lam = abs(alpha) ** 2
    # log-scale recursion avoids factorial overflow for large cutoffs
    log_prefactor = -0.5 * lam
    coeff = complex(math.exp(log_prefactor))
    captured = 0.0
    for n_a in range(cutoffs.max_a):
        if n_a > 0:
            coeff = coeff * alpha / math.sqrt(n_a)
        amp[cutoffs.index(n_a, 0)] = coeff
        captured += abs(coeff) ** 2
    tail = max(1.0 - captured, 0.0)
    if tail > TAIL_MASS_CEILING:
        raise TruncationError(
            f"coherent tail mass {tail:.3e} beyond max_a={cutoffs.max_a} exceeds "
            f"ceiling {TAIL_MASS_CEILING:.0e}; enlarge the pump cutoff "
            f"(suggested {suggested_pump_cutoff(lam)})"
        )
    amp /= math.sqrt(captured)
    return TwoModeState(amp, cutoffs, raw_norm=captured)


def make_fock(n_a: int, n_b: int, cutoffs: FockCutoffs) -> TwoModeState:
    """Number state |n_a, n_b>; mostly a test fixture for the criteria."""
    if not (0 <= n_a < cutoffs.max_a and 0 <= n_b < cutoffs.max_b):
        raise TruncationError(
            f"Fock indices ({n_a}, {n_b}) outside cutoffs ({cutoffs.max_a}, {cutoffs.max_b})"
        )
    amp = np.zeros(cutoffs.dim, dtype=complex)
    amp[cutoffs.index(n_a, n_b)] = 1.0
    return TwoModeState(amp, cutoffs)


def number_distribution(state: TwoModeState, mode: Mode) -> np.ndarray:
    """Marginal photon-number pmf of one mode (sums to 1 within 1e-12)."""
    p = state.probabilities()
    return p.sum(axis=1) if mode is Mode.A else p.sum(axis=0)


def falling_factorial(n: int, i: int) -> int:
    """Exact integer n(n-1)...(n-i+1); 1 for i = 0, 0 once the product hits zero."""
    w = 1
    for k in range(i):
        w *= n - k
        if w == 0:
            return 0
    return w


@dataclass(frozen=True)
class FactorialMoments:
    """Factorial moments <N(N-1)...(N-i+1)> of one mode, i = 1..k_max.

    ``values[i-1]`` holds the i-th factorial moment.  Coherent light with
    mean photon number lam has values[i-1] = lam**i, which is the
    classical boundary all the nonclassicality criteria are measured
    against.
    """

    mode: Mode
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size < 1:
            raise ValueError("values must be a 1-D array with at least one entry")
        object.__setattr__(self, "values", vals)

    @property
    def mean(self) -> float:
        return float(self.values[0])

    @property
    def k_max(self) -> int:
        return int(self.values.size)

    def order(self, i: int) -> float:
        """<N^(i)> with the convention order(0) = 1."""
        if i == 0:
            return 1.0
        if not 1 <= i <= self.k_max:
            raise ValueError(f"moment order {i} not available (have 1..{self.k_max})")
        return float(self.values[i - 1])


def factorial_moments(state: TwoModeState, mode: Mode, k_max: int = 4) -> FactorialMoments:
    """Factorial moments up to ``k_max`` from the marginal pmf.

    The falling-factorial weights are exact Python integers converted to
    float only at the final multiply, so no precision is lost to
    intermediate overflow.
    """
    if k_max < 1:
        raise ValueError(f"k_max must be >= 1, got {k_max}")
    if k_max > MAX_MOMENT_ORDER:
        raise ValueError(
            f"k_max={k_max} exceeds the supported bound {MAX_MOMENT_ORDER}; higher "
            "falling-factorial weights are not meaningful at the truncation boundary"
        )
    pmf = number_distribution(state, mode)
    values = np.empty(k_max)
    for i in range(1, k_max + 1):
        terms = [p * float(falling_factorial(n, i)) for n, p in enumerate(pmf) if p != 0.0]
        values[i - 1] = math.fsum(terms)
    return FactorialMoments(mode=mode, values=values)


def dump_state_csv(state: TwoModeState, fileobj) -> None:
    """Debug dump: one ``n_a,n_b,re,im`` line per basis amplitude."""
    fileobj.write("n_a,n_b,re,im\n")
    g = state.grid
    for n_a in range(state.cutoffs.max_a):
        for n_b in range(state.cutoffs.max_b):
            a = g[n_a, n_b]
            fileobj.write(f"{n_a},{n_b},{a.real:.17g},{a.imag:.17g}\n")
