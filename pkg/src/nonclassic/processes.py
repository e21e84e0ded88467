"""Two-mode exchange interactions and their truncated Hamiltonian matrices.

The generalized process couples a pump mode A and a signal mode B through

    H = omega1 * N_A + omega2 * N_B + g * (A^dag^m B^n + A^m B^dag^n)

so that m pump quanta convert into n signal quanta and back.  Two named
presets are provided: five-wave mixing (m=3, n=2, omega2 = 1.5*omega1)
and third-harmonic generation (m=3, n=1, omega2 = 3*omega1), both at
exact resonance m*omega1 = n*omega2 where the interaction is
time-independent and photon-number statistics are insensitive to the free
rotation.

Matrix elements that would leave the truncated basis are dropped
(hard-wall truncation); correctness is policed by the states' leakage
diagnostic, not by softening the wall.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .fock import FockCutoffs, falling_factorial

# Exchange orders above this are outside the artifact's validated range.
MAX_EXCHANGE_ORDER = 6

# Below this dimension a dense matrix is simpler and at least as fast.
DENSE_DIM_THRESHOLD = 256

FIVE_WAVE_MIXING = "five_wave_mixing"
THIRD_HARMONIC = "third_harmonic"


class ResonanceWarning(UserWarning):
    """The process violates m*omega1 = n*omega2; statistics acquire explicit
    time dependence that this time-independent model does not capture."""


@dataclass(frozen=True)
class ProcessSpec:
    """Frequencies, coupling and exchange integers of one interaction.

    ``m`` pump quanta are absorbed per event and ``n`` signal quanta
    emitted, so energy bookkeeping wants m*omega1 = n*omega2; violation is
    reported as a :class:`ResonanceWarning`, not an error.
    """

    omega1: float
    omega2: float
    g: float
    m: int
    n: int
    name: str = ""

    def __post_init__(self) -> None:
        for label, x in (("omega1", self.omega1), ("omega2", self.omega2), ("g", self.g)):
            if not math.isfinite(x):
                raise ValueError(f"{label} must be finite, got {x}")
        if self.g < 0:
            raise ValueError(f"coupling g must be >= 0, got {self.g}")
        if not (1 <= self.m <= MAX_EXCHANGE_ORDER and 1 <= self.n <= MAX_EXCHANGE_ORDER):
            raise ValueError(
                f"exchange orders must lie in 1..{MAX_EXCHANGE_ORDER}, got m={self.m}, n={self.n}"
            )
        if abs(self.detuning) > 1e-12 * max(1.0, abs(self.omega1), abs(self.omega2)):
            warnings.warn(
                f"process {self.name or '(unnamed)'} is off resonance: "
                f"m*omega1 - n*omega2 = {self.detuning:.3e}",
                ResonanceWarning,
                stacklevel=2,
            )

    @property
    def detuning(self) -> float:
        return self.m * self.omega1 - self.n * self.omega2


def five_wave_mixing(g: float, omega1: float = 1.0) -> ProcessSpec:
    """Three pump photons in, two signal photons out (resonant)."""
    return ProcessSpec(omega1=omega1, omega2=1.5 * omega1, g=g, m=3, n=2, name=FIVE_WAVE_MIXING)


def third_harmonic(g: float, omega1: float = 1.0) -> ProcessSpec:
    """Three pump photons in, one signal photon at triple frequency out."""
    return ProcessSpec(omega1=omega1, omega2=3.0 * omega1, g=g, m=3, n=1, name=THIRD_HARMONIC)


PRESETS = {FIVE_WAVE_MIXING: five_wave_mixing, THIRD_HARMONIC: third_harmonic}


@dataclass(frozen=True)
class HamiltonianMatrix:
    """Hermitian matrix realization of a :class:`ProcessSpec` on a basis.

    Real symmetric by construction (the coupling is real); stored dense
    below ``DENSE_DIM_THRESHOLD`` and as CSR above.  Immutable: share
    freely.
    """

    matrix: object  # np.ndarray or scipy.sparse.csr_matrix
    cutoffs: FockCutoffs
    spec: ProcessSpec

    @property
    def dim(self) -> int:
        return self.cutoffs.dim

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    def dense(self) -> np.ndarray:
        return self.matrix.toarray() if self.is_sparse else self.matrix

    def matvec(self, vec: np.ndarray) -> np.ndarray:
        return self.matrix @ vec

    def dump_coo(self, fileobj) -> None:
        """Coordinate-format dump (row, col, re, im) for external checks."""
        coo = sp.coo_matrix(self.matrix)
        fileobj.write("row,col,re,im\n")
        order = np.lexsort((coo.col, coo.row))
        for k in order:
            v = complex(coo.data[k])
            fileobj.write(f"{coo.row[k]},{coo.col[k]},{v.real:.17g},{v.imag:.17g}\n")


def interaction_weight_sq(n_a: int, n_b: int, m: int, n: int) -> int:
    """Exact integer whose square root scales <n_a-m, n_b+n| H |n_a, n_b>.

    Product of the lowering weights n_a(n_a-1)...(n_a-m+1) and the raising
    weights (n_b+1)(n_b+2)...(n_b+n), from a|k> = sqrt(k)|k-1> and
    b^dag|k> = sqrt(k+1)|k+1>.
    """
    w = falling_factorial(n_a, m)
    for j in range(1, n + 1):
        w *= n_b + j
    return w


def build_hamiltonian(spec: ProcessSpec, cutoffs: FockCutoffs) -> HamiltonianMatrix:
    """Assemble the Hamiltonian on the truncated basis.

    Diagonal entries are omega1*n_a + omega2*n_b; each interaction element
    is written together with its transpose partner so Hermiticity is exact
    by construction.
    """
    if spec.m >= cutoffs.max_a or spec.n >= cutoffs.max_b:
        warnings.warn(
            f"cutoffs ({cutoffs.max_a}, {cutoffs.max_b}) cannot host a single "
            f"(m={spec.m}, n={spec.n}) exchange; the interaction is identically zero",
            UserWarning,
            stacklevel=2,
        )
    max_a, max_b = cutoffs.max_a, cutoffs.max_b
    rows: list[int] = []
    cols: list[int] = []
    vals: list[float] = []
    for n_a in range(max_a):
        for n_b in range(max_b):
            i = cutoffs.index(n_a, n_b)
            rows.append(i)
            cols.append(i)
            vals.append(spec.omega1 * n_a + spec.omega2 * n_b)
            if spec.g != 0.0 and n_a >= spec.m and n_b + spec.n < max_b:
                j = cutoffs.index(n_a - spec.m, n_b + spec.n)
                w = spec.g * math.sqrt(interaction_weight_sq(n_a, n_b, spec.m, spec.n))
                rows.extend((j, i))
                cols.extend((i, j))
                vals.extend((w, w))
    mat = sp.coo_matrix((vals, (rows, cols)), shape=(cutoffs.dim, cutoffs.dim)).tocsr()
    matrix = mat.toarray() if cutoffs.dim < DENSE_DIM_THRESHOLD else mat
    return HamiltonianMatrix(matrix=matrix, cutoffs=cutoffs, spec=spec)


def conserved_charge(spec: ProcessSpec, cutoffs: FockCutoffs) -> np.ndarray:
    """Diagonal of the conserved charge Q = n*N_A + m*N_B.

    Q is diagonal in the Fock basis, so it is returned as its diagonal
    vector.  Each (m, n) exchange moves m pump quanta against n signal
    quanta, leaving n*n_a + m*n_b unchanged; with hard-wall truncation the
    retained interaction elements still connect equal-Q states only, so
    [H, Q] = 0 exactly.
    """
    n_a = np.arange(cutoffs.max_a)
    n_b = np.arange(cutoffs.max_b)
    q = spec.n * n_a[:, None] + spec.m * n_b[None, :]
    return q.reshape(-1).astype(float)
