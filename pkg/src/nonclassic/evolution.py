"""Exact unitary evolution on the truncated basis.

This is the oracle every analytic short-time result is validated against.
The default method diagonalizes the (real symmetric) Hamiltonian once and
evaluates all requested times from the same eigenbasis, which is exact up
to floating point and by far the cheapest route when many times share one
generator.  A scaling-and-squaring matrix exponential and an adaptive ODE
integrator are available as independent cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
import scipy.linalg
from scipy.integrate import solve_ivp

from .fock import FactorialMoments, FockCutoffs, Mode, TwoModeState, factorial_moments
from .processes import HamiltonianMatrix, ProcessSpec, conserved_charge

# Above this probability at the truncation wall the run is not trustworthy
# and evolve() refuses to hand the states back.
LEAKAGE_CEILING = 1e-6

# Above this dimension the default eigendecomposition gives way to the
# adaptive integrator, which never materializes a dense matrix.
EIGH_DIM_LIMIT = 4096


class LeakageError(RuntimeError):
    """Truncation-wall probability exceeded the hard ceiling."""

    def __init__(self, time: float, leakage: float):
        self.time = time
        self.leakage = leakage
        super().__init__(
            f"leakage {leakage:.3e} at t={time:g} exceeds ceiling {LEAKAGE_CEILING:.0e}; "
            "enlarge the cutoffs"
        )


class EvolutionMethod(Enum):
    EIGEN = "eigendecomposition"
    SCALED_EXPM = "scaled_expm"
    ODE_ADAPTIVE = "ode_adaptive"


@dataclass(frozen=True)
class EvolutionPlan:
    """Hamiltonian, evaluation times, and method for one trajectory."""

    hamiltonian: HamiltonianMatrix
    times: np.ndarray
    method: EvolutionMethod = EvolutionMethod.EIGEN
    tolerance: float = 1e-10

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        if times.ndim != 1 or times.size < 1:
            raise ValueError("times must be a nonempty 1-D array")
        if times[0] < 0:
            raise ValueError("times must be nonnegative")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        object.__setattr__(self, "times", times)


def _wrap(vec: np.ndarray, cutoffs: FockCutoffs, t: float, tolerance: float) -> TwoModeState:
    raw_norm = float(np.linalg.norm(vec))
    if abs(raw_norm - 1.0) > tolerance:
        raise RuntimeError(
            f"unitarity lost at t={t:g}: norm drift {abs(raw_norm - 1.0):.3e} "
            f"exceeds tolerance {tolerance:.1e}"
        )
    state = TwoModeState(vec / raw_norm, cutoffs, raw_norm=raw_norm)
    leak = state.leakage()
    if leak > LEAKAGE_CEILING:
        raise LeakageError(t, leak)
    return state


def evolve(state0: TwoModeState, plan: EvolutionPlan) -> list[TwoModeState]:
    """Propagate |psi(t)> = exp(-iHt)|psi(0)> at every planned time.

    Outputs are unit-normalized with the raw pre-normalization norm kept
    as the unitarity diagnostic.  Raises :class:`LeakageError` if the
    truncation wall captures more than ``LEAKAGE_CEILING`` probability at
    any requested time; smaller leakage is reported on the states, not
    raised, so convergence studies can approach the wall deliberately.

    The default eigendecomposition falls back to the adaptive integrator
    above ``EIGH_DIM_LIMIT`` basis states, where a dense factorization
    stops being the cheap option.
    """
    ham = plan.hamiltonian
    if state0.cutoffs != ham.cutoffs:
        raise ValueError(
            f"state cutoffs {state0.cutoffs} do not match Hamiltonian cutoffs {ham.cutoffs}"
        )
    psi0 = state0.amplitudes
    out: list[TwoModeState] = []

    method = plan.method
    if method is EvolutionMethod.EIGEN and ham.dim > EIGH_DIM_LIMIT:
        method = EvolutionMethod.ODE_ADAPTIVE

    if method is EvolutionMethod.EIGEN:
        energies, vectors = scipy.linalg.eigh(ham.dense())
        coeffs = vectors.conj().T @ psi0
        for t in plan.times:
            if t == 0.0:
                out.append(state0)
                continue
            vec = vectors @ (np.exp(-1j * energies * t) * coeffs)
            out.append(_wrap(vec, ham.cutoffs, float(t), plan.tolerance))
    elif method is EvolutionMethod.SCALED_EXPM:
        dense = ham.dense()
        for t in plan.times:
            if t == 0.0:
                out.append(state0)
                continue
            vec = scipy.linalg.expm(-1j * dense * t) @ psi0
            out.append(_wrap(vec, ham.cutoffs, float(t), plan.tolerance))
    elif method is EvolutionMethod.ODE_ADAPTIVE:
        matrix = ham.matrix

        def rhs(_t: float, y: np.ndarray) -> np.ndarray:
            return -1j * (matrix @ y)

        t_final = float(plan.times[-1])
        if t_final == 0.0:
            return [state0]
        sol = solve_ivp(
            rhs,
            (0.0, t_final),
            psi0.astype(complex),
            method="DOP853",
            t_eval=plan.times,
            rtol=plan.tolerance,
            atol=plan.tolerance * 1e-2,
        )
        if not sol.success:
            raise RuntimeError(f"adaptive integration failed: {sol.message}")
        for k, t in enumerate(plan.times):
            if t == 0.0:
                out.append(state0)
                continue
            out.append(_wrap(sol.y[:, k], ham.cutoffs, float(t), plan.tolerance))
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown method {method}")
    return out


def moments_at(
    states: list[TwoModeState], mode: Mode, k_max: int = 4
) -> list[FactorialMoments]:
    """Factorial moments of one mode along a trajectory."""
    return [factorial_moments(s, mode, k_max) for s in states]


def charge_expectation(state: TwoModeState, spec: ProcessSpec) -> float:
    q = conserved_charge(spec, state.cutoffs)
    p = np.abs(state.amplitudes) ** 2
    return float(q @ p)


def charge_drift(states: list[TwoModeState], spec: ProcessSpec) -> np.ndarray:
    """|<Q>(t) - <Q>(0)| per output state; stays at numerical noise because
    the hard-wall Hamiltonian commutes with Q exactly."""
    if not states:
        return np.empty(0)
    q0 = charge_expectation(states[0], spec)
    return np.array([abs(charge_expectation(s, spec) - q0) for s in states])


def energy_expectation(state: TwoModeState, ham: HamiltonianMatrix) -> float:
    vec = state.amplitudes
    return float(np.real(np.vdot(vec, ham.matvec(vec))))


def write_trajectory_csv(
    fileobj,
    times: np.ndarray,
    states: list[TwoModeState],
    spec: ProcessSpec,
    modes: tuple[Mode, ...] = (Mode.A, Mode.B),
    k_max: int = 4,
    header_lines: tuple[str, ...] = (),
) -> None:
    """Trajectory export: one row per (time, mode) with moments and
    diagnostics; header comment lines are prefixed with '#'."""
    for line in header_lines:
        fileobj.write(f"# {line}\n")
    cols = ["time", "mode"] + [f"N{i}" for i in range(1, k_max + 1)]
    cols += ["norm", "leakage", "charge_drift"]
    fileobj.write(",".join(cols) + "\n")
    drift = charge_drift(states, spec)
    for mode in modes:
        mom = moments_at(states, mode, k_max)
        for k, t in enumerate(times):
            s = states[k]
            vals = ",".join(f"{v:.17g}" for v in mom[k].values)
            fileobj.write(
                f"{t:.17g},{mode.value},{vals},{s.raw_norm:.17g},"
                f"{s.leakage():.17g},{drift[k]:.17g}\n"
            )


def fit_power_law(times: np.ndarray, residuals: np.ndarray) -> float:
    """Least-squares slope of log(residual) against log(time).

    Nonpositive residuals (exact agreement) and t = 0 are excluded; at
    least two usable points are required, otherwise NaN is returned.
    """
    t = np.asarray(times, dtype=float)
    r = np.asarray(residuals, dtype=float)
    mask = (t > 0) & (r > 0) & np.isfinite(r)
    if mask.sum() < 2:
        return math.nan
    slope, _ = np.polyfit(np.log(t[mask]), np.log(r[mask]), 1)
    return float(slope)
