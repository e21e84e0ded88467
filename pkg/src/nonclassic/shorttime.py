"""Analytic short-time predictions for the pump-mode photon statistics.

For an initially coherent pump of mean photon number lam = |alpha|^2 and
vacuum signal, second-order perturbation theory in the coupling gives,
with x = (g*t)^2:

five-wave mixing (m=3, n=2):
    <N_A>     = lam   - 6  x lam^3
    <N_A^(2)> = lam^2 - 12 x (lam^4 + lam^3)
    <N_A^(3)> = lam^3 - 6  x (3 lam^5 + 6 lam^4 + 2 lam^3)
    d(1) = -12 x lam^3        d(2) = -12 x (3 lam^4 + lam^3)
    D(2) = -48 x lam^3

third-harmonic generation (m=3, n=1):
    d(1) = -6 x lam^3         d(2) = -6 x (3 lam^4 + lam^3)
    D(2) = -24 x lam^3

Only the quantities above have analytic forms here; third-harmonic
factorial moments are deliberately not provided and must be validated
through the exact-evolution oracle instead.  Every function depends on g
and t only through their product, so f(g, t) == f(g*t, 1) holds exactly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .fock import FactorialMoments, Mode

# Expansion parameter g*t*lam^(3/2) above which the quadratic truncation
# starts losing percent-level accuracy.
GT_WARN_DEFAULT = 0.05


class ShortTimeValidityWarning(UserWarning):
    """The expansion parameter left the domain where the quadratic
    short-time forms are trustworthy."""


@dataclass(frozen=True)
class ShortTimeInput:
    """Parameters of one short-time evaluation point."""

    alpha_sq: float
    g: float
    t: float
    gt_warn: float = GT_WARN_DEFAULT

    def __post_init__(self) -> None:
        for label, x in (("alpha_sq", self.alpha_sq), ("g", self.g), ("t", self.t)):
            if not (math.isfinite(x) and x >= 0):
                raise ValueError(f"{label} must be finite and >= 0, got {x}")
        if self.expansion_parameter > self.gt_warn:
            warnings.warn(
                f"expansion parameter g*t*alpha_sq^(3/2) = "
                f"{self.expansion_parameter:.3g} exceeds {self.gt_warn:g}; "
                "quadratic short-time forms are leaving their validity domain",
                ShortTimeValidityWarning,
                stacklevel=2,
            )

    @property
    def gt(self) -> float:
        return self.g * self.t

    @property
    def expansion_parameter(self) -> float:
        return self.gt * self.alpha_sq**1.5


def moments_fwm(inp: ShortTimeInput) -> FactorialMoments:
    """Pump-mode factorial moments (orders 1..3) for five-wave mixing."""
    lam = inp.alpha_sq
    x = inp.gt * inp.gt
    values = np.array(
        [
            lam - 6.0 * x * lam**3,
            lam**2 - 12.0 * x * (lam**4 + lam**3),
            lam**3 - 6.0 * x * (3.0 * lam**5 + 6.0 * lam**4 + 2.0 * lam**3),
        ]
    )
    return FactorialMoments(mode=Mode.A, values=values)


def d1_fwm(inp: ShortTimeInput) -> float:
    """Pump antibunching d(1) for five-wave mixing: -12 (gt)^2 lam^3."""
    x = inp.gt * inp.gt
    return -12.0 * x * inp.alpha_sq**3


def d2_fwm(inp: ShortTimeInput) -> float:
    """Pump HOA d(2) for five-wave mixing: -12 (gt)^2 (3 lam^4 + lam^3)."""
    x = inp.gt * inp.gt
    lam = inp.alpha_sq
    return -12.0 * x * (3.0 * lam**4 + lam**3)


def D2_fwm(inp: ShortTimeInput) -> float:
    """Pump HOSPS D(2) for five-wave mixing: -48 (gt)^2 lam^3."""
    x = inp.gt * inp.gt
    return -48.0 * x * inp.alpha_sq**3


def d1_thg(inp: ShortTimeInput) -> float:
    """Pump antibunching d(1) for third-harmonic generation: -6 (gt)^2 lam^3."""
    x = inp.gt * inp.gt
    return -6.0 * x * inp.alpha_sq**3


def d2_thg(inp: ShortTimeInput) -> float:
    """Pump HOA d(2) for third-harmonic generation: -6 (gt)^2 (3 lam^4 + lam^3)."""
    x = inp.gt * inp.gt
    lam = inp.alpha_sq
    return -6.0 * x * (3.0 * lam**4 + lam**3)


def D2_thg(inp: ShortTimeInput) -> float:
    """Pump HOSPS D(2) for third-harmonic generation: -24 (gt)^2 lam^3."""
    x = inp.gt * inp.gt
    return -24.0 * x * inp.alpha_sq**3


# closed forms keyed the way the CLI reports them
FWM_CRITERIA = {"d1": d1_fwm, "d2": d2_fwm, "D2": D2_fwm}
THG_CRITERIA = {"d1": d1_thg, "d2": d2_thg, "D2": D2_thg}
