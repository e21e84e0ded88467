"""Higher-order antibunching and sub-Poissonian photon statistics for
two-mode multiwave-mixing processes, validated against exact truncated
Fock-space evolution."""

from .criteria import (
    CriterionReport,
    StirlingTable,
    hoa_d,
    hosps_D,
    hosps_D2_special,
    report,
    stirling2,
)
from .evolution import (
    EvolutionMethod,
    EvolutionPlan,
    LeakageError,
    charge_drift,
    evolve,
    fit_power_law,
    moments_at,
)
from .fock import (
    FactorialMoments,
    FockCutoffs,
    Mode,
    TruncationError,
    TwoModeState,
    factorial_moments,
    make_coherent_vacuum,
    make_fock,
    number_distribution,
    suggested_pump_cutoff,
)
from .processes import (
    HamiltonianMatrix,
    ProcessSpec,
    ResonanceWarning,
    build_hamiltonian,
    conserved_charge,
    five_wave_mixing,
    third_harmonic,
)
from .shorttime import (
    D2_fwm,
    D2_thg,
    ShortTimeInput,
    ShortTimeValidityWarning,
    d1_fwm,
    d1_thg,
    d2_fwm,
    d2_thg,
    moments_fwm,
)

__version__ = "0.1.0"

__all__ = [
    "CriterionReport",
    "D2_fwm",
    "D2_thg",
    "EvolutionMethod",
    "EvolutionPlan",
    "FactorialMoments",
    "FockCutoffs",
    "HamiltonianMatrix",
    "LeakageError",
    "Mode",
    "ProcessSpec",
    "ResonanceWarning",
    "ShortTimeInput",
    "ShortTimeValidityWarning",
    "StirlingTable",
    "TruncationError",
    "TwoModeState",
    "build_hamiltonian",
    "charge_drift",
    "conserved_charge",
    "d1_fwm",
    "d1_thg",
    "d2_fwm",
    "d2_thg",
    "evolve",
    "factorial_moments",
    "fit_power_law",
    "five_wave_mixing",
    "hoa_d",
    "hosps_D",
    "hosps_D2_special",
    "make_coherent_vacuum",
    "make_fock",
    "moments_at",
    "moments_fwm",
    "number_distribution",
    "report",
    "stirling2",
    "suggested_pump_cutoff",
    "third_harmonic",
]
