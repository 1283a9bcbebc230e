"""Python interface to the viscotherm simulator."""

from ._core import (
    Coefficients,
    ConfigError,
    EnergyReport,
    EstimateReport,
    Grid,
    InitialData,
    NumericalError,
    RefinementTable,
    StepConfig,
    SweepResult,
    Trajectory,
    WeakResidual,
    __version__,
    a_priori_ratios,
    check,
    coefficient_presets,
    energy_ledger,
    epsilon_sweep,
    estimate_integrals,
    initial_preset,
    localized_energy_slack,
    refinement_study,
    run,
    validate_config,
    weak_residuals,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
