"""Mark-0 macroeconomy simulator: C++ core with Python bindings."""

from ._mark0 import (  # noqa: F401
    CreditPolicy,
    EconomyParams,
    LockdownWindow,
    PhaseCell,
    PhaseDiagram,
    PolicySpec,
    RunSeries,
    RunSpec,
    ScenarioSpec,
    Shape,
    ShapeLabel,
    ShapeThresholds,
    ShockSchedule,
    SweepGrid,
    __version__,
    annualized_inflation,
    cell_run_seed,
    classify_shape,
    crisis_probability,
    peak_unemployment,
    relative_output,
    run_ensemble,
    run_one,
    sweep,
)

__all__ = [
    "CreditPolicy",
    "EconomyParams",
    "LockdownWindow",
    "PhaseCell",
    "PhaseDiagram",
    "PolicySpec",
    "RunSeries",
    "RunSpec",
    "ScenarioSpec",
    "Shape",
    "ShapeLabel",
    "ShapeThresholds",
    "ShockSchedule",
    "SweepGrid",
    "__version__",
    "annualized_inflation",
    "cell_run_seed",
    "classify_shape",
    "crisis_probability",
    "peak_unemployment",
    "relative_output",
    "run_ensemble",
    "run_one",
    "sweep",
]
