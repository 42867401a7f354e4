"""Deterministic tethered-quadcopter simulation."""

from .control import (
    MODES,
    ControllerConfig,
    Gains,
    cascade_controller,
    goal_tension_for,
    landing_monitor,
    tension_following_update,
    tension_goal_controller,
    thrust_from_accel,
)
from .dynamics import (
    PullProfile,
    PullSegment,
    QuadState,
    SensorNoise,
    TetherTaut,
    attitude_lag,
    contact_force,
    equilibrium_attitude,
    hover_state,
    net_force,
    sample_sensors,
    step_dynamics,
    tether_force,
)
from .scenario import (
    TRACE_COLUMNS,
    ScenarioAborted,
    ScenarioConfig,
    SimResult,
    TraceRow,
    run_scenario,
    summarize,
)
