"""Trace-driven simulation of control loops over lossy wireless sensor/actuator links."""

from .channel import (
    LossTable,
    MobilityProfile,
    Segment,
    distance_at,
    packet_lost,
    sample_loss_rate,
    summarize,
)
from .compensator import (
    CommandHistory,
    PredictorParams,
    actuator_step,
    predict_command,
    push_command,
)
from .engine import (
    ReferenceSpec,
    Scenario,
    SimTrace,
    StepRecord,
    iae_update,
    reference_value,
    run_scenario,
)
from .formats import emit_trace, parse_loss_csv, parse_scenario
from .pid import PidParams, PidState, pid_reset, pid_step
from .plant import (
    ContinuousStateSpace,
    ContinuousTransferFunction,
    DiscretePlant,
    PlantState,
    discretize_zoh,
    plant_reset,
    plant_step,
    tf_to_state_space,
)
from .rng import SplitMix64

__version__ = "0.1.0"
