from .height import (
    DeformedProfile,
    HeightProfile,
    charge,
    charge_axis,
    column_deformed_profile,
    deformed_profile,
    diagonal_edges,
    height_profile,
)
from .spec import (
    BoundaryCondition,
    DimerState,
    RailYardSpec,
    column_factor,
    column_interlaces,
    column_neighbors,
    enumerate_states,
    state_weight,
    validate_state,
)
