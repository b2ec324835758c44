from .eigen import eigvalsh3, symmetrize
from .functionals import (
    MomentState,
    TemperatureTensor,
    collision_frequency,
    conservation_residual,
    conservation_scales,
    ellipsoidal_gaussian,
    entropy_production,
    gaussian_density,
    h_functional,
    h_gap_closed,
    h_gaussian_closed,
    mixture,
    moments,
    relative_entropy,
    temperature_tensor,
)
from .grid import GridDistribution, VelocityGrid, read_binary, read_csv, write_binary, write_csv
from .states import grid_for, random_components, random_state
