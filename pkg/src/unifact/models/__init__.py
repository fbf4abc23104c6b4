"""Exactly solvable reference systems."""
from .cavity import (
    Example1Params,
    analytic_rho_ab,
    build_example1,
    delta_d_example1,
    deviation_table,
    poisson_distribution,
    simulate_example1,
)
from .dephasing import (
    Example2Params,
    brute_force_example2,
    decoherence_factor,
    decoherence_matrix,
    delta_d_example2,
    displacement_product,
    ohmic,
    simulate_example2,
    wn_displacement_factors,
)
