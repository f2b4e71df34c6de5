"""Force-current electrical analogues of lumped vertical vehicle models."""

__version__ = "0.1.0"

from .analogy import (
    AdmittanceSystem,
    Branch,
    CoupledCapacitorPair,
    Netlist,
    analogue_system,
    assemble_admittance,
    expand_couplings,
    norton_transform,
    pi_equivalent,
    to_norton,
    translate_force_current,
)
from .model import (
    HalfCarParams,
    HarmonicForceExcitation,
    HarmonicRoadExcitation,
    SecondOrderModel,
    ThreeAxleParams,
    TwoDofParams,
    build_half_car,
    build_model,
    build_three_axle,
    build_two_dof,
    dependent_velocity_c,
    excitation_phasors,
    force_excitation,
)
from .oracle import (
    closed_form_velocity_phasors,
    frequency_response,
    harmonic_force_phasor,
    spectral_velocities,
    validate,
)
from .solver import PhasorSolution, branch_currents, solve, sweep, to_sinusoid
