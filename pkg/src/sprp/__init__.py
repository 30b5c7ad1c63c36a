"""Compact integer programs for single-block picker routing, with exact oracles."""
from .coefficients import CostCoefficients, compute_coefficients
from .dp import solve_dp
from .generator import GeneratorSpec, generate_instance
from .warehouse import (BOTTOM, TOP, DecouplingInstance, Depot, Geometry, InstanceError,
                        MultiDepotInstance, ScatteredInstance, StandardInstance, items_prefix,
                        reduce_to_relevant)

__version__ = "0.1.0"
