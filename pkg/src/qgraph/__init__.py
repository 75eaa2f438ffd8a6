"""Spectra, scattering and trace formulas for metric quantum graphs."""

__version__ = "0.1.0"

from .errors import (
    BoundaryConditionError,
    ExplosionError,
    GraphConstructionError,
    NotAnEigenvalueError,
    QuantumGraphError,
    SingularityError,
)
from .graph import (
    BondBasis,
    DiscreteGraph,
    MetricGraph,
    bond_basis,
    build_discrete_graph,
    complete_graph,
    cycle_graph,
    interval,
    metric_graph,
    neighborhood,
    star_graph,
)
from .vertex import (
    DIRICHLET,
    KIRCHHOFF,
    NEUMANN,
    ScatteringMatrix,
    VertexCondition,
    delta_condition,
    general,
    lead_augmented_sigma,
    random_condition,
    sigma_of_k,
    verify_sigma_relations,
)
from .evolution import (
    GREENS,
    SCHRODINGER,
    build_bond_scattering,
    build_propagator,
    evolution_map,
    secular_determinant,
)
from .spectrum import ScanConfig, SpectralPoint, eigenvectors_at, find_spectrum
from .scattering import (
    UnitsConvention,
    brute_force_transmission,
    greens_function,
    solve_families,
    star_gf_oracle,
)
from .orbits import counting_function, density_of_states, enumerate_orbits, trace_power
from .similarity import Word, eigen_match, enumerate_words, specht_bound, specht_check
