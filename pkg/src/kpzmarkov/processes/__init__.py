"""Finite-dimensional laws and samplers of the stationary-measure processes."""
from .types import DensityTable, FddSpec, PathEnsemble, ProcessKind
from .laws import MarkovLaw, fdd_density, transition_mass, y_fdd_density
from .sampling import initial_table, marginal_table, sample_markov
from .paths import (MCEstimate, gig_density, gig_sample, hariya_yor_sample, k_functional_mc,
                    x_weighted_ensemble)
from .identities import (HY_CATALOG, goal_constant, goal_ratio, gig_mixture_check,
                         hy_identity_check, hy_vs_markov_check, k_functional_exact, laplace_y0,
                         x_density_1pt, zmc_two_way_check)
