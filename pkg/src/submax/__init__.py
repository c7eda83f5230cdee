"""Constrained monotone submodular maximization with counted oracles.

Algorithms: greedy and lazy greedy, decreasing-threshold variants with an
adaptive optimum-estimation phase, backtracking threshold for p-system plus
knapsack constraints, a single-pass knapsack threshold scheme, and a
curvature-aware continuous greedy over matroids with exact LP rounding.
"""

from .backtracking import BtResult, backtrack_rebuild, bt_run, classify_big_small
from .cardinality import AdtResult, adt, adt_estimate_opt, greedy, lazy_greedy, \
    threshold_greedy_bv
from .constraints import (ConstraintSystem, GraphicMatroid, IndependenceOracle,
                          KnapsackSystem, MatroidIntersection, PartitionMatroid,
                          UniformMatroid)
from .continuous_greedy import CgResult, curvature_matroid_run, estimate_marginals
from .curvature import (DecomposeResult, decompose_g_h, improved_ratio_certificate,
                        restricted_curvature, total_curvature)
from .exact import ExactReport, brute_force_opt, ratio
from .instances import Instance, load_path, save_path
from .kernels import HAVE_COMPILED, implementation_name
from .knapsack import KnapResult, bootstrap_lambda, knapsack_run
from .oracles import (InstanceFormatError, ModularShiftedOracle, SetFunction,
                      ValueOracle, coverage_function, facility_function,
                      mix_function, modular_function, self_check_submodular)
from .polytope import FractionalSolution, lp_solve, swap_rounding
from .report import CSV_COLUMNS, RunReport

__version__ = "0.1.0"
