"""Exact solvers for Locating-Dominating Set and Test Cover."""

__version__ = "0.1.0"

from .errors import BudgetError, IdsolveError, InputError, RefusalError
from .graph import (
    Graph,
    Partition,
    Solution,
    brute_force_lds,
    induced_partition,
    is_locating_dominating,
    meet,
    parse_graph,
    format_graph,
    read_graph,
    write_graph,
)
from .lds import (
    minimum_lds,
    solve_lds_distclique,
    solve_lds_nd,
    solve_lds_twincover,
    solve_lds_vc,
)
from .testcover import SetSystem, brute_force_tc, minimum_tc, solve_tc
from .fes import kernelize_fes
from .reductions import RBDSInstance, preprocess_rbds, rbds_to_lds, rbds_to_tc

__all__ = [
    "BudgetError",
    "Graph",
    "IdsolveError",
    "InputError",
    "Partition",
    "RBDSInstance",
    "RefusalError",
    "SetSystem",
    "Solution",
    "brute_force_lds",
    "brute_force_tc",
    "format_graph",
    "induced_partition",
    "is_locating_dominating",
    "kernelize_fes",
    "meet",
    "minimum_lds",
    "minimum_tc",
    "parse_graph",
    "preprocess_rbds",
    "rbds_to_lds",
    "rbds_to_tc",
    "read_graph",
    "solve_lds_distclique",
    "solve_lds_nd",
    "solve_lds_twincover",
    "solve_lds_vc",
    "solve_tc",
    "write_graph",
]
