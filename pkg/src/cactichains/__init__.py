"""Cellular chains of normalized cacti acting on Hochschild cochains.

The package has three layers:

* combinatorics: ribbon graphs (`graphs`), spine-decorated planar planted
  bipartite trees (`trees`), the cellular chain complex (`chains`) and the
  chain-level operad structure (`operad`);
* algebra: Frobenius algebras over exact rationals (`frobenius`) and
  normalized Hochschild cochains (`hochschild`);
* the bridge: operadic correlation functions (`action`) evaluating tree
  cells on cochains, with the verification suites (`suites`) and a CLI
  (`cli`) on top.

Everything is exact: integer chain coefficients, `fractions.Fraction`
tensor entries, no floats.
"""

from .trees import (
    DecoratedTree,
    WhiteVertex,
    BlackVertex,
    parse,
    serialize,
    enumerate_cells,
    realize,
    weight_sign,
    point_cell,
    bv_cell,
    product_tree,
    cyclic_brace_tree,
)
from .chains import ChainElement, degree, angle_collapse, spine_flip, boundary, boundary_tree
from .operad import compose, relabel, gamma, foliage_substitute, CompositionTable
from .frobenius import FrobeniusAlgebra, FrobeniusError, make_algebra, builtin, casimir
from .hochschild import (
    Cochain,
    dualize,
    undualize,
    hdiff,
    cup,
    brace,
    bracket,
    cdelta,
    cohomology,
    random_cochain,
)
from .action import correlate, act, act_chain, CorrelatorAssignment
from .graphs import RibbonGraph, cycles, genus, contract_edge, dual_tree, to_ribbon_graph

__all__ = [
    "DecoratedTree",
    "WhiteVertex",
    "BlackVertex",
    "parse",
    "serialize",
    "enumerate_cells",
    "realize",
    "weight_sign",
    "point_cell",
    "bv_cell",
    "product_tree",
    "cyclic_brace_tree",
    "ChainElement",
    "degree",
    "angle_collapse",
    "spine_flip",
    "boundary",
    "boundary_tree",
    "compose",
    "relabel",
    "gamma",
    "foliage_substitute",
    "CompositionTable",
    "FrobeniusAlgebra",
    "FrobeniusError",
    "make_algebra",
    "builtin",
    "casimir",
    "Cochain",
    "dualize",
    "undualize",
    "hdiff",
    "cup",
    "brace",
    "bracket",
    "cdelta",
    "cohomology",
    "random_cochain",
    "correlate",
    "act",
    "act_chain",
    "CorrelatorAssignment",
    "RibbonGraph",
    "cycles",
    "genus",
    "contract_edge",
    "dual_tree",
    "to_ribbon_graph",
]
