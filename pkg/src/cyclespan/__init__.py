"""cyclespan: certify expansion, then construct cycles of prescribed lengths.

The package splits into a graph core (immutable graphs, trees, cycle
validation), exhaustive oracles (cycle spectrum, exact expansion), and
three constructive pipelines that turn expansion certificates into cycles:
a window-length cycle, a fan of distinct-length cycles, and exact-length
cycles in dense well-joined graphs.
"""

from .expansion import (
    ExpansionCertificate,
    exact_expansion,
    is_beta_graph,
    refute_expansion,
    spectral_alpha,
)
from .graph import (
    CycleCertificate,
    Graph,
    Path,
    RootedTree,
    validate_cycle,
)
from .spectrum import cycle_spectrum, has_cycle_length
from .thm1 import (
    PRACTICAL_PRESETS,
    KeyTree,
    PipelineConstants,
    Thm1Trace,
    assemble_cycle,
    key_tree,
    run_thm1,
)
from .thm2 import Thm2Trace, run_thm2
from .thm3 import Thm3Params, TreeShape, double_broom, embed_tree, run_thm3

__version__ = "0.1.0"

__all__ = [
    "CycleCertificate",
    "ExpansionCertificate",
    "Graph",
    "KeyTree",
    "PRACTICAL_PRESETS",
    "Path",
    "PipelineConstants",
    "RootedTree",
    "Thm1Trace",
    "Thm2Trace",
    "Thm3Params",
    "TreeShape",
    "assemble_cycle",
    "cycle_spectrum",
    "double_broom",
    "embed_tree",
    "exact_expansion",
    "has_cycle_length",
    "is_beta_graph",
    "key_tree",
    "refute_expansion",
    "run_thm1",
    "run_thm2",
    "run_thm3",
    "spectral_alpha",
    "validate_cycle",
    "__version__",
]
