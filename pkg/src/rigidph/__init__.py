"""Persistent homology with terminal-simplex attribution and rigidity certificates."""

from .core import (
    Filtration,
    Simplex,
    SimplicialComplex,
    build_complex,
    injectivity_radius,
    is_generic,
    is_order_realizable,
    lower_set,
    permute_block,
    realizable_orders,
    switch_pair,
    upper_set,
    validate_filtration,
    witness_filtration,
)
from .persistence import (
    INF,
    Bar,
    Barcode,
    Chain,
    ClassLifespan,
    FieldSpec,
    ReducedFiltration,
    barcode,
    barcodes,
    bottleneck_distance,
    boundary_chain,
    class_lifespan,
    classify_simplex,
    reduce,
    terminal_simplex,
)
from .rigidity import (
    BarRigidityVerdict,
    BreakingReport,
    RigidityCertificate,
    SigmaResult,
    bar_rigidity_check,
    breaking_analysis,
    matched_bar,
    r_bounds,
    rigidity_radius,
    rigidity_thresholds,
    sigma_epsilon,
)

__version__ = "0.1.0"
