"""Polyhedral strips, their prox maps, and boundary-flattening pipelines."""

from ._kolmo import (
    BudgetError,
    CoverResult,
    GenStrip,
    InvariantError,
    KolmoError,
    ParseError,
    PipelineResult,
    PolyhedralFunc,
    PreconditionError,
    ProxResult,
    Tolerances,
    __version__,
    ball_cover,
    dc_graph_cover,
    hull_cover,
    merge,
    merge_all,
    prox,
    prox_oracle,
    prune,
    radial_cover,
    render_svg,
    run_pipeline,
    subgradient_certificate,
    surface_cover,
    width_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
