"""ypnosc: a stencil DSL with statically verified bounds-check-free indexing.

Parse a program, check a stencil against a boundary, build a grid, apply::

    from ypnosc import parse_program, check_application, list_grid, run_a

    prog = parse_program(source)
    stencil = prog.stencils["laplace"]
    boundary = prog.boundaries["zero"]
    assert check_application(stencil, boundary).ok
    grid = list_grid(stencil.dims, (0, 0), (w, h), values, boundary)
    grid = run_a(stencil, grid)
"""

from .core import (
    BoundaryClause,
    BoundarySpec,
    DimSpec,
    Dynamism,
    Rel,
    RegionDescriptor,
    Wild,
    abs_to_rel,
    empty_boundary,
    halo_bounds,
    join_dynamism,
    pred,
)
from .errors import (
    OutOfBoundsAccessError,
    ParseError,
    SafetyViolationError,
    YpnoscError,
)
from .runtime import (
    Grid,
    enumerate_region_cells,
    grid_from_pairs,
    index_abs_checked,
    index_rel,
    list_grid,
    list_grid_no_boundary,
    materialize_boundary,
    run,
    run_a,
    size_of,
)
from .safety import SafetyReport, check_application, coverage_oracle, in_boundary, safe
from .syntax import (
    Program,
    StencilDef,
    desugar_range_form,
    format_program,
    parse_boundary_def,
    parse_program,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryClause",
    "BoundarySpec",
    "DimSpec",
    "Dynamism",
    "Grid",
    "OutOfBoundsAccessError",
    "ParseError",
    "Program",
    "Rel",
    "RegionDescriptor",
    "SafetyReport",
    "SafetyViolationError",
    "StencilDef",
    "Wild",
    "YpnoscError",
    "abs_to_rel",
    "check_application",
    "coverage_oracle",
    "desugar_range_form",
    "empty_boundary",
    "enumerate_region_cells",
    "format_program",
    "grid_from_pairs",
    "halo_bounds",
    "in_boundary",
    "index_abs_checked",
    "index_rel",
    "join_dynamism",
    "list_grid",
    "list_grid_no_boundary",
    "materialize_boundary",
    "parse_boundary_def",
    "parse_program",
    "pred",
    "run",
    "run_a",
    "safe",
    "size_of",
]
