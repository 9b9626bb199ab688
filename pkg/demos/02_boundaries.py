#!/usr/bin/env python3
# Boundary definitions: the range shorthand, per-side values, and dynamic
# (grid-parameterised) clauses for wrapping and reflecting edges.

import numpy as np

from ypnosc import parse_boundary_def, parse_program, list_grid, run_a
from ypnosc.syntax import format_boundary

# The range form expands into one clause per region. Descriptor components:
# -n / +n sit n cells outside the lower/upper extent, *v spans the extent.
ring = parse_boundary_def("boundary ring : Double = from (-1, -1) to (+1, +1) -> 0.0;")
print("a one-deep ring is", len(ring.clauses), "regions:")
print(format_boundary("ring", ring))

# Different values per side: the left face (three regions) reads 1.0, the
# right face 2.0, the remaining edges 0.0.
sides = parse_boundary_def(
    "boundary sides : Double ="
    " from (-1, -1) to (-1, +1) -> 1.0"
    " from (+1, -1) to (+1, +1) -> 2.0"
    " (*i, -1) -> 0.0"
    " (*i, +1) -> 0.0;"
)
print("\nper-side boundary:")
print(format_boundary("sides", sides))

# Dynamic clauses take the grid itself and may read it with the checked
# absolute indexing operator !!!. Here: the top edge reflects row 0, left
# and right wrap around, the bottom is a constant band two cells deep.
SOURCE = """
dimensions X, Y;

stencil blur = fun X*Y:| _   t  _ |
                       | l  @c  r |
                       | _   b  _ | -> (t + l + r + b + c) / 5.0;

boundary wrapreflect : Double =
    (*i, -1) g -> g!!!(i, 0)
    (-1, *j) g -> g!!!(fst (size g) - 1, j)
    (+1, *j) g -> g!!!(0, j)
    from (-1, +1) to (+1, +2) -> 0.0
    (-1, -1) g -> g!!!(0, 0)
    (+1, -1) g -> g!!!(fst (size g) - 1, 0);
"""
prog = parse_program(SOURCE)
wrap = prog.boundaries["wrapreflect"]
print("\nwrap/reflect dynamism:", wrap.dynamism.name)
print("halo bounds:", wrap.halo_lower, "to", wrap.halo_upper, "(two-deep at the top)")

vals = np.arange(16.0)
g = list_grid(prog.stencils["blur"].dims, (0, 0), (4, 4), vals, wrap)

def column(grid, x):
    return [float(grid.at_abs((x, j))) for j in range(4)]

print("\ninterior column 0:", column(g, 0))
print("wrapped halo x=4: ", column(g, 4), "(same values)")

# After application the dynamic clauses are recomputed against the NEW
# interior, keeping the wrap consistent.
g2 = run_a(prog.stencils["blur"], g)
print("\nnew interior column 0:", column(g2, 0))
print("new wrapped halo x=4: ", column(g2, 4))
