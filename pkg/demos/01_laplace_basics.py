#!/usr/bin/env python3
# A first walk through the toolkit: write a stencil program, verify that
# its boundary covers every relative access, build a grid, and apply it.

import numpy as np

from ypnosc import check_application, list_grid, parse_program, run_a, size_of

# The program text. A stencil binds variables to cells around the cursor
# (the @ mark); the boundary gives every cell one step outside the extent
# a value, here a constant 0.0 ring produced by the range form.
SOURCE = """
dimensions X, Y;

stencil laplace = fun X*Y:| _   t  _ |
                          | l  @c  r |
                          | _   b  _ | -> t + l + r + b - 4.0*c;

boundary zero : Double = from (-1, -1) to (+1, +1) -> 0.0;
"""

prog = parse_program(SOURCE)
laplace = prog.stencils["laplace"]
zero = prog.boundaries["zero"]

print("cursor-relative bindings:", laplace.bindings)
print("boundary regions:", sorted(zero.region_set))

# The static check: every offset the pattern can reach must be covered by
# the boundary, step by step back to the cursor. Only checked programs run.
report = check_application(laplace, zero)
print("checker verdict:", "ok" if report.ok else report.violations)

# Build an 8x8 grid. The value list fills the interior with the first
# dimension (X) varying fastest; the halo is materialized around it.
rng = np.random.default_rng(0)
grid = list_grid(laplace.dims, (0, 0), (8, 8), rng.random(64), zero)
print("grid size:", size_of(grid), "storage with halo:", grid.storage_shape())

# Apply the stencil at every interior position. Because the check passed,
# the interior loop indexes with plain precomputed offsets, no bounds tests.
result = run_a(laplace, grid)
print("interior after one step:")
print(np.array2string(result.interior_values().reshape(8, 8), precision=3))

# The halo is part of the result too; a static boundary carries over as-is.
print("halo corner still:", result.at_abs((-1, -1)))

# Iterating is just repeated application; diffusion flattens the field.
g = grid
for _ in range(200):
    g = run_a(laplace, g)
print("after 200 steps, interior range:",
      float(g.interior_values().min()), "..", float(g.interior_values().max()))
