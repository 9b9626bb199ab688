#!/usr/bin/env python3
# What the static checker actually guarantees, and why membership of a
# region set alone would be unsound.

from ypnosc import check_application, coverage_oracle, parse_program, safe

SOURCE = """
dimensions X, Y;

stencil laplace = fun X*Y:| _   t  _ |
                          | l  @c  r |
                          | _   b  _ | -> t + l + r + b - 4.0*c;

stencil log = fun X*Y:| _  _   a  _  _ |
                      | _  b   c  d  _ |
                      | e  f  @g  h  i |
                      | _  j   k  l  _ |
                      | _  _   m  _  _ |
    -> -1.0*a + -1.0*b + -2.0*c + -1.0*d + -1.0*e + -2.0*f + 16.0*g
       + -2.0*h + -1.0*i + -1.0*j + -2.0*k + -1.0*l + -1.0*m;

boundary one_deep : Double = from (-1, -1) to (+1, +1) -> 0.0;
boundary two_deep : Double = from (-2, -2) to (+2, +2) -> 0.0;
"""
prog = parse_program(SOURCE)
laplace, log = prog.stencils["laplace"], prog.stencils["log"]
one, two = prog.boundaries["one_deep"], prog.boundaries["two_deep"]

# The five-point stencil fits inside a one-deep ring.
print("laplace vs one-deep:", check_application(laplace, one).ok)

# The 5x5 kernel reaches two cells out, so one-deep coverage fails; the
# report names each unsafe offset and one region it is missing.
bad = check_application(log, one)
print("log vs one-deep:", bad.ok)
for offset, missing in bad.violations:
    print("  unsafe offset", offset, "needs region", missing)
print("log vs two-deep:", check_application(log, two).ok)

# A corner access is NOT safe just because the corner region exists: from a
# cursor one row short of the corner, (+1,+1) lands above the right edge,
# which only the (+1,*j) region defines. The recurrence demands the full
# chain of regions back toward the cursor.
corner_only = frozenset({(1, 1)})
with_edges = frozenset({(1, 1), (1, 0), (0, 1)})
print("\nsafe((+1,+1)) with corner region only:", safe((1, 1), corner_only))
print("safe((+1,+1)) with corner and both edges:", safe((1, 1), with_edges))

# The brute-force oracle agrees: materialize the regions on a real extent
# and enumerate every cursor/access pair.
print("oracle, corner only: ",
      coverage_oracle({(1, 1)}, corner_only, (0, 0), (8, 8)))
print("oracle, with edges:  ",
      coverage_oracle({(1, 1)}, with_edges, (0, 0), (8, 8)))
