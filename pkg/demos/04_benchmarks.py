#!/usr/bin/env python3
# The benchmark harness: the DSL path against checked and unchecked
# reference loops, plus a comparison of three indexing strategies.
#
# Timing method: every configuration is run for 1 iteration and for K+1
# iterations (ten runs each); the per-iteration mean is the difference
# divided by K, which cancels one-off setup cost. Absolute numbers are
# machine-specific and only the methodology is fixed.

from ypnosc.bench import bench_kernel, format_report, index_strategy_bench

# Keep the demo quick; `ypnosc bench laplace 512 100` reproduces the
# full-size experiment from the command line.
print(format_report(bench_kernel("laplace", 64, 10, runs=3)))
print()
print(format_report(bench_kernel("log", 64, 10, runs=3)))

# All timed variants must agree bit-for-bit: they share one canonical
# operand order per kernel, so any disagreement is a real bug, not float
# reassociation.

# Three ways to index the same flat buffer: precomputed linear offsets
# (what the runtime does after the safety check), per-access coordinate
# arithmetic, and a freshly allocated coordinate sequence per access.
# The gap between the last and the first is the cost the single-integer
# offset representation avoids.
print()
print(format_report(index_strategy_bench(32, 3, runs=3)))
