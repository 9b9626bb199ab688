"""Reference kernels and the timing harness.

Timing protocol: a configuration is run for 1 iteration and for K+1
iterations, each averaged over ten runs, and the per-iteration mean is the
difference divided by K.  This cancels setup cost (grid construction,
parsing, JIT warm-up) out of the per-iteration figure.  Results are
reported to four significant figures and never asserted against any fixed
expectation; absolute numbers are machine-specific.

Each kernel carries a canonical operand order: output cells are
accumulated as ``c0*v0 + c1*v1 + ...`` strictly left to right in that
order.  The DSL programs used by the harness spell their bodies the same
way, which makes bit-identical output across all timed variants a testable
property despite float non-associativity.

Two reference implementations exist per indexing style: plain Python loops
(slow, used as the independent oracle in tests) and numba-compiled loops
(the timed baselines).  The "checked" variant validates every access
against the buffer bounds before loading; the "unchecked" variant relies
on the loop ranges alone.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import DimSpec, RelIndex, empty_boundary
from .runtime import list_grid, run_a
from .syntax import parse_program


@dataclass(frozen=True)
class Kernel:
    """A convolution stencil with a fixed operand order for accumulation."""

    name: str
    offsets: tuple[RelIndex, ...]  # canonical operand order
    coefficients: dict  # RelIndex -> float, keyed exactly by offsets

    def __post_init__(self):
        if set(self.coefficients) != set(self.offsets):
            raise ValueError("coefficients must be keyed exactly by the offsets")

    @property
    def access_offsets(self) -> frozenset[RelIndex]:
        return frozenset(self.offsets)

    def reach(self) -> tuple[int, int]:
        return (
            max(abs(o[0]) for o in self.offsets),
            max(abs(o[1]) for o in self.offsets),
        )


def laplace_kernel() -> Kernel:
    """Five-point kernel; operand order follows t + l + r + b - 4*c."""
    offsets = ((0, -1), (-1, 0), (1, 0), (0, 1), (0, 0))
    coeffs = {(0, -1): 1.0, (-1, 0): 1.0, (1, 0): 1.0, (0, 1): 1.0, (0, 0): -4.0}
    return Kernel("laplace", offsets, coeffs)


def log_kernel() -> Kernel:
    """5x5 Laplacian-of-Gaussian; operands accumulate in row-major order."""
    matrix = [
        [0, 0, -1, 0, 0],
        [0, -1, -2, -1, 0],
        [-1, -2, 16, -2, -1],
        [0, -1, -2, -1, 0],
        [0, 0, -1, 0, 0],
    ]
    offsets = []
    coeffs = {}
    for row in range(5):
        for col in range(5):
            value = matrix[row][col]
            if value == 0:
                continue
            off = (col - 2, row - 2)
            offsets.append(off)
            coeffs[off] = float(value)
    return Kernel("log", tuple(offsets), coeffs)


# DSL programs equivalent to the kernels above, bodies spelled in the same
# canonical operand order.

LAPLACE_PROGRAM = """\
dimensions X, Y;

stencil laplace = fun X*Y:| _   t  _ |
                          | l  @c  r |
                          | _   b  _ | -> t + l + r + b - 4.0*c;

boundary zero : Double = from (-1, -1) to (+1, +1) -> 0.0;
"""

LOG_PROGRAM = """\
dimensions X, Y;

stencil log = fun X*Y:| _  _   a  _  _ |
                      | _  b   c  d  _ |
                      | e  f  @g  h  i |
                      | _  j   k  l  _ |
                      | _  _   m  _  _ |
    -> -1.0*a + -1.0*b + -2.0*c + -1.0*d + -1.0*e + -2.0*f + 16.0*g
       + -2.0*h + -1.0*i + -1.0*j + -2.0*k + -1.0*l + -1.0*m;

boundary zero : Double = from (-2, -2) to (+2, +2) -> 0.0;
"""

_PROGRAMS = {"laplace": LAPLACE_PROGRAM, "log": LOG_PROGRAM}
_KERNELS = {"laplace": laplace_kernel, "log": log_kernel}


# ----------------------------------------------------------------------
# Pure-Python reference loops (the oracle)


def _pad_geometry(kernel: Kernel, padded: np.ndarray, extent):
    w, h = extent
    ph, pw = padded.shape
    hx, hy = (pw - w) // 2, (ph - h) // 2
    rx, ry = kernel.reach()
    if hx < rx or hy < ry:
        raise ValueError("buffer not padded to the kernel's reach")
    return w, h, pw, ph, hx, hy


def reference_kernel_checked(kernel: Kernel, padded: np.ndarray, extent) -> np.ndarray:
    """Nested loops with every access validated against the buffer bounds."""
    w, h, pw, ph, hx, hy = _pad_geometry(kernel, padded, extent)
    offs = kernel.offsets
    coeffs = [kernel.coefficients[o] for o in offs]
    out = np.empty((h, w), dtype=np.float64)
    for y in range(h):
        for x in range(w):
            acc = None
            for k, (dx, dy) in enumerate(offs):
                yy = y + hy + dy
                xx = x + hx + dx
                if not (0 <= yy < ph and 0 <= xx < pw):
                    raise IndexError(f"access ({xx}, {yy}) outside padded buffer")
                term = coeffs[k] * padded[yy, xx]
                acc = term if acc is None else acc + term
            out[y, x] = acc
    return out


def reference_kernel_unchecked(kernel: Kernel, padded: np.ndarray, extent) -> np.ndarray:
    """Identical arithmetic, loads trusted to the loop bounds."""
    w, h, pw, ph, hx, hy = _pad_geometry(kernel, padded, extent)
    offs = kernel.offsets
    coeffs = [kernel.coefficients[o] for o in offs]
    out = np.empty((h, w), dtype=np.float64)
    for y in range(h):
        for x in range(w):
            acc = coeffs[0] * padded[y + hy + offs[0][1], x + hx + offs[0][0]]
            for k in range(1, len(offs)):
                acc = acc + coeffs[k] * padded[y + hy + offs[k][1], x + hx + offs[k][0]]
            out[y, x] = acc
    return out


# ----------------------------------------------------------------------
# Compiled reference loops (the timed baselines)

_jit_cache = {}


def _jit_loops():
    """Compile the generic checked/unchecked loop pair once per process."""
    if _jit_cache:
        return _jit_cache["checked"], _jit_cache["unchecked"]
    from numba import njit

    @njit(cache=True)
    def unchecked(src, out, w, h, pw, ph, hx, hy, offx, offy, coeffs):
        for y in range(h):
            for x in range(w):
                acc = coeffs[0] * src[(y + hy + offy[0]) * pw + (x + hx + offx[0])]
                for k in range(1, coeffs.shape[0]):
                    acc = acc + coeffs[k] * src[(y + hy + offy[k]) * pw + (x + hx + offx[k])]
                out[(y + hy) * pw + (x + hx)] = acc

    @njit(cache=True)
    def checked(src, out, w, h, pw, ph, hx, hy, offx, offy, coeffs):
        for y in range(h):
            for x in range(w):
                yy = y + hy + offy[0]
                xx = x + hx + offx[0]
                if yy < 0 or yy >= ph or xx < 0 or xx >= pw:
                    raise IndexError("access outside padded buffer")
                acc = coeffs[0] * src[yy * pw + xx]
                for k in range(1, coeffs.shape[0]):
                    yy = y + hy + offy[k]
                    xx = x + hx + offx[k]
                    if yy < 0 or yy >= ph or xx < 0 or xx >= pw:
                        raise IndexError("access outside padded buffer")
                    acc = acc + coeffs[k] * src[yy * pw + xx]
                out[(y + hy) * pw + (x + hx)] = acc

    _jit_cache["checked"] = checked
    _jit_cache["unchecked"] = unchecked
    return checked, unchecked


def _kernel_arrays(kernel: Kernel):
    offx = np.array([o[0] for o in kernel.offsets], dtype=np.int64)
    offy = np.array([o[1] for o in kernel.offsets], dtype=np.int64)
    coeffs = np.array([kernel.coefficients[o] for o in kernel.offsets], dtype=np.float64)
    return offx, offy, coeffs


def iterate_reference(
    kernel: Kernel, values: np.ndarray, size: int, iterations: int, checked: bool
) -> np.ndarray:
    """Apply a compiled reference loop ``iterations`` times with a zero halo.

    Double-buffered with both halos held at zero, matching the DSL path's
    static zero boundary.  Returns the final interior, row-major.
    """
    checked_fn, unchecked_fn = _jit_loops()
    fn = checked_fn if checked else unchecked_fn
    rx, ry = kernel.reach()
    w = h = size
    pw, ph = w + 2 * rx, h + 2 * ry
    a = np.zeros(pw * ph, dtype=np.float64)
    b = np.zeros(pw * ph, dtype=np.float64)
    view = a.reshape(ph, pw)
    view[ry : ry + h, rx : rx + w] = values.reshape(h, w)
    offx, offy, coeffs = _kernel_arrays(kernel)
    for _ in range(iterations):
        fn(a, b, w, h, pw, ph, rx, ry, offx, offy, coeffs)
        a, b = b, a
    return a.reshape(ph, pw)[ry : ry + h, rx : rx + w].copy()


def iterate_dsl(kernel_name: str, values: np.ndarray, size: int, iterations: int) -> np.ndarray:
    """Parse the DSL program for a kernel, build the grid, apply repeatedly."""
    prog = parse_program(_PROGRAMS[kernel_name])
    stencil = prog.stencils[kernel_name]
    boundary = prog.boundaries["zero"]
    g = list_grid(stencil.dims, (0, 0), (size, size), values, boundary)
    for _ in range(iterations):
        g = run_a(stencil, g)
    return g.interior_values().reshape(size, size)


# ----------------------------------------------------------------------
# Harness


@dataclass
class BenchRow:
    variant: str
    t1: float
    tk1: float
    mean_per_iter: float
    ratio: float | None = None


@dataclass
class BenchReport:
    title: str
    iterations: int
    runs: int
    rows: list[BenchRow]
    outputs_identical: bool


def difference_timing(run, iterations: int, runs: int) -> tuple[float, float, float]:
    """(mean t(1), mean t(K+1), per-iteration mean) over ``runs`` repeats."""
    t1 = _mean_time(run, 1, runs)
    tk1 = _mean_time(run, iterations + 1, runs)
    return t1, tk1, (tk1 - t1) / iterations


def _mean_time(run, iters: int, runs: int) -> float:
    total = 0.0
    for _ in range(runs):
        start = time.perf_counter()
        run(iters)
        total += time.perf_counter() - start
    return total / runs


def bench_kernel(kernel_name: str, size: int, iterations: int, runs: int = 10) -> BenchReport:
    """Time the DSL path against both reference loops."""
    kernel = _KERNELS[kernel_name]()
    rng = np.random.default_rng(20120615)
    values = rng.random(size * size)

    variants = {
        "dsl": lambda i: iterate_dsl(kernel_name, values, size, i),
        "reference-checked": lambda i: iterate_reference(kernel, values, size, i, True),
        "reference-unchecked": lambda i: iterate_reference(kernel, values, size, i, False),
    }
    # warm the JIT and the parser caches outside the timed region
    outputs = {name: fn(iterations + 1) for name, fn in variants.items()}
    base = outputs["reference-unchecked"].tobytes()
    identical = all(o.tobytes() == base for o in outputs.values())

    rows = []
    for name, fn in variants.items():
        t1, tk1, mean = difference_timing(fn, iterations, runs)
        rows.append(BenchRow(name, t1, tk1, mean))
    unchecked_mean = rows[-1].mean_per_iter
    for row in rows:
        row.ratio = row.mean_per_iter / unchecked_mean if unchecked_mean > 0 else None
    return BenchReport(
        title=f"kernel={kernel_name} size={size}x{size}",
        iterations=iterations,
        runs=runs,
        rows=rows,
        outputs_identical=identical,
    )


# ----------------------------------------------------------------------
# Indexing-strategy comparison (pure Python on purpose: it compares the
# cost shape of three ways to index, not absolute speed)


def _laplace_pass_linear(src, dst, w, h, pw, hx, hy, offs, coeffs):
    # strategy a: offsets precomputed as single linear displacements
    lin = [dy * pw + dx for dx, dy in offs]
    for y in range(h):
        for x in range(w):
            base = (y + hy) * pw + (x + hx)
            acc = coeffs[0] * src[base + lin[0]]
            for k in range(1, len(offs)):
                acc = acc + coeffs[k] * src[base + lin[k]]
            dst[base] = acc


def _laplace_pass_coords(src, dst, w, h, pw, hx, hy, offs, coeffs):
    # strategy b: recompute the coordinate arithmetic on every access
    for y in range(h):
        for x in range(w):
            acc = coeffs[0] * src[(y + hy + offs[0][1]) * pw + (x + hx + offs[0][0])]
            for k in range(1, len(offs)):
                acc = acc + coeffs[k] * src[(y + hy + offs[k][1]) * pw + (x + hx + offs[k][0])]
            dst[(y + hy) * pw + (x + hx)] = acc


def _laplace_pass_seq(src2d, dst2d, w, h, hx, hy, offs, coeffs):
    # strategy c: build a fresh coordinate sequence per access
    for y in range(h):
        for x in range(w):
            idx = [y + hy + offs[0][1], x + hx + offs[0][0]]
            acc = coeffs[0] * src2d[tuple(idx)]
            for k in range(1, len(offs)):
                idx = [y + hy + offs[k][1], x + hx + offs[k][0]]
                acc = acc + coeffs[k] * src2d[tuple(idx)]
            dst2d[y + hy, x + hx] = acc


def index_strategy_bench(extent: int, iterations: int, runs: int = 10) -> BenchReport:
    """Compare linear-offset, coordinate, and sequence indexing costs."""
    kernel = laplace_kernel()
    offs = list(kernel.offsets)
    coeffs = [kernel.coefficients[o] for o in offs]
    w = h = extent
    hx = hy = 1
    pw, ph = w + 2, h + 2
    rng = np.random.default_rng(20120615)
    init = rng.random(w * h)

    def make_run(strategy):
        def go(iters):
            a = np.zeros(pw * ph, dtype=np.float64)
            b = np.zeros(pw * ph, dtype=np.float64)
            a.reshape(ph, pw)[hy : hy + h, hx : hx + w] = init.reshape(h, w)
            for _ in range(iters):
                if strategy == "seq":
                    _laplace_pass_seq(
                        a.reshape(ph, pw), b.reshape(ph, pw), w, h, hx, hy, offs, coeffs
                    )
                elif strategy == "coords":
                    _laplace_pass_coords(a, b, w, h, pw, hx, hy, offs, coeffs)
                else:
                    _laplace_pass_linear(a, b, w, h, pw, hx, hy, offs, coeffs)
                a, b = b, a
            return a.reshape(ph, pw)[hy : hy + h, hx : hx + w].copy()

        return go

    names = ("linear-offset", "coordinate-arith", "coordinate-seq")
    strategies = ("linear", "coords", "seq")
    runners = {n: make_run(s) for n, s in zip(names, strategies)}
    outputs = {n: fn(iterations + 1) for n, fn in runners.items()}
    base = outputs["linear-offset"].tobytes()
    identical = all(o.tobytes() == base for o in outputs.values())

    rows = []
    for name in names:
        t1, tk1, mean = difference_timing(runners[name], iterations, runs)
        rows.append(BenchRow(name, t1, tk1, mean))
    base_mean = rows[0].mean_per_iter
    for row in rows:
        row.ratio = row.mean_per_iter / base_mean if base_mean > 0 else None
    return BenchReport(
        title=f"index strategies, laplace {extent}x{extent}",
        iterations=iterations,
        runs=runs,
        rows=rows,
        outputs_identical=identical,
    )


def format_report(report: BenchReport) -> str:
    """Human table, four significant figures."""
    lines = [
        f"{report.title}  iterations={report.iterations}  runs={report.runs}",
        f"{'variant':<22}{'t(1) s':>12}{'t(K+1) s':>12}{'mean/iter s':>14}{'ratio':>8}",
    ]
    for row in report.rows:
        ratio = f"{row.ratio:.4g}" if row.ratio is not None else "-"
        lines.append(
            f"{row.variant:<22}{row.t1:>12.4g}{row.tk1:>12.4g}"
            f"{row.mean_per_iter:>14.4g}{ratio:>8}"
        )
    lines.append(
        "outputs bit-identical: " + ("yes" if report.outputs_identical else "NO")
    )
    return "\n".join(lines)


def report_csv(report: BenchReport) -> str:
    lines = ["variant,t1_s,tk1_s,mean_per_iter_s,ratio,outputs_identical"]
    flag = "yes" if report.outputs_identical else "no"
    for row in report.rows:
        ratio = f"{row.ratio:.6g}" if row.ratio is not None else ""
        lines.append(
            f"{row.variant},{row.t1:.6g},{row.tk1:.6g},{row.mean_per_iter:.6g},{ratio},{flag}"
        )
    return "\n".join(lines) + "\n"
