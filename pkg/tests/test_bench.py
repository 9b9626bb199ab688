import numpy as np
import pytest

from ypnosc.bench import (
    BenchReport,
    bench_kernel,
    difference_timing,
    format_report,
    index_strategy_bench,
    iterate_dsl,
    iterate_reference,
    laplace_kernel,
    log_kernel,
    reference_kernel_checked,
    reference_kernel_unchecked,
    report_csv,
)

LOG_MATRIX = [
    [0, 0, -1, 0, 0],
    [0, -1, -2, -1, 0],
    [-1, -2, 16, -2, -1],
    [0, -1, -2, -1, 0],
    [0, 0, -1, 0, 0],
]


class TestKernels:
    def test_laplace_center_coefficient(self):
        assert laplace_kernel().coefficients[(0, 0)] == -4.0

    def test_log_center_and_edge(self):
        k = log_kernel()
        assert k.coefficients[(0, 0)] == 16.0
        assert k.coefficients[(-2, 0)] == -1.0
        assert k.coefficients[(0, 1)] == -2.0 and k.coefficients[(0, -1)] == -2.0

    def test_log_matches_matrix_exactly(self):
        k = log_kernel()
        for row in range(5):
            for col in range(5):
                off = (col - 2, row - 2)
                want = LOG_MATRIX[row][col]
                if want == 0:
                    assert off not in k.coefficients
                else:
                    assert k.coefficients[off] == float(want)

    def test_log_coefficients_sum_to_zero(self):
        assert sum(log_kernel().coefficients.values()) == 0.0

    def test_kernel_validates_offsets(self):
        from ypnosc.bench import Kernel

        with pytest.raises(ValueError):
            Kernel("bad", ((0, 0),), {(1, 0): 1.0})


def _padded(values, size, reach):
    p = np.zeros((size + 2 * reach, size + 2 * reach))
    p[reach : reach + size, reach : reach + size] = values.reshape(size, size)
    return p


class TestReferenceKernels:
    def test_laplace_on_constant_field(self):
        k = laplace_kernel()
        p = np.ones((18, 18))
        out = reference_kernel_checked(k, p, (16, 16))
        assert np.all(out == 0.0)

    def test_log_on_constant_field(self):
        # zero-sum coefficients annihilate a field that is constant
        # across the padding too
        k = log_kernel()
        p = np.ones((20, 20))
        out = reference_kernel_checked(k, p, (16, 16))
        assert np.all(out == 0.0)

    def test_reference_matches_hand_checked_3x3(self):
        # same worked example the runtime tests pin: zero halo around 1..9
        k = laplace_kernel()
        p = np.zeros((5, 5))
        p[1:4, 1:4] = np.arange(1.0, 10.0).reshape(3, 3)
        out = reference_kernel_checked(k, p, (3, 3))
        assert out[1, 1] == 0.0
        assert out[0, 0] == 2.0

    def test_checked_equals_unchecked_on_1000_random_inputs(self):
        k = laplace_kernel()
        rng = np.random.default_rng(99)
        for _ in range(1000):
            p = _padded(rng.random(16 * 16), 16, 1)
            c = reference_kernel_checked(k, p, (16, 16))
            u = reference_kernel_unchecked(k, p, (16, 16))
            assert c.tobytes() == u.tobytes()

    def test_checked_equals_unchecked_log(self):
        k = log_kernel()
        rng = np.random.default_rng(100)
        for _ in range(200):
            p = _padded(rng.random(16 * 16), 16, 2)
            c = reference_kernel_checked(k, p, (16, 16))
            u = reference_kernel_unchecked(k, p, (16, 16))
            assert c.tobytes() == u.tobytes()

    def test_underpadded_buffer_rejected(self):
        with pytest.raises(ValueError):
            reference_kernel_checked(log_kernel(), np.zeros((18, 18)), (16, 16))


class TestCrossImplementationEquality:
    @pytest.mark.parametrize("name,factory", [("laplace", laplace_kernel), ("log", log_kernel)])
    def test_jit_matches_pure(self, name, factory):
        kernel = factory()
        rng = np.random.default_rng(11)
        vals = rng.random(16 * 16)
        jit_out = iterate_reference(kernel, vals, 16, 1, checked=True)
        jit_un = iterate_reference(kernel, vals, 16, 1, checked=False)
        pure = reference_kernel_checked(kernel, _padded(vals, 16, kernel.reach()[0]), (16, 16))
        assert jit_out.tobytes() == pure.tobytes() == jit_un.tobytes()

    @pytest.mark.parametrize("name,factory", [("laplace", laplace_kernel), ("log", log_kernel)])
    def test_dsl_matches_references(self, name, factory):
        kernel = factory()
        rng = np.random.default_rng(12)
        vals = rng.random(24 * 24)
        dsl = iterate_dsl(name, vals, 24, 3)
        ref = iterate_reference(kernel, vals, 24, 3, checked=True)
        assert dsl.tobytes() == ref.tobytes()


class TestHarness:
    def test_bench_smoke_table(self):
        report = bench_kernel("laplace", 8, 1, runs=2)
        assert report.outputs_identical
        names = [r.variant for r in report.rows]
        assert names == ["dsl", "reference-checked", "reference-unchecked"]
        text = format_report(report)
        assert "outputs bit-identical: yes" in text
        assert "mean/iter" in text

    def test_difference_timing_formula(self):
        # a run that costs exactly `iters` fake seconds gives mean 1 per iter
        clock = []

        def fake_run(iters):
            import time

            start = time.perf_counter()
            while time.perf_counter() - start < iters * 0.001:
                pass
            clock.append(iters)

        t1, tk1, mean = difference_timing(fake_run, 4, runs=2)
        assert clock == [1, 1, 5, 5]
        assert mean == pytest.approx((tk1 - t1) / 4)

    def test_csv_shape(self):
        report = bench_kernel("laplace", 8, 1, runs=1)
        csv = report_csv(report)
        lines = csv.strip().split("\n")
        assert lines[0] == "variant,t1_s,tk1_s,mean_per_iter_s,ratio,outputs_identical"
        assert len(lines) == 4

    def test_index_strategy_bench(self):
        report = index_strategy_bench(8, 1, runs=2)
        assert isinstance(report, BenchReport)
        assert report.outputs_identical
        assert [r.variant for r in report.rows] == [
            "linear-offset",
            "coordinate-arith",
            "coordinate-seq",
        ]
        assert len(format_report(report).splitlines()) == 6
