import math

import numpy as np
import pytest

from empcirc.errors import ContractError, NumericalError, SingularMatrixError
from empcirc.numerics import (MinimizerConfig, dft, eigenvalues_small, idft,
                              lu_solve, nelder_mead)


class TestLuSolve:
    def test_identity(self):
        b = np.array([1 + 2j, -3j, 0.5])
        assert np.allclose(lu_solve(np.eye(3), b), b)

    def test_diagonal(self):
        x = lu_solve(np.array([[2.0, 0.0], [0.0, 4.0]]), np.array([2.0, 8.0]))
        assert np.allclose(x, [1.0, 2.0])

    def test_forward_multiply_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
            b = a @ x
            sol = lu_solve(a, b)
            assert np.linalg.norm(sol - x) <= 1e-10 * np.linalg.norm(x)
            assert np.linalg.norm(a @ sol - b) <= 1e-10 * np.linalg.norm(b)

    def test_singular(self):
        with pytest.raises(SingularMatrixError):
            lu_solve(np.zeros((2, 2)), np.array([1.0, 0.0]))

    def test_dimension_mismatch(self):
        with pytest.raises(ContractError):
            lu_solve(np.eye(3), np.array([1.0, 2.0]))


class TestEigenvaluesSmall:
    def test_diagonal(self):
        diag = np.array([1.0, 2.0 + 1j, -3.0, 0.5j])
        vals = sorted(eigenvalues_small(np.diag(diag)), key=lambda z: (z.real, z.imag))
        expect = sorted(diag, key=lambda z: (z.real, z.imag))
        assert np.allclose(vals, expect, atol=1e-10)

    def test_cyclic_shift(self):
        a = np.roll(np.eye(4), 1, axis=1)
        vals = sorted(eigenvalues_small(a), key=lambda z: (z.real, z.imag))
        expect = sorted([1, 1j, -1, -1j], key=lambda z: (z.real, z.imag))
        assert np.allclose(vals, expect, atol=1e-10)

    def test_charpoly_residual(self):
        rng = np.random.default_rng(1)
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        coeffs = np.poly(a)  # independent: numpy's char poly from QR eigvals
        norm = np.linalg.norm(coeffs)
        for lam in eigenvalues_small(a):
            assert abs(np.polyval(coeffs, lam)) < 1e-8 * norm

    def test_matches_lapack(self):
        rng = np.random.default_rng(2)
        a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        mine = sorted(eigenvalues_small(a), key=lambda z: (z.real, z.imag))
        ref = sorted(np.linalg.eigvals(a), key=lambda z: (z.real, z.imag))
        assert np.allclose(mine, ref, atol=1e-8)

    def test_trace_determinant_consistency(self):
        rng = np.random.default_rng(3)
        for _ in range(1000):
            n = int(rng.integers(2, 6))
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            vals = eigenvalues_small(a)
            tr, det = np.trace(a), np.linalg.det(a)
            assert abs(np.sum(vals) - tr) <= 1e-8 * max(abs(tr), 1.0)
            assert abs(np.prod(vals) - det) <= 1e-8 * max(abs(det), 1.0)

    def test_size_limit(self):
        with pytest.raises(ContractError):
            eigenvalues_small(np.eye(9))


class TestDft:
    def test_impulse(self):
        assert np.allclose(dft([1, 0, 0, 0]), np.ones(4))

    def test_single_tone(self):
        n, k = 16, 3
        x = np.exp(2j * np.pi * k * np.arange(n) / n)
        spec = dft(x)
        assert abs(spec[k] - n) < 1e-9
        spec[k] = 0
        assert np.max(np.abs(spec)) < 1e-9

    def test_round_trip_and_parseval(self):
        rng = np.random.default_rng(4)
        x = rng.standard_normal(1024) + 1j * rng.standard_normal(1024)
        spec = dft(x)
        assert np.linalg.norm(idft(spec) - x) <= 1e-10 * np.linalg.norm(x)
        ex = np.sum(np.abs(x) ** 2)
        ek = np.sum(np.abs(spec) ** 2) / 1024
        assert abs(ex - ek) <= 1e-9 * ex

    def test_linearity(self):
        rng = np.random.default_rng(5)
        x = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        y = rng.standard_normal(256) + 1j * rng.standard_normal(256)
        a, b = 1.5 - 0.5j, -2.0 + 1j
        lhs = dft(a * x + b * y)
        rhs = a * dft(x) + b * dft(y)
        assert np.linalg.norm(lhs - rhs) <= 1e-10 * np.linalg.norm(rhs)

    def test_non_power_of_two(self):
        with pytest.raises(ContractError):
            dft(np.zeros(12))


class TestNelderMead:
    def test_parabola(self):
        x, f, _ = nelder_mead(lambda v: (v[0] - 3.0) ** 2, np.array([0.0]))
        assert abs(x[0] - 3.0) < 1e-6

    def test_rosenbrock(self):
        def rosen(v):
            return 100.0 * (v[1] - v[0] ** 2) ** 2 + (1.0 - v[0]) ** 2

        x, f, _ = nelder_mead(rosen, np.array([-1.2, 1.0]))
        assert np.allclose(x, [1.0, 1.0], atol=1e-5)

    def test_quadratic_bowl(self):
        rng = np.random.default_rng(6)
        m = rng.standard_normal((3, 3))
        hess = m @ m.T + 3 * np.eye(3)
        center = rng.standard_normal(3)

        def bowl(v):
            d = v - center
            return float(d @ hess @ d)

        x, _, _ = nelder_mead(bowl, np.zeros(3))
        assert np.allclose(x, center, atol=1e-6)

    def test_nan_rejected(self):
        def holey(v):
            if abs(v[0]) > 2.5:
                return math.nan
            return (v[0] - 2.0) ** 2

        x, _, _ = nelder_mead(holey, np.array([0.0]))
        assert abs(x[0] - 2.0) < 1e-6

    def test_nonfinite_start(self):
        with pytest.raises(NumericalError):
            nelder_mead(lambda v: math.nan, np.array([0.0]))

    def test_deterministic(self):
        def rosen(v):
            return 100.0 * (v[1] - v[0] ** 2) ** 2 + (1.0 - v[0]) ** 2

        cfg = MinimizerConfig(seed=42)
        r1 = nelder_mead(rosen, np.array([-1.2, 1.0]), cfg)
        r2 = nelder_mead(rosen, np.array([-1.2, 1.0]), cfg)
        assert np.array_equal(r1[0], r2[0]) and r1[1] == r2[1] and r1[2] == r2[2]

    def test_config_validation(self):
        with pytest.raises(ContractError):
            MinimizerConfig(max_evaluations=0)
        with pytest.raises(ContractError):
            MinimizerConfig(simplex_tolerance=0.0)
