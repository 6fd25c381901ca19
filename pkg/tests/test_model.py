import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kerneldenoise.model import (
    EdgeBasis,
    RidgeFunction,
    SemiParametricModel,
    basis_columns,
    build_design,
    default_basis,
    design_matrix,
    model_eval,
    model_from_text,
    model_to_text,
    patch_grid,
    ridge_eval,
    rkhs_norm_sq,
)
from kerneldenoise.numerics import KernelParams, build_gram, erf

from oracles import erf_quadrature, naive_model_eval, quad_double_loop


def random_model(rng, n=3, levels=1, sigma=0.35, sharpness=15.0):
    basis = default_basis(levels, sharpness)
    return SemiParametricModel(
        alpha=rng.normal(size=n * n),
        beta=rng.normal(size=basis.k),
        h=rng.normal(size=4),
        kernel=KernelParams(sigma),
        grid=patch_grid(n),
        basis=basis,
    )


class TestRidgeFunction:
    def test_degenerate_rejected(self):
        with pytest.raises(ValueError):
            RidgeFunction(0.0, 0.0, 1.0)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            RidgeFunction(math.inf, 1.0, 0.0)

    def test_eval_at_origin(self):
        assert ridge_eval(RidgeFunction(1.0, 1.0, 0.0), 0.0, 0.0) == 0.0

    def test_zero_on_ridge_line(self):
        r = RidgeFunction(10.0, 0.0, -5.0)
        for y in (-3.0, 0.0, 0.77):
            assert ridge_eval(r, 0.5, y) == 0.0

    def test_against_quadrature_at_one(self):
        r = RidgeFunction(1.0, 0.0, 0.0)
        assert ridge_eval(r, 1.0, 0.0) == pytest.approx(0.84270079, abs=1.5e-7)
        assert ridge_eval(r, 1.0, 0.0) == pytest.approx(erf_quadrature(1.0), abs=1.5e-7)


class TestDefaultBasis:
    def test_levels_one_is_four_centered_ridges(self):
        basis = default_basis(1, 15.0)
        assert basis.k == 4
        for r in basis.ridges:
            # every level-1 ridge line passes through the patch center
            assert abs(ridge_eval(r, 0.5, 0.5)) < 1e-9

    def test_levels_three_axis_offsets(self):
        basis = default_basis(3, 20.0)
        assert basis.k == 12
        horizontal = basis.ridges[0:3]  # orientation (1, 0) comes first
        offsets = sorted(-r.c / r.a for r in horizontal)
        assert offsets == pytest.approx([0.25, 0.5, 0.75], abs=1e-12)
        vertical = basis.ridges[6:9]  # orientation (0, 1)
        assert sorted(-r.c / r.b for r in vertical) == pytest.approx(
            [0.25, 0.5, 0.75], abs=1e-12
        )

    def test_no_degenerate_ridges(self):
        for levels in (1, 2, 3, 5):
            for r in default_basis(levels, 7.0).ridges:
                assert (r.a, r.b) != (0.0, 0.0)

    def test_deterministic_construction(self):
        assert default_basis(3, 15.0) == default_basis(3, 15.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            default_basis(0, 15.0)
        with pytest.raises(ValueError):
            default_basis(3, 0.0)

    def test_ridges_bounded_on_unit_square(self):
        basis = default_basis(3, 15.0)
        xs, ys = np.meshgrid(np.linspace(0, 1, 21), np.linspace(0, 1, 21))
        for r in basis.ridges:
            vals = ridge_eval(r, xs.ravel(), ys.ravel())
            assert np.all(vals > -1.0) and np.all(vals < 1.0)

    def test_every_ridge_crosses_unit_square(self):
        # the sign of a*x+b*y+c changes over the square, i.e. the step
        # actually lands inside the patch
        for levels in (1, 2, 3, 4):
            for r in default_basis(levels, 15.0).ridges:
                corners = [(0, 0), (1, 0), (0, 1), (1, 1)]
                signs = {np.sign(r.a * x + r.b * y + r.c) for x, y in corners}
                assert 1.0 in signs and -1.0 in signs


class TestPatchGrid:
    def test_n3_exact_points(self):
        g = patch_grid(3)
        assert g.shape == (9, 2)
        # row-major: x along columns, y along rows
        assert np.array_equal(g[0], [0.0, 0.0])
        assert np.array_equal(g[1], [0.5, 0.0])
        assert np.array_equal(g[3], [0.0, 0.5])
        assert np.array_equal(g[8], [1.0, 1.0])

    def test_n1_degenerate(self):
        assert np.array_equal(patch_grid(1), [[0.0, 0.0]])

    def test_range_and_count(self):
        for n in (2, 5, 7):
            g = patch_grid(n)
            assert g.shape == (n * n, 2)
            assert g.min() == 0.0 and g.max() == 1.0

    def test_invalid(self):
        with pytest.raises(ValueError):
            patch_grid(0)


class TestModelEval:
    def test_all_zero_coeffs(self, rng):
        m = random_model(rng)
        m.alpha[:] = 0.0
        m.beta[:] = 0.0
        m.h[:] = 0.0
        for _ in range(5):
            x, y = rng.uniform(0, 1, size=2)
            assert model_eval(m, x, y) == 0.0

    def test_constant_term_only(self, rng):
        m = random_model(rng)
        m.alpha[:] = 0.0
        m.beta[:] = 0.0
        m.h[:] = [128.0, 0.0, 0.0, 0.0]
        for _ in range(5):
            x, y = rng.uniform(0, 1, size=2)
            assert model_eval(m, x, y) == 128.0

    def test_single_alpha_at_grid_point(self, rng):
        m = random_model(rng)
        m.alpha[:] = 0.0
        m.beta[:] = 0.0
        m.h[:] = 0.0
        m.alpha[4] = 2.0  # center point of the 3x3 grid
        gx, gy = m.grid[4]
        assert model_eval(m, gx, gy) == pytest.approx(2.0, rel=1e-15)

    def test_matches_naive_summation_oracle(self, rng):
        m = random_model(rng, n=3, levels=1)
        ridges = [(r.a, r.b, r.c) for r in m.basis.ridges]
        for _ in range(25):
            x, y = rng.uniform(-0.2, 1.2, size=2)
            want = naive_model_eval(
                m.alpha, m.beta, m.h, m.grid, ridges, m.kernel.sigma, x, y, erf
            )
            assert model_eval(m, x, y) == pytest.approx(want, rel=1e-12, abs=1e-12)

    def test_linearity(self, rng):
        basis = default_basis(2, 15.0)
        grid = patch_grid(3)
        kernel = KernelParams(0.35)

        def make(c):
            return SemiParametricModel(
                alpha=c[:9], beta=c[9 : 9 + basis.k], h=c[9 + basis.k :],
                kernel=kernel, grid=grid, basis=basis,
            )

        size = 9 + basis.k + 4
        for _ in range(20):
            c1 = rng.normal(size=size)
            c2 = rng.normal(size=size)
            x, y = rng.uniform(0, 1, size=2)
            lhs = model_eval(make(c1 + c2), x, y)
            rhs = model_eval(make(c1), x, y) + model_eval(make(c2), x, y)
            assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)

    def test_validation(self, rng):
        with pytest.raises(ValueError):
            SemiParametricModel(
                alpha=np.zeros(8),  # not matching the 9-point grid
                beta=np.zeros(0),
                h=np.zeros(4),
                kernel=KernelParams(0.35),
                grid=patch_grid(3),
            )
        with pytest.raises(ValueError):
            SemiParametricModel(
                alpha=np.zeros(9),
                beta=np.zeros(0),
                h=np.zeros(3),
                kernel=KernelParams(0.35),
                grid=patch_grid(3),
            )


class TestDesignMatrix:
    def test_kernel_block_is_gram(self):
        kernel = KernelParams(0.35)
        basis = default_basis(1, 15.0)
        D = build_design(3, kernel, basis)
        G = build_gram(patch_grid(3), kernel)
        assert np.array_equal(D[:, :9], G)

    def test_constant_column_is_ones(self):
        basis = default_basis(2, 15.0)
        D = build_design(3, KernelParams(0.35), basis)
        assert np.array_equal(D[:, 9 + basis.k], np.ones(9))

    def test_shape(self):
        basis = default_basis(3, 15.0)
        D = build_design(5, KernelParams(0.35), basis)
        assert D.shape == (25, 25 + basis.k + 4)

    def test_rows_match_model_eval(self, rng):
        m = random_model(rng, n=3, levels=1)
        D = design_matrix(m)
        c = m.coeffs
        for i, (gx, gy) in enumerate(m.grid):
            assert D[i] @ c == pytest.approx(model_eval(m, gx, gy), rel=1e-12, abs=1e-12)

    def test_rank_condition_shipped_defaults(self):
        # numerical rank K+4 (singular values above 1e-8) for the shipped
        # basis on the shipped grid, and across the safe levels range
        # levels <= (n-1)/2 where the orientation family stays independent
        basis = default_basis(3, 15.0)
        block = basis_columns(basis, patch_grid(7))
        sv = np.linalg.svd(block, compute_uv=False)
        assert int((sv > 1e-8).sum()) == basis.k + 4
        for n, levels in [(5, 1), (5, 2), (7, 1), (7, 2), (7, 3), (9, 3), (9, 4)]:
            b = default_basis(levels, 15.0)
            s = np.linalg.svd(basis_columns(b, patch_grid(n)), compute_uv=False)
            assert int((s > 1e-8).sum()) == b.k + 4, (n, levels)


class TestRkhsNorm:
    def test_zero_alpha(self, rng):
        m = random_model(rng)
        m.alpha[:] = 0.0
        G = build_gram(m.grid, m.kernel)
        assert rkhs_norm_sq(m, G) == 0.0

    def test_single_point(self):
        m = SemiParametricModel(
            alpha=[3.0], beta=np.zeros(0), h=np.zeros(4),
            kernel=KernelParams(0.35), grid=patch_grid(1),
        )
        G = build_gram(m.grid, m.kernel)
        assert rkhs_norm_sq(m, G) == 9.0

    def test_double_loop_oracle(self, rng):
        m = random_model(rng, n=3)
        G = build_gram(m.grid, m.kernel)
        assert rkhs_norm_sq(m, G) == pytest.approx(
            quad_double_loop(G, m.alpha), rel=1e-12
        )

    def test_independent_of_beta_h(self, rng):
        m = random_model(rng, n=3)
        G = build_gram(m.grid, m.kernel)
        before = rkhs_norm_sq(m, G)
        m.beta[:] = rng.normal(size=m.basis.k)
        m.h[:] = rng.normal(size=4)
        assert rkhs_norm_sq(m, G) == before


class TestTextRoundtrip:
    def test_roundtrip_identity(self, rng):
        m = random_model(rng, n=3, levels=2)
        text = model_to_text(m)
        back = model_from_text(text, m.basis)
        assert np.array_equal(back.alpha, m.alpha)
        assert np.array_equal(back.beta, m.beta)
        assert np.array_equal(back.h, m.h)
        assert back.kernel.sigma == m.kernel.sigma
        assert np.array_equal(back.grid, m.grid)

    def test_basis_mismatch_rejected(self, rng):
        m = random_model(rng, n=3, levels=2)
        with pytest.raises(ValueError):
            model_from_text(model_to_text(m), default_basis(1, 15.0))


@given(st.integers(min_value=1, max_value=9))
@settings(max_examples=20, deadline=None)
def test_grid_is_symmetric_under_xy_swap(n):
    g = patch_grid(n)
    swapped = set(map(tuple, g[:, ::-1]))
    assert set(map(tuple, g)) == swapped
