"""Tests for solver grids."""

import numpy as np
import pytest

from schmidtbec.core.errors import DomainError, GridCoverageError
from schmidtbec.physics.regimes import tf_radius_zero
from schmidtbec.solver.grid import FIELD_COPIES, Grid


class TestGridConstruction:

    def test_quasi1d_defaults(self, quasi1d_spec):
        grid = Grid.for_spec(quasi1d_spec)
        expected_L = 1.5 * max(tf_radius_zero(quasi1d_spec), 3 * quasi1d_spec.r0)
        assert grid.points == (64, 64, 512)
        assert grid.longitudinal_axes == (2,)
        assert grid.half_widths == pytest.approx((6.0, 6.0, expected_L))
        assert grid.d == 1

    def test_quasi2d_defaults(self, quasi2d_spec):
        grid = Grid.for_spec(quasi2d_spec)
        assert grid.points == (256, 256, 64)
        assert grid.longitudinal_axes == (0, 1)
        assert grid.transverse_axes == (2,)
        assert grid.half_widths[2] == 6.0

    def test_single_atom_box_uses_oscillator_length(self, make_spec):
        spec = make_spec(N=1.0)
        grid = Grid.for_spec(spec, points=(8, 8, 16))
        assert grid.half_widths[2] == pytest.approx(4.5 * spec.r0)

    @pytest.mark.parametrize("points", [(8, 8, 12), (8, 1, 16), (0, 8, 8)])
    def test_points_must_be_powers_of_two(self, points):
        with pytest.raises(DomainError, match="powers of two"):
            Grid(points, (6.0, 6.0, 10.0))

    def test_axis_count_must_match_dimension(self, quasi1d_spec):
        with pytest.raises(DomainError):
            Grid.for_spec(quasi1d_spec, longitudinal_axes=(0, 1))

    def test_nonpositive_half_width(self):
        with pytest.raises(DomainError):
            Grid((8, 8, 8), (6.0, 0.0, 10.0))


class TestCoverage:

    def test_narrow_transverse_box(self, quasi1d_spec):
        with pytest.raises(GridCoverageError, match="transverse"):
            Grid.for_spec(quasi1d_spec, points=(8, 8, 16), transverse_half_width=3.0)

    def test_short_longitudinal_box(self, quasi1d_spec):
        R = tf_radius_zero(quasi1d_spec)
        with pytest.raises(GridCoverageError, match="longitudinal"):
            Grid.for_spec(quasi1d_spec, points=(8, 8, 16), longitudinal_half_width=R)

    def test_coverage_error_is_domain_error(self, quasi1d_spec):
        with pytest.raises(DomainError):
            Grid.for_spec(quasi1d_spec, points=(8, 8, 16), transverse_half_width=1.0)


class TestGeometry:

    @pytest.fixture
    def grid(self):
        return Grid((4, 8, 16), (6.0, 6.0, 10.0))

    def test_midpoint_axis(self, grid):
        z = grid.axis(2)
        assert z.size == 16
        assert z[0] == pytest.approx(-10.0 + 0.625)
        assert np.allclose(z, -z[::-1])
        assert not np.any(z == 0.0)

    def test_cell_volumes(self, grid):
        assert grid.spacing == pytest.approx((3.0, 1.5, 1.25))
        assert grid.cell_volume == pytest.approx(3.0 * 1.5 * 1.25)
        assert grid.transverse_cell_volume * grid.longitudinal_cell_volume == pytest.approx(
            grid.cell_volume)

    def test_radii_broadcast(self, grid):
        rho, r = grid.radii()
        assert np.broadcast(rho, r).shape == grid.points
        assert r.shape == (1, 1, 16)

    def test_wavenumbers_match_real_fft(self, grid):
        kx, ky, kz = grid.wavenumbers()
        assert kx.shape == (4, 1, 1)
        assert ky.shape == (1, 8, 1)
        assert kz.shape == (1, 1, 9)
        assert kz[0, 0, 1] == pytest.approx(2 * np.pi / 20.0)

    def test_to_matrix_quasi1d(self, grid):
        field = np.arange(grid.size, dtype=float).reshape(grid.points)
        matrix = grid.to_matrix(field)
        assert matrix.shape == (32, 16)
        assert matrix[0, 3] == field[0, 0, 3]

    def test_to_matrix_quasi2d(self):
        grid = Grid((4, 8, 16), (10.0, 10.0, 6.0), longitudinal_axes=(0, 1))
        field = np.random.default_rng(0).normal(size=grid.points)
        matrix = grid.to_matrix(field)
        assert matrix.shape == (16, 32)
        assert matrix[5, 9] == field[1, 1, 5]

    def test_memory_estimate(self, grid):
        assert grid.memory_estimate_bytes() == FIELD_COPIES * 8 * grid.size
