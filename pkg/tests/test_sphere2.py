"""Tests for maps of the two-sphere: degrees, energies, and pair fields."""

import numpy as np
import pytest

from spheremaps import sphere2
from spheremaps.errors import GridMismatch, Overcrowded

PI = np.pi
TWO_PI = 2.0 * np.pi


class TestGridGeometry:
    def test_row_areas_sum_to_sphere_area(self):
        f = sphere2.stereographic_power(1, n_phi=64)
        assert abs(np.sum(f.row_areas()) * f.n_lam / f.n_lam - 0.0) >= 0
        assert abs(np.sum(f.row_areas()) * f.n_lam - 4.0 * PI) < 1e-10

    def test_geometric_rows_resolve_small_scales(self):
        phi = sphere2.geometric_rows(1e-6, 200)
        assert phi[0] <= 1e-6 * 2.0
        assert np.all(np.diff(phi) > 0)
        assert phi[-1] < PI

    def test_unit_modulus_enforced(self):
        phi = sphere2.uniform_rows(8)
        values = np.zeros((8, 16, 3))
        values[..., 2] = 1.1
        with pytest.raises(ValueError):
            sphere2.Sphere2Map(phi, values)

    def test_grid_mismatch_raises(self):
        f = sphere2.stereographic_power(1, n_phi=32)
        g = sphere2.stereographic_power(1, n_phi=64)
        with pytest.raises(GridMismatch):
            sphere2.h1_distance(f, g)


class TestStereographicPower:
    @pytest.mark.parametrize("d", [1, 2, 3, -1, -2])
    def test_degree(self, d):
        f = sphere2.stereographic_power(d, n_phi=128)
        assert abs(sphere2.degree_kronecker_s2(f) - d) < 1e-3

    @pytest.mark.parametrize("d", [1, 2])
    def test_energy_matches_conformal_value(self, d):
        # Holomorphic representatives realize the energy lower bound 8*pi*|d|.
        f = sphere2.stereographic_power(d, n_phi=256)
        e = sphere2.dirichlet_energy(f)
        assert abs(e - 8.0 * PI * abs(d)) < 0.01 * 8.0 * PI * abs(d)

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_energy_lower_bound(self, d):
        f = sphere2.stereographic_power(d, n_phi=128)
        assert sphere2.dirichlet_energy(f) >= 8.0 * PI * abs(d) - 0.15


class TestSuspension:
    @pytest.mark.parametrize("k", [0, 1, 2, 3])
    @pytest.mark.parametrize("dh", [1, 2, 3])
    def test_degree_parity_rule(self, k, dh):
        # The suspension of a winding-dh circle map over a profile that
        # crosses the poles k times has degree dh when k is odd, 0 when even.
        f = sphere2.suspension(sphere2.default_suspension(k, dh), n_phi=192)
        expected = dh * (k % 2)
        assert abs(sphere2.degree_kronecker_s2(f) - expected) < 1e-2


class TestAntipodeAndBumps:
    def test_antipode_flips_degree(self):
        f = sphere2.stereographic_power(2, n_phi=128)
        g = sphere2.antipode(f)
        assert abs(sphere2.degree_kronecker_s2(g) + 2) < 1e-3

    @pytest.mark.parametrize("d,n,n_phi", [(1, 4, 256), (2, 8, 256),
                                           (-3, 8, 256), (4, 16, 512)])
    def test_multi_bump_degree_additivity(self, d, n, n_phi):
        f = sphere2.multi_bump_s2(d, n, n_phi=n_phi)
        assert abs(sphere2.degree_kronecker_s2(f) - d) < 1e-2

    def test_overcrowded_bumps_raise(self):
        with pytest.raises(Overcrowded):
            sphere2.multi_bump_s2(8, 2)


class TestPairFields:
    def test_vo1_difference_field_independent_of_classes(self):
        # The pointwise field f - g of the class-(d1, d2) pair depends only
        # on the shared radial profiles, not on d1 - d2.
        a = sphere2.vo1_pair(3, 0, n_phi=128)
        b = sphere2.vo1_pair(7, 0, n_phi=128)
        diff_a = a.f.values - a.g.values
        diff_b = b.f.values - b.g.values
        assert np.max(np.abs(diff_a - diff_b)) < 1e-12

    def test_vo1_h1_distance_equal_across_classes(self):
        a = sphere2.vo1_pair(3, 0, n_phi=128)
        b = sphere2.vo1_pair(7, 0, n_phi=128)
        da = sphere2.h1_distance(a.f, a.g)
        db = sphere2.h1_distance(b.f, b.g)
        assert abs(da - db) < 1e-6

    def test_vo1_pair_degrees(self):
        pair = sphere2.vo1_pair(3, 0, n_phi=192)
        assert abs(sphere2.degree_kronecker_s2(pair.f) - 3) < 1e-2
        assert abs(sphere2.degree_kronecker_s2(pair.g) - 0) < 1e-2

    def test_bump_pair_degrees(self):
        from spheremaps import gallery

        prof = gallery.capacity_profiles(1e-2)
        pair = sphere2.bump_pair_s2(prof, n_phi=384)
        assert abs(sphere2.degree_kronecker_s2(pair.f) - 1) < 1e-2
        assert abs(sphere2.degree_kronecker_s2(pair.g) - 0) < 1e-2
