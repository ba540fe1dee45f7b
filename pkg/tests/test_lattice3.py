import numpy as np
import pytest

from core.errors import BadCurve, BadSize, BadSurface
from models.lattice3 import CYCLIC_WILSON, PLANES, Lattice3, SurfacePath, random_curve


@pytest.fixture
def lat():
    return Lattice3(2, 2, 2)


def test_counts(lat):
    assert (lat.n_sites, lat.n_links, lat.n_plaquettes, lat.n_cubes) == (8, 24, 24, 8)
    assert repr(Lattice3(2, 3, 4)) == "Lattice3(2x3x4)"


def test_bad_sizes():
    with pytest.raises(BadSize):
        Lattice3(1, 2, 2)
    with pytest.raises(BadSize):
        Lattice3(2, 2, 2.5)


def test_indexing_round_trip():
    lat = Lattice3(2, 3, 4)
    for s in range(lat.n_sites):
        assert lat.site(*lat.site_coords(s)) == s
    assert lat.site(2, 3, 4) == lat.site(0, 0, 0)
    assert lat.cell_coords(lat.link(1, 2, 3, 2)) == ((1, 2, 3), 2)


def test_incidence_degrees():
    lat = Lattice3(3, 3, 3)
    assert all(len(set(lat.links_of_plaquette(p))) == 4 for p in range(lat.n_plaquettes))
    assert all(len(set(lat.plaquettes_of_link(ell))) == 4 for ell in range(lat.n_links))
    assert all(len(set(lat.links_of_site(s))) == 6 for s in range(lat.n_sites))
    assert all(len(set(lat.plaquettes_of_cube(c))) == 6 for c in range(lat.n_cubes))
    for ell in range(lat.n_links):
        for p in lat.plaquettes_of_link(ell):
            assert ell in lat.links_of_plaquette(p)


def test_boundary_maps_compose_to_zero(lat):
    # every plaquette boundary is a closed curve and every cube coboundary a closed surface
    for p in range(lat.n_plaquettes):
        assert lat.plaquette_boundary(p).is_closed()
    product = lat.site_link_matrix.to_dense().astype(int) @ lat.plaquette_link_matrix.to_dense().T
    np.testing.assert_array_equal(product % 2, 0)


def test_kernel_dimensions(lat):
    # closed dual surfaces: 2^{V-1} Gauss products times 3 planes; closed curves: 2V + 1
    assert len(lat.plaquette_link_matrix.kernel_basis()) == lat.n_sites + 2
    assert len(lat.site_link_matrix.kernel_basis()) == 2 * lat.n_sites + 1


def test_planes_and_wilson_lines_cross_once(lat):
    for plane in PLANES:
        surface = lat.dual_plane(*plane)
        assert surface.is_closed()
        assert len(surface.cells) == 4
        for other in PLANES:
            line = lat.wilson_line(CYCLIC_WILSON[other])
            assert line.is_closed()
            assert surface.intersection(line) == int(plane == other)


def test_dual_plane_needs_two_directions(lat):
    with pytest.raises(BadSurface):
        lat.dual_plane(1, 1)


def test_surface_path_errors(lat):
    with pytest.raises(BadCurve):
        SurfacePath.from_cells(lat, "curve", [24])
    with pytest.raises(BadSurface):
        SurfacePath.from_cells(lat, "membrane", [0])
    with pytest.raises(BadSurface):
        SurfacePath.from_indicator(lat, "dual_surface", np.ones(5))
    with pytest.raises(BadSurface):
        lat.dual_plane(0, 1) ^ lat.wilson_line(0)


def test_open_curve_has_two_endpoints(lat):
    curve = SurfacePath.from_cells(lat, "curve", [lat.link(0, 0, 0, 0)])
    assert not curve.is_closed()
    assert curve.boundary().weight() == 2
    assert SurfacePath.from_indicator(lat, "curve", curve.members.to_array()) == curve


def test_random_curves(lat, rng):
    for _ in range(5):
        assert random_curve(lat, rng, closed=True).is_closed()
        assert not random_curve(lat, rng, closed=False).is_closed()


def test_translations_are_permutations(lat):
    for perm in (lat.translation_links((1, 0, 0)), lat.parity_links, lat.rotation_links,
                 lat.half_translation_links, lat.half_translation_plaquettes):
        assert sorted(perm) == list(range(24))


def test_half_translation_maps_links_into_plaquette_boundaries(lat):
    # a link and the plaquette it is sent to are dual: t maps the pair (link in plaquette) consistently
    t_links, t_plaqs = lat.half_translation_links, lat.half_translation_plaquettes
    sigma = lat.plaquette_link_matrix
    for p, ell in sigma.nonzero():
        assert sigma[t_links[ell], t_plaqs[p]] == 1


def test_rotation_needs_a_cube():
    with pytest.raises(BadSize):
        Lattice3(2, 2, 3).rotation_links
