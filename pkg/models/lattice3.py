"""Periodic cubic lattice: cell indexing, incidence and the point/half translations.

Cells are indexed lexicographically in (x, y, z) and then direction:
    site(x,y,z)        = (x*Ly + y)*Lz + z
    link(x,y,z,d)      = 3*site + d           link from r to r+e_d
    plaquette(x,y,z,n) = 3*site + n           corner r, normal n
    cube(x,y,z)        = site                 lowest corner r
Directions are 0=x, 1=y, 2=z.
"""
import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from core.errors import BadCurve, BadSize, BadSurface
from utils.gf2 import BitMatrix, BitVector

logger = logging.getLogger(__name__)

AXES = "xyz"


def _unit(d):
    e = [0, 0, 0]
    e[d] = 1
    return tuple(e)


def other_directions(n):
    """The two directions spanning a plaquette with normal n, in cyclic order"""
    return (n + 1) % 3, (n + 2) % 3


class Lattice3:

    def __init__(self, Lx, Ly, Lz):
        for name, size in (("Lx", Lx), ("Ly", Ly), ("Lz", Lz)):
            if int(size) != size or size < 2:
                raise BadSize(f"{name} must be an integer >= 2, got {size}")
        self.Lx, self.Ly, self.Lz = int(Lx), int(Ly), int(Lz)
        self.dims = (self.Lx, self.Ly, self.Lz)

    def __repr__(self):
        return f"Lattice3({self.Lx}x{self.Ly}x{self.Lz})"

    def __eq__(self, other):
        return isinstance(other, Lattice3) and self.dims == other.dims

    def __hash__(self):
        return hash(self.dims)

    # ----- counts -----
    @property
    def n_sites(self):
        return self.Lx * self.Ly * self.Lz

    @property
    def n_links(self):
        return 3 * self.n_sites

    @property
    def n_plaquettes(self):
        return 3 * self.n_sites

    @property
    def n_cubes(self):
        return self.n_sites

    # ----- indexing -----
    def wrap(self, r):
        return tuple(c % L for c, L in zip(r, self.dims))

    def shift(self, r, delta, sign=1):
        return self.wrap(tuple(a + sign * b for a, b in zip(r, delta)))

    def site(self, x, y, z):
        x, y, z = self.wrap((x, y, z))
        return (x * self.Ly + y) * self.Lz + z

    def link(self, x, y, z, d):
        return 3 * self.site(x, y, z) + d

    def plaquette(self, x, y, z, n):
        return 3 * self.site(x, y, z) + n

    def cube(self, x, y, z):
        return self.site(x, y, z)

    def site_coords(self, s):
        x, rest = divmod(s, self.Ly * self.Lz)
        y, z = divmod(rest, self.Lz)
        return (x, y, z)

    def cell_coords(self, index):
        """(r, direction) for a link or plaquette index"""
        s, d = divmod(index, 3)
        return self.site_coords(s), d

    def sites(self):
        return [self.site_coords(s) for s in range(self.n_sites)]

    # ----- incidence -----
    def links_of_plaquette(self, p):
        r, n = self.cell_coords(p)
        a, b = other_directions(n)
        return [self.link(*r, a), self.link(*r, b),
                self.link(*self.shift(r, _unit(a)), b), self.link(*self.shift(r, _unit(b)), a)]

    def plaquettes_of_link(self, ell):
        r, d = self.cell_coords(ell)
        out = []
        for a in other_directions(d):
            n = 3 - a - d
            out.append(self.plaquette(*r, n))
            out.append(self.plaquette(*self.shift(r, _unit(a), -1), n))
        return out

    def links_of_site(self, s):
        r = self.site_coords(s)
        out = []
        for d in range(3):
            out.append(self.link(*r, d))
            out.append(self.link(*self.shift(r, _unit(d), -1), d))
        return out

    def sites_of_link(self, ell):
        r, d = self.cell_coords(ell)
        return [self.site(*r), self.site(*self.shift(r, _unit(d)))]

    def plaquettes_of_cube(self, c):
        r = self.site_coords(c)
        out = []
        for n in range(3):
            out.append(self.plaquette(*r, n))
            out.append(self.plaquette(*self.shift(r, _unit(n)), n))
        return out

    def corners_of_plaquette(self, p):
        r, n = self.cell_coords(p)
        a, b = other_directions(n)
        ea, eb = _unit(a), _unit(b)
        return [self.site(*r), self.site(*self.shift(r, ea)), self.site(*self.shift(r, eb)),
                self.site(*self.shift(self.shift(r, ea), eb))]

    def orthogonal_links(self, p):
        """Links along the plaquette normal that touch one of its corners"""
        _, n = self.cell_coords(p)
        out = []
        for s in self.corners_of_plaquette(p):
            r = self.site_coords(s)
            out.append(self.link(*r, n))
            out.append(self.link(*self.shift(r, _unit(n), -1), n))
        return out

    @staticmethod
    def _incidence(n_rows, n_cols, rows_of):
        dense = np.zeros((n_rows, n_cols), dtype=np.uint8)
        for i in range(n_rows):
            for j in rows_of(i):
                dense[i, j] ^= 1
        return BitMatrix.from_dense(dense)

    @cached_property
    def plaquette_link_matrix(self):
        """sigma: plaquettes x links"""
        return self._incidence(self.n_plaquettes, self.n_links, self.links_of_plaquette)

    @cached_property
    def site_link_matrix(self):
        """Boundary of a curve: sites x links"""
        return self._incidence(self.n_sites, self.n_links, self.links_of_site)

    @cached_property
    def cube_plaquette_matrix(self):
        """Coboundary of a dual curve: cubes x plaquettes"""
        return self._incidence(self.n_cubes, self.n_plaquettes, self.plaquettes_of_cube)

    # ----- half translation t(r) = r + (1/2, 1/2, 1/2) -----
    @cached_property
    def half_translation_links(self):
        """link -> plaquette"""
        out = []
        for ell in range(self.n_links):
            r, d = self.cell_coords(ell)
            out.append(self.plaquette(*self.shift(r, _unit(d)), d))
        return tuple(out)

    @cached_property
    def half_translation_plaquettes(self):
        """plaquette -> link"""
        out = []
        for p in range(self.n_plaquettes):
            r, n = self.cell_coords(p)
            a, b = other_directions(n)
            out.append(self.link(*self.shift(self.shift(r, _unit(a)), _unit(b)), n))
        return tuple(out)

    @cached_property
    def half_translation_sites(self):
        """site -> cube"""
        return tuple(range(self.n_sites))

    @cached_property
    def half_translation_cubes(self):
        """cube -> site"""
        return tuple(self.site(*self.shift(self.site_coords(c), (1, 1, 1))) for c in range(self.n_cubes))

    # ----- translations and point maps on links/plaquettes -----
    def translation_links(self, a):
        return tuple(self.link(*self.shift(self.cell_coords(ell)[0], a), self.cell_coords(ell)[1])
                     for ell in range(self.n_links))

    @cached_property
    def parity_links(self):
        out = []
        for ell in range(self.n_links):
            r, d = self.cell_coords(ell)
            out.append(self.link(*self.shift(tuple(-c for c in r), _unit(d), -1), d))
        return tuple(out)

    @cached_property
    def parity_plaquettes(self):
        out = []
        for p in range(self.n_plaquettes):
            r, n = self.cell_coords(p)
            a, b = other_directions(n)
            corner = self.shift(self.shift(tuple(-c for c in r), _unit(a), -1), _unit(b), -1)
            out.append(self.plaquette(*corner, n))
        return tuple(out)

    def _check_cubic(self):
        if not self.Lx == self.Ly == self.Lz:
            raise BadSize(f"rotations need Lx = Ly = Lz, got {self.dims}")

    @staticmethod
    def _rotate(r):
        # 2pi/3 about (1,1,1): e_x -> e_y -> e_z -> e_x
        return (r[2], r[0], r[1])

    @cached_property
    def rotation_links(self):
        self._check_cubic()
        out = []
        for ell in range(self.n_links):
            r, d = self.cell_coords(ell)
            out.append(self.link(*self._rotate(r), (d + 1) % 3))
        return tuple(out)

    @cached_property
    def rotation_plaquettes(self):
        self._check_cubic()
        out = []
        for p in range(self.n_plaquettes):
            r, n = self.cell_coords(p)
            out.append(self.plaquette(*self._rotate(r), (n + 1) % 3))
        return tuple(out)

    # ----- named cycles -----
    def dual_plane(self, i, j):
        """Links crossing the dual plane spanned by directions i and j at height 0 of the third"""
        k = 3 - i - j
        if i == j or k not in (0, 1, 2):
            raise BadSurface(f"directions {i}, {j} do not span a plane")
        cells = []
        for s in range(self.n_sites):
            r = self.site_coords(s)
            if r[k] == 0:
                cells.append(self.link(*r, k))
        return SurfacePath.from_cells(self, "dual_surface", cells)

    def wilson_line(self, k):
        """Non-contractible straight curve along direction k through the origin"""
        cells = []
        for t in range(self.dims[k]):
            r = [0, 0, 0]
            r[k] = t
            cells.append(self.link(*r, k))
        return SurfacePath.from_cells(self, "curve", cells)

    def plaquette_boundary(self, p):
        return SurfacePath.from_cells(self, "curve", self.links_of_plaquette(p))


# (i, j) planes in cyclic order, paired with the Wilson direction k crossing them once
PLANES = ((0, 1), (1, 2), (2, 0))
PLANE_NAMES = ("xy", "yz", "zx")
CYCLIC_WILSON = {(0, 1): 2, (1, 2): 0, (2, 0): 1}


@dataclass(frozen=True)
class SurfacePath:
    """Indicator vector of links (dual surface, curve) or plaquettes (dual curve)"""
    kind: str
    lattice: Lattice3
    members: BitVector

    KINDS = ("dual_surface", "curve", "dual_curve")

    @classmethod
    def from_cells(cls, lattice, kind, cells):
        if kind not in cls.KINDS:
            raise BadSurface(f"unknown surface kind {kind!r}")
        size = lattice.n_plaquettes if kind == "dual_curve" else lattice.n_links
        error = BadCurve if kind in ("curve", "dual_curve") else BadSurface
        cells = [int(c) for c in cells]
        bad = [c for c in cells if not 0 <= c < size]
        if bad:
            raise error(f"{kind} references cells {bad} outside 0..{size - 1} on {lattice!r}")
        return cls(kind, lattice, BitVector.from_indices(size, cells))

    @classmethod
    def from_indicator(cls, lattice, kind, bits):
        bits = np.asarray(bits)
        size = lattice.n_plaquettes if kind == "dual_curve" else lattice.n_links
        if bits.shape != (size,) or not np.isin(bits, (0, 1)).all():
            error = BadCurve if kind in ("curve", "dual_curve") else BadSurface
            raise error(f"{kind} indicator must be {size} bits of 0/1")
        return cls.from_cells(lattice, kind, np.nonzero(bits)[0])

    @property
    def cells(self):
        return self.members.support()

    def boundary(self):
        """Incidence parity on the cells one dimension down (or up, for dual objects)"""
        lat = self.lattice
        if self.kind == "curve":
            return lat.site_link_matrix.matvec(self.members)
        if self.kind == "dual_curve":
            return lat.cube_plaquette_matrix.matvec(self.members)
        return lat.plaquette_link_matrix.matvec(self.members)

    def is_closed(self):
        return self.boundary().is_zero()

    def __xor__(self, other):
        if (self.kind, self.lattice) != (other.kind, other.lattice):
            raise BadSurface("cannot add surfaces of different kinds or lattices")
        return SurfacePath(self.kind, self.lattice, self.members ^ other.members)

    def intersection(self, other):
        """Mod-2 count of shared cells"""
        return self.members.dot(other.members)


def random_curve(lattice, rng, closed=False, n_plaquettes=3, length=5):
    """Closed: sum of random plaquette boundaries plus random Wilson lines. Open: a random link set."""
    if closed:
        curve = SurfacePath.from_cells(lattice, "curve", [])
        for p in rng.choice(lattice.n_plaquettes, size=n_plaquettes, replace=False):
            curve = curve ^ lattice.plaquette_boundary(int(p))
        for k in range(3):
            if rng.integers(2):
                curve = curve ^ lattice.wilson_line(k)
        return curve
    while True:
        cells = rng.choice(lattice.n_links, size=length, replace=False)
        curve = SurfacePath.from_cells(lattice, "curve", [int(c) for c in cells])
        if not curve.is_closed():
            return curve
