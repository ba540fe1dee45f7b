"""Builders for the lattice model families, each with its canonical automorphisms."""
import logging
from fractions import Fraction

import numpy as np

from core.errors import BadSize
from utils.gf2 import BitMatrix
from .bipartite import PRESERVING, REVERSING, Automorphism, BipartiteModel
from .lattice3 import AXES, Lattice3

logger = logging.getLogger(__name__)


def _require(condition, message):
    if not condition:
        raise BadSize(message)


def _as_int(name, value):
    if int(value) != value:
        raise BadSize(f"{name} must be an integer, got {value}")
    return int(value)


def _circulant(L, offsets):
    """rows i: ones at (i + offset) mod L"""
    dense = np.zeros((L, L), dtype=np.uint8)
    for i in range(L):
        for o in offsets:
            dense[i, (i + o) % L] ^= 1
    return dense


def ising_chain(L):
    """Sites i (V) and links i+1/2 (V-hat); B_{i+1/2} = Z_i Z_{i+1}"""
    L = _as_int("L", L)
    _require(L >= 2, f"ising_chain needs L >= 2, got {L}")
    dense = np.zeros((L, L), dtype=np.uint8)
    for j in range(L):
        dense[j, j] ^= 1
        dense[j, (j + 1) % L] ^= 1
    automorphisms = [
        # site i -> link i, link j -> site j+1; squares to translation by one site
        Automorphism(range(L), [(j + 1) % L for j in range(L)], REVERSING, "half_translation"),
        # site i -> link -i, link j -> site -j
        Automorphism([(-i) % L for i in range(L)], [(-j) % L for j in range(L)], REVERSING, "reflection"),
    ]
    return BipartiteModel(
        name=f"ising_chain(L={L})",
        v_labels=[f"s{i}" for i in range(L)],
        vhat_labels=[f"l{j}" for j in range(L)],
        sigma=BitMatrix.from_dense(dense),
        kappa=Fraction(L, 2),
        automorphisms=automorphisms,
    )


def gauge3d(Lx, Ly, Lz):
    """Links (V) and plaquettes (V-hat) of the periodic cubic lattice, Gauss law not imposed"""
    lat = Lattice3(Lx, Ly, Lz)
    t_links, t_plaqs = lat.half_translation_links, lat.half_translation_plaquettes
    parity_links, parity_plaqs = lat.parity_links, lat.parity_plaquettes
    automorphisms = [
        Automorphism(t_links, t_plaqs, REVERSING, "half_translation"),
        # t after parity; parity conjugates t into its inverse, so this squares to one
        Automorphism([t_links[parity_links[ell]] for ell in range(lat.n_links)],
                     [t_plaqs[parity_plaqs[p]] for p in range(lat.n_plaquettes)], REVERSING, "parity"),
        Automorphism(parity_links, parity_plaqs, PRESERVING, "spatial_parity"),
    ]
    if lat.Lx == lat.Ly == lat.Lz:
        automorphisms.append(Automorphism(lat.rotation_links, lat.rotation_plaquettes, PRESERVING, "rotation"))
    links = []
    for ell in range(lat.n_links):
        (x, y, z), d = lat.cell_coords(ell)
        links.append(f"l({x},{y},{z},{AXES[d]})")
    plaqs = []
    for p in range(lat.n_plaquettes):
        (x, y, z), n = lat.cell_coords(p)
        plaqs.append(f"p({x},{y},{z},{AXES[n]})")
    return BipartiteModel(
        name=f"gauge3d({lat.Lx}x{lat.Ly}x{lat.Lz})",
        v_labels=links,
        vhat_labels=plaqs,
        sigma=lat.plaquette_link_matrix,
        kappa=Fraction(4 * lat.n_sites),
        automorphisms=automorphisms,
        lattice=lat,
    )


def _symmetric_pairing(L, name):
    # sigma is symmetric, so pairing site j with Ising term j is reversing and an involution
    return Automorphism(range(L), range(L), REVERSING, name)


def ashkin_teller(L):
    """Two decoupled Ising chains on the odd and even sites (the lambda = 0 point)"""
    L = _as_int("L", L)
    _require(L >= 4 and L % 2 == 0, f"ashkin_teller needs an even L >= 4, got {L}")
    return BipartiteModel(
        name=f"ashkin_teller(L={L})",
        v_labels=[f"s{i}" for i in range(L)],
        vhat_labels=[f"b{i}" for i in range(L)],
        sigma=BitMatrix.from_dense(_circulant(L, (-1, 1))),
        kappa=Fraction(L, 2),
        automorphisms=[_symmetric_pairing(L, "reflection")],
    )


def three_spin(L):
    """B_i = Z_{i-1} Z_i Z_{i+1}"""
    L = _as_int("L", L)
    _require(L >= 3 and L % 3 == 0, f"three_spin needs L a positive multiple of 3, got {L}")
    return BipartiteModel(
        name=f"three_spin(L={L})",
        v_labels=[f"s{i}" for i in range(L)],
        vhat_labels=[f"b{i}" for i in range(L)],
        sigma=BitMatrix.from_dense(_circulant(L, (-1, 0, 1))),
        kappa=Fraction(L),
        automorphisms=[_symmetric_pairing(L, "reflection")],
    )


def plaquette_ising(Lx, Ly):
    """Sites (i,j) and plaquettes (i+1/2, j+1/2) of the periodic square lattice"""
    Lx, Ly = _as_int("Lx", Lx), _as_int("Ly", Ly)
    _require(Lx >= 2 and Ly >= 2, f"plaquette_ising needs Lx, Ly >= 2, got {Lx}x{Ly}")

    def site(i, j):
        return (i % Lx) * Ly + (j % Ly)

    n = Lx * Ly
    dense = np.zeros((n, n), dtype=np.uint8)
    for i in range(Lx):
        for j in range(Ly):
            for di in (0, 1):
                for dj in (0, 1):
                    dense[site(i, j), site(i + di, j + dj)] ^= 1
    coords = [(i, j) for i in range(Lx) for j in range(Ly)]
    automorphisms = [
        # site (i,j) -> plaquette (i,j), plaquette (i,j) -> site (i+1,j+1)
        Automorphism(range(n), [site(i + 1, j + 1) for i, j in coords], REVERSING, "half_translation"),
        # pi rotation: site (i,j) -> plaquette (-i,-j), plaquette (i,j) -> site (-i,-j)
        Automorphism([site(-i, -j) for i, j in coords], [site(-i, -j) for i, j in coords],
                     REVERSING, "parity"),
    ]
    return BipartiteModel(
        name=f"plaquette_ising({Lx}x{Ly})",
        v_labels=[f"s({i},{j})" for i, j in coords],
        vhat_labels=[f"p({i},{j})" for i, j in coords],
        sigma=BitMatrix.from_dense(dense),
        kappa=Fraction(3 * n, 2),
        automorphisms=automorphisms,
    )


def ising_square(Lx, Ly):
    """2+1d transverse-field Ising model: sites (V), links (V-hat)"""
    Lx, Ly = _as_int("Lx", Lx), _as_int("Ly", Ly)
    _require(Lx >= 2 and Ly >= 2, f"ising_square needs Lx, Ly >= 2, got {Lx}x{Ly}")

    def site(i, j):
        return (i % Lx) * Ly + (j % Ly)

    n = Lx * Ly
    dense = np.zeros((2 * n, n), dtype=np.uint8)
    links = []
    for i in range(Lx):
        for j in range(Ly):
            for d, (di, dj) in enumerate(((1, 0), (0, 1))):
                row = 2 * site(i, j) + d
                dense[row, site(i, j)] ^= 1
                dense[row, site(i + di, j + dj)] ^= 1
                links.append(f"l({i},{j},{AXES[d]})")
    return BipartiteModel(
        name=f"ising_square({Lx}x{Ly})",
        v_labels=[f"s({i},{j})" for i in range(Lx) for j in range(Ly)],
        vhat_labels=links,
        sigma=BitMatrix.from_dense(dense),
        kappa=Fraction(3 * n, 2),
    )


def product_with_dual(base):
    """base ⊔ gauged(base): V = V0 ⊔ V-hat0, V-hat = V-hat0 ⊔ V0, swapped by a reversing involution"""
    s0 = base.sigma.to_dense()
    nv, nvh = base.n_v, base.n_vhat
    dense = np.zeros((nvh + nv, nv + nvh), dtype=np.uint8)
    dense[:nvh, :nv] = s0
    dense[nvh:, nv:] = s0.T
    swap = Automorphism(
        # column v0 -> row v0 of the lower block, column vhat0 -> row vhat0 of the upper block
        [nvh + k for k in range(nv)] + list(range(nvh)),
        [nv + k for k in range(nvh)] + list(range(nv)),
        REVERSING, "swap")
    return BipartiteModel(
        name=f"product_with_dual({base.name})",
        v_labels=list(base.v_labels) + [f"bar:{lab}" for lab in base.vhat_labels],
        vhat_labels=list(base.vhat_labels) + [f"bar:{lab}" for lab in base.v_labels],
        sigma=BitMatrix.from_dense(dense),
        kappa=base.kappa + base.dual_kappa,
        automorphisms=[swap],
    )


def random_cyclic_model(rng, k=4, blocks=2, density=0.5):
    """Random sigma made of k x k circulant blocks, so shifting every block by one is a symmetry.

    Diagonal blocks are Ising rings, off-diagonal blocks random circulants. Used to
    exercise the automorphism search on graphs nobody wrote down by hand: the block
    shift must always be found, and reversing automorphisms appear (with or without
    involutions) depending on the draw.
    """
    k, blocks = _as_int("k", k), _as_int("blocks", blocks)
    _require(k >= 2 and blocks >= 1, f"random_cyclic_model needs k >= 2 and blocks >= 1, got {k}, {blocks}")
    n = k * blocks
    dense = np.zeros((n, n), dtype=np.uint8)
    for a in range(blocks):
        for b in range(blocks):
            offsets = (0, 1) if a == b else [o for o in range(k) if rng.random() < density]
            dense[a * k:(a + 1) * k, b * k:(b + 1) * k] = _circulant(k, offsets)
    shift = [(q // k) * k + (q % k + 1) % k for q in range(n)]
    return BipartiteModel(
        name=f"random_cyclic(k={k}, blocks={blocks})",
        v_labels=[f"s{q}" for q in range(n)],
        vhat_labels=[f"b{q}" for q in range(n)],
        sigma=BitMatrix.from_dense(dense),
        kappa=Fraction(n, 2),
        automorphisms=[Automorphism(shift, shift, PRESERVING, "block_shift")],
    )


BUILDERS = {
    "ising_chain": ising_chain,
    "gauge3d": gauge3d,
    "ashkin_teller": ashkin_teller,
    "three_spin": three_spin,
    "plaquette_ising": plaquette_ising,
    "ising_square": ising_square,
}


def build_model(kind, *args, **params):
    """build_model("gauge3d", 2, 2, 2); product_with_dual takes a base model or a (kind, args) pair"""
    if kind == "product_with_dual":
        base = params.pop("base", args[0] if args else None)
        if isinstance(base, tuple):
            base = build_model(base[0], *base[1:])
        if base is None:
            raise BadSize("product_with_dual needs a base model")
        m = product_with_dual(base)
    elif kind in BUILDERS:
        m = BUILDERS[kind](*args, **params)
    else:
        raise ValueError(f"unknown model kind {kind!r}; choose from {sorted(BUILDERS) + ['product_with_dual']}")
    logger.info(f"🔄 built {m!r}")
    return m
