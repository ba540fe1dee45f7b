"""ZX diagrams of the duality and condensation operators."""
import logging

from core.phase import Phase, Scalar
from core.zx_diagram import X, Z, ZxDiagram, port_end, replicate_periodic, spider_end

logger = logging.getLogger(__name__)


def kw_cell(colour_changed=False):
    """One site of the Kramers-Wannier operator.

    inputs [in, west], outputs [out, east]; copy i's east port glues to copy
    i+1's west port. The output of site i carries m_{i-1} + m_i in the X basis.
    """
    d = ZxDiagram()
    z = d.add_spider(Z)
    a = d.add_spider(Z if colour_changed else X)
    p_in, p_west, p_out, p_east = (d.add_port() for _ in range(4))
    d.inputs = [p_in, p_west]
    d.outputs = [p_out, p_east]
    d.add_wire(port_end(p_in), spider_end(z))
    d.add_wire(spider_end(z), spider_end(a), colour_changed)
    d.add_wire(spider_end(z), port_end(p_east))
    d.add_wire(port_end(p_west), spider_end(a), colour_changed)
    d.add_wire(spider_end(a), port_end(p_out), not colour_changed)
    d.multiply_scalar(Scalar.sqrt2_power(1))
    return d, p_east, p_west


def kw_diagram(L, colour_changed=False):
    cell, east, west = kw_cell(colour_changed)
    d = replicate_periodic(cell, L, [east], [west])
    logger.debug(f"🔄 KW diagram for L={L}: {d!r}")
    return d


def graph_duality_diagram(m, rho):
    """Z spiders on V (inputs) and V-hat (outputs), one Hadamard wire per edge.

    The output of vhat is placed at qubit position rho(vhat), so the diagram
    is D_rho itself, scalar 2^kappa included.
    """
    if isinstance(rho, str):
        rho = m.automorphism(rho)
    rho.validate(m.sigma)
    d = ZxDiagram()
    v_spiders = [d.add_spider(Z) for _ in range(m.n_v)]
    vhat_spiders = [d.add_spider(Z) for _ in range(m.n_vhat)]
    for s in v_spiders:
        p = d.add_port()
        d.inputs.append(p)
        d.add_wire(port_end(p), spider_end(s))
    out_ports = {}
    for j, s in enumerate(vhat_spiders):
        p = d.add_port()
        out_ports[rho.perm_vhat[j]] = p
        d.add_wire(spider_end(s), port_end(p))
    d.outputs = [out_ports[k] for k in range(m.n_v)]
    for i, j in m.edges:
        d.add_wire(spider_end(v_spiders[j]), spider_end(vhat_spiders[i]), True)
    d.multiply_scalar(Scalar.sqrt2_power(int(2 * m.kappa)))
    return d


def cn_diagram(L, n):
    """Z(n pi) joined to an X spider on every site wire, scalar 2^{L/2}: equals 1 + (-1)^n eta"""
    d = ZxDiagram()
    hub = d.add_spider(Z, Phase.pi() if n % 2 else Phase.zero())
    for _ in range(L):
        x = d.add_spider(X)
        p_in, p_out = d.add_port(), d.add_port()
        d.inputs.append(p_in)
        d.outputs.append(p_out)
        d.add_wire(port_end(p_in), spider_end(x))
        d.add_wire(spider_end(x), port_end(p_out))
        d.add_wire(spider_end(x), spider_end(hub))
    d.multiply_scalar(Scalar.sqrt2_power(L))
    return d
