"""Verification suites: each builds a list of checks and runs them into a Report.

A check is (id, anchor, tolerance name, fn) where fn(rng) returns the observed
error. Every check gets its own generator seeded from (seed, position), so the
report does not depend on how the checks are scheduled.
"""
import logging
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh
from scipy.sparse.linalg import LinearOperator, eigsh

from config import get_config
from core.errors import SearchCapExceeded, TooLarge
from core.rule_fixtures import rule_instances
from core.structured_op import structured_to_dense
from core.suite_worker import run_tasks
from core.zx_eval import contract
from core.zx_rules import RuleId, apply as apply_rule
from models.automorphisms import brute_force_automorphisms, find_automorphisms
from models.bipartite import PRESERVING, REVERSING, gauged
from models.builders import gauge3d, ising_chain
from models.gauging import fixed_hamiltonian, gauge_model, gauged_gauge3d
from models.hamiltonians import (conjugate_by, defect, deformation_terms_3d, deformed_1d, deformed_3d,
                                 gauge3d_with_gauss, hamiltonian, move_defect)
from models.lattice3 import SurfacePath, random_curve
from models.lattice_operators import LABELS, lattice_operators
from models.operators import (absorption_coefficient, condensation_op, cn_operator, duality_eigenbasis_1d,
                              duality_op, ghz_state, kw_matrix, modified_duality, symmetry_ops,
                              translation_1d, translation_op)
from models.zx_builders import cn_diagram, graph_duality_diagram, kw_diagram
from utils.bit_kernels import basis_state, max_abs_diff, plus_state, random_state, relative_error
from utils.pauli import OperatorSum, PauliString, coefficient_distance, expectation
from utils.serialization import dump_state
from .report import Report, environment, run_check

logger = logging.getLogger(__name__)

# exact diagonalization and dense fusion checks stop at this many qubits
FULL_DIAG_MAX_QUBITS = 10


def _err(a, b):
    """Relative error, or the absolute one when the expected vector vanishes"""
    if np.linalg.norm(b) < 1e-12:
        return float(np.linalg.norm(np.asarray(a) - np.asarray(b)))
    return relative_error(a, b)


def _require_state(n):
    cap = get_config().max_elements
    if (1 << n) > cap:
        raise TooLarge(f"a {n}-qubit state exceeds the memory budget ({cap} amplitudes)")


def _require_dense(n, limit=None):
    cap = get_config().dense_cap if limit is None else min(limit, get_config().dense_cap)
    if n > cap:
        raise TooLarge(f"{n} qubits exceeds the dense cap {cap}")


def _run(report, checks, seed, workers):
    cfg = get_config()

    def job(k, check_id, anchor, tol_name, fn):
        rng = np.random.default_rng([seed, k])
        return lambda: run_check(check_id, anchor, cfg.tolerance(tol_name), lambda: fn(rng))

    tasks = [job(k, *c) for k, c in enumerate(checks)]
    report.extend(run_tasks(tasks, workers))
    report.log_summary()
    return report


# ----- shared graph-model checks -----
def _intertwining(m, D, rho, rng, sample=None):
    """D X_v = B_{rho(v)} D and D B_vhat = X_{rho(vhat)} D on one random state"""
    psi = random_state(m.n_v, rng)
    d_psi = D.apply(psi)
    vs = range(m.n_v) if sample is None else rng.choice(m.n_v, size=min(sample, m.n_v), replace=False)
    vhats = range(m.n_vhat) if sample is None else rng.choice(m.n_vhat, size=min(sample, m.n_vhat), replace=False)
    worst = 0.0
    for v in vs:
        v = int(v)
        worst = max(worst, _err(D.apply(m.transverse_term(v).apply(psi)),
                                m.ising_term(rho.perm_v[v]).apply(d_psi)))
    for vh in vhats:
        vh = int(vh)
        worst = max(worst, _err(D.apply(m.ising_term(vh).apply(psi)),
                                m.transverse_term(rho.perm_vhat[vh]).apply(d_psi)))
    return worst


def _batch_size(n, count):
    # about eight state-sized arrays are alive per column while D D and T C run
    return max(1, min(count, get_config().max_elements // (8 << n)))


def _fusion_states(m, D1, D2, T, C, rng, count):
    """D1 D2 psi against T C psi, with the random states pushed through as column batches"""
    batch = _batch_size(m.n_v, count)
    worst = 0.0
    for start in range(0, count, batch):
        k = min(batch, count - start)
        psi = np.stack([random_state(m.n_v, rng) for _ in range(k)], axis=1)
        left, right = D1.apply(D2.apply(psi)), T.apply(C.apply(psi))
        worst = max(worst, max(_err(left[:, j], right[:, j]) for j in range(k)))
    return worst


def _gauging_error(m, J=1.0, h=0.7):
    system = gauge_model(m, J, h, g_hat=0.0)
    return coefficient_distance(fixed_hamiltonian(system), hamiltonian(gauged(m), J=h, h=J))


# ----- 1+1d -----
def verify_1d(L, lam=1.0, seed=0, workers=1, n_states=20, dump_path=None):
    m = ising_chain(L)
    rho = m.automorphism("half_translation")
    D = duality_op(m, rho)
    C = condensation_op(m)
    T = translation_op(m, rho, rho)
    eta = symmetry_ops(m)[0]
    cap = get_config().dense_cap

    def kw_representation(rng):
        target = None
        worst = 0.0
        for colour_changed in (False, True):
            got = contract(kw_diagram(L, colour_changed))
            target = kw_matrix(L) if target is None else target
            worst = max(worst, max_abs_diff(got, target))
        return worst

    def structured_vs_diagram(rng):
        dense = structured_to_dense(D)
        return max(max_abs_diff(dense, contract(kw_diagram(L))),
                   max_abs_diff(dense, contract(graph_duality_diagram(m, rho))))

    def fusion_dense(rng):
        _require_dense(L)
        d, t = structured_to_dense(D), structured_to_dense(T)
        return max_abs_diff(d @ d, t @ C.to_dense(cap))

    def fusion_structured(rng):
        _require_state(L)
        return _fusion_states(m, D, D, T, C, rng, n_states)

    def cn_family(rng):
        worst = 0.0
        for n in (0, 1, 2, 3):
            worst = max(worst, max_abs_diff(contract(cn_diagram(L, n)), cn_operator(L, n).to_dense(cap)))
        return worst

    def eta_absorption(rng):
        worst = 0.0
        for _ in range(n_states):
            psi = random_state(L, rng)
            d_psi = D.apply(psi)
            worst = max(worst, _err(D.apply(eta.apply(psi)), d_psi), _err(eta.apply(d_psi), d_psi))
        return worst

    def condensation_absorption(rng):
        coef = absorption_coefficient(m)
        worst = 0.0
        for _ in range(n_states):
            psi = random_state(L, rng)
            d_psi = D.apply(psi)
            worst = max(worst, _err(D.apply(C.apply(psi)), coef * d_psi), _err(C.apply(d_psi), coef * d_psi))
        return worst, {"coefficient": coef}

    def intertwining(rng):
        return _intertwining(m, D, rho, rng)

    def special_states(rng):
        zero = basis_state(L, 0)
        plus = plus_state(L)
        cat = basis_state(L, 0) + basis_state(L, (1 << L) - 1)
        out = D.apply(plus)
        if dump_path:
            dump_state(out, dump_path)
        return max(max_abs_diff(D.apply(zero), plus), max_abs_diff(out, cat),
                   max_abs_diff(D.apply(ghz_state(L, 1)), np.sqrt(2.0) * plus))

    def eigenbasis(rng):
        worst = 0.0
        for psi, d_value, eta_value in duality_eigenbasis_1d(L):
            worst = max(worst, max_abs_diff(D.apply(psi), d_value * psi),
                        max_abs_diff(eta.apply(psi), eta_value * psi))
        return worst

    def non_invertible_parity(rng):
        _require_dense(L)
        dp = structured_to_dense(modified_duality(m))
        t = structured_to_dense(translation_1d(L))
        return max(max_abs_diff(dp @ dp, C.to_dense(cap)), max_abs_diff(dp @ t, t.conj().T @ dp))

    H = deformed_1d(L, 1.0, lam)

    def self_dual_deformation(rng):
        worst = 0.0
        for _ in range(3):
            psi = random_state(L, rng)
            worst = max(worst, _err(D.apply(H.apply(psi)), H.apply(D.apply(psi))))
        return worst

    def exact_ground_states(rng):
        states = [basis_state(L, 0), basis_state(L, (1 << L) - 1), plus_state(L)]
        energies = [expectation(H, psi).real for psi in states]
        residual = max(np.linalg.norm(H.apply(psi) - e * psi) / np.linalg.norm(psi)
                       for psi, e in zip(states, energies))
        return max(residual, max(energies) - min(energies)), {"energy": energies[0]}

    def three_fold_degeneracy(rng):
        _require_dense(L, FULL_DIAG_MAX_QUBITS)
        values = eigh(H.to_dense(cap), eigvals_only=True)
        e_exact = expectation(H, plus_state(L)).real
        gap = values[3] - values[0]
        error = max(values[2] - values[0], abs(e_exact - values[0]))
        if gap <= 1e-8:
            error = max(error, 1.0)
        return error, {"ground_energy": values[0], "gap": gap}

    def gauging(rng):
        return _gauging_error(m)

    checks = [
        ("kw_representation", "contract(KW diagram) = sum_m |(-)^{m_{i-1}+m_i}><m|", "dense", kw_representation),
        ("duality_structured_vs_diagram", "structured D = KW diagram = graph diagram", "structured",
         structured_vs_diagram),
        ("fusion_dense", "D^2 = (1+eta) T", "dense", fusion_dense),
        ("fusion_structured", "D^2 psi = (1+eta) T psi", "structured", fusion_structured),
        ("cn_family", "C_n = 1 + (-1)^n eta", "dense", cn_family),
        ("eta_absorption", "D eta = eta D = D", "structured", eta_absorption),
        ("condensation_absorption", "D C = C D = 2 D", "structured", condensation_absorption),
        ("intertwining", "D X_v = B_rho(v) D, D B_vhat = X_rho(vhat) D", "structured", intertwining),
        ("special_states", "D|0..0> = |+..+>, D|+..+> = |0..0>+|1..1>, D|GHZ+> = sqrt2|+..+>", "dense",
         special_states),
        ("duality_eigenbasis", "D eigenvalues sqrt2, -sqrt2, 0", "dense", eigenbasis),
        ("non_invertible_parity", "(D')^2 = 1+eta, D' T = T^dagger D'", "dense", non_invertible_parity),
        ("deformation_self_dual", "D H_lambda = H_lambda D", "structured", self_dual_deformation),
        ("unitary_gauge", "gauged Ising chain in unitary gauge = dual chain with J <-> h", "dense", gauging),
    ]
    # the exact ground states exist at the self-dual point only, and from four sites on
    if lam == 1.0 and L >= 4:
        checks += [
            ("exact_ground_states", "H_1 |0..0>, |1..1>, |+..+> share one eigenvalue", "structured",
             exact_ground_states),
            ("three_fold_degeneracy", "H_1 has an exactly three-fold ground space", "structured",
             three_fold_degeneracy),
        ]
    report = Report("verify-1d", environment=environment(seed, workers, L=L, **{"lambda": lam}))
    return _run(report, checks, seed, workers)


# ----- 3+1d -----
def verify_3d(Lx, Ly, Lz, lam=1.0, eigensolve=False, seed=0, workers=1, n_states=20, dump_path=None):
    m = gauge3d(Lx, Ly, Lz)
    lat = m.lattice
    ops = lattice_operators(lat)
    n = lat.n_links
    rho = m.automorphism("half_translation")
    D = duality_op(m, rho)
    T = ops.t111()
    few = max(2, n_states // 10)
    half = max(2, n_states // 2)

    def gated(fn):
        def wrapped(rng):
            _require_state(n)
            return fn(rng)
        return wrapped

    @lru_cache(maxsize=None)
    def C():
        return condensation_op(m)

    def fusion(rng):
        return _fusion_states(m, D, D, T, C(), rng, n_states)

    def condensation_square(rng):
        c = C()
        worst = 0.0
        for _ in range(few):
            c_psi = c.apply(random_state(n, rng))
            worst = max(worst, _err(c.apply(c_psi), 4.0 * c_psi))
        return worst

    def condensation_absorption(rng):
        c, coef = C(), absorption_coefficient(m)
        worst = 0.0
        for _ in range(few):
            psi = random_state(n, rng)
            d_psi = D.apply(psi)
            worst = max(worst, _err(D.apply(c.apply(psi)), coef * d_psi), _err(c.apply(d_psi), coef * d_psi))
        return worst, {"coefficient": coef}

    def symmetry_absorption(rng):
        psi = random_state(n, rng)
        d_psi = D.apply(psi)
        worst = 0.0
        for op in ops.planes() + [ops.gauss(s) for s in range(lat.n_sites)]:
            worst = max(worst, _err(D.apply(op.apply(psi)), d_psi))
        return worst

    def intertwining(rng):
        # D B_p = X_{t(p)} D is also the truncated-surface image of a contractible Wilson loop
        return _intertwining(m, D, rho, rng, sample=6)

    def condensation_forms(rng):
        pauli_form, surface_sum, kernel_sum = ops.condensation_pauli_form(), ops.condensation_surface_sum(), C()
        worst = max(coefficient_distance(pauli_form, kernel_sum), coefficient_distance(surface_sum, kernel_sum))
        projector = ops.condensation_projector_op()
        for _ in range(10 if n_states >= 10 else few):
            psi = random_state(n, rng)
            target = surface_sum.apply(psi)
            worst = max(worst, _err(pauli_form.apply(psi), target), _err(projector.apply(psi), target))
        return worst

    def partition_scalar(rng):
        plus = plus_state(n)
        value = np.vdot(plus, C().apply(plus))
        return abs(value - 4.0), {"value": value}

    def toric_orthonormal(rng):
        worst = 0.0
        for a in LABELS:
            ia, va = ops.toric_support(a)
            for b in LABELS:
                ib, vb = ops.toric_support(b)
                common, pa, pb = np.intersect1d(ia, ib, return_indices=True)
                overlap = np.vdot(va[pa], vb[pb]) if common.size else 0.0
                worst = max(worst, abs(overlap - (1.0 if a == b else 0.0)))
        return worst

    def duality_on_toric_states(rng):
        plus = plus_state(n)
        total = np.zeros(1 << n, dtype=np.complex128)
        worst = 0.0
        for xi in LABELS:
            psi = ops.toric_state(xi)
            total += psi
            worst = max(worst, _err(D.apply(psi), plus / np.sqrt(2.0)))
        d_plus = D.apply(plus)
        if dump_path:
            dump_state(d_plus, dump_path)
        return max(worst, _err(d_plus, total / np.sqrt(2.0)))

    def zeta_from_condensation(rng):
        V = lat.n_sites
        return _err(2.0 ** (V / 2) / 2.0 * C().apply(basis_state(n, 0)), ops.zeta_state((0, 0, 0)))

    def membrane_and_loop_gas(rng):
        worst = 0.0
        for zeta in LABELS:
            target = ops.zeta_state(zeta)
            worst = max(worst, _err(ops.membrane_gas_state(zeta), target), _err(ops.loop_gas_state(zeta), target))
        return worst

    def toric_loop_form(rng):
        return max(_err(ops.toric_state_loop_form(xi), ops.toric_state(xi)) for xi in LABELS)

    def two_form_condensation(rng):
        V = lat.n_sites
        plus = plus_state(n)
        target = ops.toric_state((0, 0, 0))
        scale = 2.0 ** V / np.sqrt(2.0)
        return max(_err(scale * ops.two_form_condensation().apply(plus), target),
                   _err(scale * ops.two_form_condensation_op().apply(plus), target))

    def eigenbasis(rng):
        worst = 0.0
        for psi, value in ops.duality_eigenbasis():
            worst = max(worst, _err(D.apply(psi), value * psi))
        return worst

    def parity_relation(rng):
        P, T_inv = ops.parity(), T.inverse()
        worst = 0.0
        for _ in range(half):
            psi = random_state(n, rng)
            worst = max(worst, _err(P.apply(D.apply(P.apply(psi))), D.apply(T_inv.apply(psi))))
        return worst

    def rotation_relation(rng):
        R = ops.rotation()
        R_inv = R.inverse()
        worst = 0.0
        for _ in range(half):
            psi = random_state(n, rng)
            worst = max(worst, _err(R.apply(D.apply(R_inv.apply(psi))), D.apply(psi)))
        return worst

    def higher_quantum_symmetry(rng):
        c = C()
        worst = 0.0
        for closed in (False, True):
            for _ in range(5):
                gamma = random_curve(lat, rng, closed=closed)
                w = ops.wilson(gamma)
                psi = random_state(n, rng)
                worst = max(worst, _err(c.apply(w.apply(psi)), w.apply(ops.higher_condensation(gamma).apply(psi))))
        return worst

    def contractible_higher_symmetry(rng):
        c = C()
        return max(coefficient_distance(ops.higher_condensation(lat.plaquette_boundary(p)), c)
                   for p in range(lat.n_plaquettes))

    def defect_moves(rng):
        H = gauge3d_with_gauss(lat, 1.0, 1.0, 0.0)
        worst = 0.0
        for ell in rng.choice(lat.n_links, size=4, replace=False):
            ell = int(ell)
            gamma_hat = SurfacePath.from_cells(lat, "dual_curve", lat.plaquettes_of_link(ell))
            moved = conjugate_by(H, move_defect(lat, [ell]))
            worst = max(worst, coefficient_distance(defect(lat, 1.0, 1.0, 0.0, gamma_hat), moved))
        return worst

    def deformation_terms(rng):
        count = len(deformation_terms_3d(lat))
        return abs(count - 24 * lat.n_cubes), {"terms": count}

    H_lam = deformed_3d(lat, 1.0, lam)
    nine = list(LABELS) + ["plus"]

    def nine_states(rng):
        energies, residual = [], 0.0
        for label in nine:
            psi = plus_state(n) if label == "plus" else ops.toric_state(label)
            h_psi = H_lam.apply(psi)
            e = np.vdot(psi, h_psi).real / np.vdot(psi, psi).real
            energies.append(e)
            residual = max(residual, np.linalg.norm(h_psi - e * psi) / np.linalg.norm(psi))
        return max(residual, max(energies) - min(energies)), {"energy": energies[0]}

    def ground_energy(rng):
        dim = 1 << n
        op = LinearOperator((dim, dim), matvec=lambda v: H_lam.apply(np.ravel(v)), dtype=np.complex128)
        ncv = get_config().get("eigsh_ncv", 8)
        lowest = eigsh(op, k=1, which="SA", ncv=ncv, tol=1e-8, return_eigenvectors=False)[0].real
        e_nine = expectation(H_lam, plus_state(n)).real
        return max(0.0, e_nine - lowest), {"lowest": lowest, "nine_state_energy": e_nine}

    def gauging(rng):
        system = gauged_gauge3d(lat, J=1.0, h=0.5, g_hat=0.0)
        return coefficient_distance(fixed_hamiltonian(system), hamiltonian(gauged(m), J=0.5, h=1.0))

    checks = [
        ("fusion", "D^2 = C T_111", "lattice", gated(fusion)),
        ("condensation_square", "C^2 = 4 C", "lattice", gated(condensation_square)),
        ("condensation_absorption", "D C = C D = 4 D", "lattice", gated(condensation_absorption)),
        ("symmetry_absorption", "D eta(Sigma) = D G_s = D", "lattice", gated(symmetry_absorption)),
        ("intertwining", "D X_l = B_t(l) D, D B_p = X_t(p) D", "lattice", gated(intertwining)),
        ("condensation_forms", "Pauli product C = 2^-V sum over closed dual surfaces", "lattice",
         gated(condensation_forms)),
        ("partition_scalar", "<+|C|+> = 4", "lattice", gated(partition_scalar)),
        ("toric_orthonormal", "<xi|xi'> = delta", "lattice", gated(toric_orthonormal)),
        ("duality_on_toric_states", "D|xi> = |+>/sqrt2, D|+> = sum_xi |xi>/sqrt2", "lattice",
         gated(duality_on_toric_states)),
        ("zeta_from_condensation", "|zeta=0> = 2^{V/2}/2 C|0..0>", "lattice", gated(zeta_from_condensation)),
        ("membrane_and_loop_gas", "membrane-gas |zeta> = loop-gas |zeta>", "lattice", gated(membrane_and_loop_gas)),
        ("toric_loop_form", "|xi> from Wilson-line projectors", "lattice", gated(toric_loop_form)),
        ("two_form_condensation", "|xi=0> = 2^V/sqrt2 C2|+>", "lattice", gated(two_form_condensation)),
        ("duality_eigenbasis", "D eigenvalues 2, -2, 0 on the toric code states", "lattice", gated(eigenbasis)),
        ("parity_relation", "P D P = D T_111^-1", "lattice", gated(parity_relation)),
        ("higher_quantum_symmetry", "C W(gamma) = W(gamma) C(gamma)", "lattice", gated(higher_quantum_symmetry)),
        ("contractible_higher_symmetry", "C(boundary of p) = C", "lattice", contractible_higher_symmetry),
        ("defect_moves", "H with defect on a dual loop = X_l H X_l", "lattice", defect_moves),
        ("deformation_terms", "24 deformation terms per cube", "lattice", deformation_terms),
        ("unitary_gauge", "gauged gauge theory in unitary gauge = dual model with J <-> h", "lattice", gauging),
    ]
    if lat.Lx == lat.Ly == lat.Lz:
        checks.append(("rotation_relation", "R D R^-1 = D", "lattice", gated(rotation_relation)))
    if lam == 1.0:
        checks.append(("nine_ground_states", "H_1 eigenvalue shared by |xi> and |+>", "lattice", gated(nine_states)))
    if eigensolve and lam == 1.0:
        checks.append(("ground_energy", "no eigenvalue of H_1 below the nine-state energy", "eigensolve",
                       gated(ground_energy)))
    report = Report("verify-3d", environment=environment(seed, workers, lattice=list(lat.dims),
                                                         **{"lambda": lam, "eigensolve": eigensolve}))
    return _run(report, checks, seed, workers)


# ----- generic graph models -----
def _embed_sum(op, n, offset):
    out = OperatorSum(n)
    for c, p in op.combine().terms:
        xs = [offset + q for q in p.x_bits.support()]
        zs = [offset + q for q in p.z_bits.support()]
        out.add_term(c, PauliString.x_string(n, xs) * PauliString.z_string(n, zs))
    return out


def verify_graph(m, seed=0, workers=1, n_states=10, base=None, dump_path=None):
    """Duality checks on any bipartite model; base is the G0 of a product_with_dual model"""
    cfg = get_config()
    rhos = m.reversing_automorphisms()
    search_note = None
    if not rhos:
        try:
            rhos = find_automorphisms(m, REVERSING, limit=4)
        except SearchCapExceeded as e:
            search_note = str(e)
    dense_ok = m.n_v <= min(FULL_DIAG_MAX_QUBITS, cfg.dense_cap)

    def gated(fn):
        def wrapped(rng):
            _require_state(m.n_v)
            return fn(rng)
        return wrapped

    def symmetry(rng):
        H = hamiltonian(m, 1.0, 0.7)
        worst = 0.0
        for eta in symmetry_ops(m):
            if not all(eta.commutes(p) for _, p in H.terms):
                return 1.0
            psi = random_state(m.n_v, rng)
            worst = max(worst, _err(eta.apply(H.apply(psi)), H.apply(eta.apply(psi))))
        return worst, {"kernel_dim": m.kernel_dim}

    checks = [("symmetry_commutes", "[H, eta_a] = 0 for a in ker sigma", "structured", gated(symmetry))]

    for rho in rhos:
        D = duality_op(m, rho)
        tag = rho.name or "rho"

        def intertwining(rng, D=D, rho=rho):
            return _intertwining(m, D, rho, rng)

        def absorption(rng, D=D):
            c, coef = condensation_op(m), absorption_coefficient(m)
            worst = 0.0
            for _ in range(n_states):
                psi = random_state(m.n_v, rng)
                d_psi = D.apply(psi)
                worst = max(worst, _err(D.apply(c.apply(psi)), coef * d_psi), _err(c.apply(d_psi), coef * d_psi))
            return worst, {"coefficient": coef}

        def eta_absorption(rng, D=D):
            psi = random_state(m.n_v, rng)
            d_psi = D.apply(psi)
            return max([_err(D.apply(eta.apply(psi)), d_psi) for eta in symmetry_ops(m)] + [0.0])

        def structured_vs_diagram(rng, D=D, rho=rho):
            return max_abs_diff(structured_to_dense(D), contract(graph_duality_diagram(m, rho)))

        checks += [
            (f"intertwining[{tag}]", "D X_v = B_rho(v) D, D B_vhat = X_rho(vhat) D", "structured", gated(intertwining)),
            (f"condensation_absorption[{tag}]", "D C = C D = 2^{2k+dim ker-|E|+|V|} D", "structured", gated(absorption)),
            (f"eta_absorption[{tag}]", "D eta_a = D", "structured", gated(eta_absorption)),
            (f"structured_vs_diagram[{tag}]", "structured D = graph ZX diagram", "structured", structured_vs_diagram),
        ]

    for rho in rhos:
        for rho_prime in rhos:
            D1, D2 = duality_op(m, rho), duality_op(m, rho_prime)
            T = translation_op(m, rho, rho_prime)
            tag = f"{rho.name or 'rho'},{rho_prime.name or 'rho'}"

            def fusion(rng, D1=D1, D2=D2, T=T):
                c = condensation_op(m)
                if dense_ok:
                    d1, d2, t = structured_to_dense(D1), structured_to_dense(D2), structured_to_dense(T)
                    return max_abs_diff(d1 @ d2, t @ c.to_dense(cfg.dense_cap)), {"mode": "dense"}
                return _fusion_states(m, D1, D2, T, c, rng, n_states), {"mode": "structured"}

            checks.append((f"fusion[{tag}]", "D_rho D_rho' = T_{rho rho'} C", "structured", gated(fusion)))

    if base is not None and rhos:
        D = duality_op(m, rhos[0])

        def swap_fusion(rng):
            c0 = _embed_sum(condensation_op(base), m.n_v, 0)
            c0_bar = _embed_sum(condensation_op(gauged(base)), m.n_v, base.n_v)
            product = c0.product(c0_bar)
            worst = 0.0
            for _ in range(n_states):
                psi = random_state(m.n_v, rng)
                worst = max(worst, _err(D.apply(D.apply(psi)), product.apply(psi)))
            return worst

        checks.append(("swap_fusion", "D^2 = C_0 C-bar_0", "structured", gated(swap_fusion)))

    def gauged_involution(rng):
        return 0.0 if gauged(gauged(m)) == m else 1.0

    def unitary_gauge(rng):
        return _gauging_error(m)

    def automorphism_search(rng):
        mismatches = 0
        detail = {}
        for kind in (REVERSING, PRESERVING):
            found = find_automorphisms(m, kind)
            keys = {(a.perm_v, a.perm_vhat) for a in found}
            named = [a for a in m.automorphisms if a.kind == kind]
            mismatches += sum(1 for a in named if (a.perm_v, a.perm_vhat) not in keys)
            detail[kind] = {"count": len(found), "involutions": sum(1 for a in found if a.is_involution())}
            if m.n_v <= 8 and m.n_vhat <= 8:
                brute = {(a.perm_v, a.perm_vhat) for a in brute_force_automorphisms(m, kind)}
                mismatches += len(brute ^ keys)
                detail[kind]["brute_force"] = len(brute)
        return float(mismatches), detail

    checks += [
        ("gauged_involution", "gauged(gauged(m)) = m", "dense", gauged_involution),
        ("unitary_gauge", "gauged model in unitary gauge = dual model with J <-> h", "dense", unitary_gauge),
        ("automorphism_search", "backtracking search agrees with brute force", "dense", automorphism_search),
    ]

    env = environment(seed, workers, model=m.name, n_v=m.n_v, n_vhat=m.n_vhat,
                      automorphisms=[a.to_dict() for a in rhos])
    if search_note:
        env["automorphism_search"] = search_note
    if dump_path and rhos:
        _require_state(m.n_v)
        dump_state(duality_op(m, rhos[0]).apply(basis_state(m.n_v, 0)), dump_path)
    report = Report("verify-graph", environment=env)
    return _run(report, checks, seed, workers)


# ----- rewrite rules -----
def selftest_rules(seed=0, workers=1, count=3):
    def soundness(rule):
        def fn(rng):
            worst = 0.0
            for d, match in rule_instances(rule, rng, count):
                worst = max(worst, max_abs_diff(contract(d), contract(apply_rule(d, match))))
            return worst, {"instances": count}
        return fn

    checks = [(f"rule[{rule.value}]", f"{rule.value} rewrite preserves the linear map", "rule", soundness(rule))
              for rule in RuleId]
    report = Report("selftest-rules", environment=environment(seed, workers))
    return _run(report, checks, seed, workers)
