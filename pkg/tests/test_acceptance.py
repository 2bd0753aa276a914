"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]`` / ``[FAIL]`` line, visible without
``-s``, before asserting.
"""

import json
import time

import numpy as np
import pytest

from qbsic import io
from qbsic.cli import main
from qbsic.definetti import Mixture, exchangeability_deviation, extend, posterior_trajectory, sample_outcomes, simulate_tomography
from qbsic.exceptions import ParameterError
from qbsic.qbrep import (
    GeneralizedParams,
    conditional_matrix,
    dimension_bounds,
    general_rule,
    prob_to_rho,
    rho_to_prob,
    total_probability,
    urgleichung,
    urgleichung_unitary,
    validity_check,
)
from qbsic.qcore import basis_povm, cnot, ket, projector, random_density, random_pure, random_unitary, wigner_cycle
from qbsic.scenarios import cega_table, epr_joint, exhaustive_search, max_entangled, parity_check, random_eigenbasis
from qbsic.sic import frame_potential, frame_potential_bound, orbit, tetrahedron_fiducial, verify_sic


@pytest.fixture
def verdict(capsys):
    def report(number, title, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] AC{number:<2} {title}: {detail}")
        assert ok, f"AC{number} {title}: {detail}"
    return report


def _cli(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, json.loads(capsys.readouterr().out.strip())


def test_ac01_sic_search(verdict, capsys, tmp_path):
    lines, ok = [], True
    for d in range(2, 8):
        out = tmp_path / f"fid{d}.json"
        start = time.perf_counter()
        code, rep = _cli(capsys, "find-sic", "--d", d, "--restarts", 10, "--seed", 0,
                         "--tol", 1e-10, "--out", out)
        elapsed = time.perf_counter() - start
        fid = io.validate_schema(out, "fiducial")
        report = verify_sic(orbit(fid), 1e-10)
        gap = abs(frame_potential(fid) - frame_potential_bound(d))
        good = code == 0 and report.passed and elapsed < 60 and gap <= 1e-10
        ok &= good
        lines.append(f"d={d} dev={report.max_overlap_deviation:.1e} gap={gap:.1e} "
                     f"t={elapsed:.2f}s")
    verdict(1, "SIC search d=2..7", ok, "; ".join(lines))


def test_ac02_tetrahedron(verdict):
    rep = verify_sic(orbit(tetrahedron_fiducial()), 1e-10)
    ok = rep.passed and rep.max_overlap_deviation <= 1e-12
    verdict(2, "analytic d=2 fiducial", ok, f"max_overlap_deviation={rep.max_overlap_deviation:.2e}")


def test_ac03_round_trip(verdict, sic_for):
    worst = 0.0
    for d in range(2, 7):
        sic = sic_for(d)
        rng = np.random.default_rng(300 + d)
        for _ in range(100):
            rho = random_density(d, rng)
            worst = max(worst, float(np.max(np.abs(prob_to_rho(rho_to_prob(rho, sic), sic) - rho))))
    verdict(3, "round trip d=2..6", worst <= 1e-12, f"max entry error {worst:.2e}")


def test_ac04_urgleichung(verdict, sic_for):
    worst_born = worst_unitary = 0.0
    for d in (2, 3, 4):
        sic = sic_for(d)
        rng = np.random.default_rng(400 + d)
        for _ in range(1000):
            rho = random_density(d, rng)
            ground = basis_povm(random_unitary(d, rng).T)
            p = rho_to_prob(rho, sic)
            ltp = total_probability(p, conditional_matrix(sic, ground))
            direct = np.einsum("ab,jba->j", rho, ground).real
            worst_born = max(worst_born, float(np.max(np.abs((d + 1) * ltp - 1 - direct))))
            u = random_unitary(d, rng)
            q = urgleichung_unitary(p, u, sic)
            evolved = rho_to_prob(u.conj().T @ rho @ u, sic)
            worst_unitary = max(worst_unitary, float(np.max(np.abs(q - evolved))))
    ok = worst_born <= 1e-12 and worst_unitary <= 1e-12
    verdict(4, "urgleichung exactness", ok,
            f"ONB max err {worst_born:.2e}, unitary max err {worst_unitary:.2e}")


def test_ac05_generalized_rule(verdict, sic_for):
    rng = np.random.default_rng(5)
    classical_exact = True
    for d in range(2, 6):
        params = GeneralizedParams.from_qd(0, d)
        for _ in range(50):
            p = rng.dirichlet(np.ones(d))
            r = rng.dirichlet(np.ones(4), size=d).T
            classical_exact &= general_rule(params, p, r).tobytes() == (r @ p).tobytes()
    worst_q2 = 0.0
    for d in (2, 3, 4):
        sic = sic_for(d)
        params = GeneralizedParams.from_qd(2, d)
        for _ in range(50):
            p = rho_to_prob(random_density(d, rng), sic)
            r = conditional_matrix(sic, basis_povm(random_unitary(d, rng).T))
            diff = np.abs(general_rule(params, p, r) - urgleichung(p, r, d).q_of_d)
            worst_q2 = max(worst_q2, float(np.max(diff)))
    rejections_ok = True
    for q in range(7):
        for d in range(2, 8):
            for n in range(1, 200):
                valid = n == q * d * (d - 1) // 2 + d
                try:
                    GeneralizedParams(q, d, n)
                    accepted = True
                except ParameterError:
                    accepted = False
                rejections_ok &= accepted == valid
    ok = classical_exact and worst_q2 <= 1e-15 and rejections_ok
    verdict(5, "generalized rule", ok,
            f"q=0 bit-exact={classical_exact}, q=2 max diff {worst_q2:.1e}, "
            f"n-consistency enforced={rejections_ok}")


def test_ac06_validity_region(verdict, sic_for):
    det_rejected = True
    for d in range(2, 7):
        p = np.zeros(d * d)
        p[0] = 1
        v = validity_check(p, sic_for(d))
        det_rejected &= (not v.valid) and v.min_eigenvalue < 0
    accepted = True
    outside = 0
    for d in (2, 3, 4):
        sic = sic_for(d)
        b = dimension_bounds(d)
        rng = np.random.default_rng(600 + d)
        for _ in range(10_000):
            rho = random_density(d, rng)
            p = rho_to_prob(rho, sic)
            accepted &= validity_check(p, sic).valid
            ltp = total_probability(p, conditional_matrix(sic, basis_povm(random_unitary(d, rng).T)))
            outside += int(np.any(ltp < b.p_min - 1e-10) or np.any(ltp > b.p_max + 1e-10))
    ok = det_rejected and accepted and outside == 0
    verdict(6, "validity region", ok,
            f"deterministic rejected d=2..6: {det_rejected}; valid states accepted: {accepted}; "
            f"LTP out of bounds: {outside}/30000")


def test_ac07_kochen_specker(verdict):
    start = time.perf_counter()
    parity = parity_check(cega_table())
    search = exhaustive_search(cega_table())
    elapsed = time.perf_counter() - start
    ok = (parity.contradiction and search.satisfying_count == 0
          and search.total == 262_144 and elapsed < 5)
    verdict(7, "CEGA parity + exhaustive search", ok,
            f"contradiction={parity.contradiction}, {search.satisfying_count}/{search.total} "
            f"satisfying, {elapsed:.2f}s")


def test_ac08_epr(verdict):
    rng = np.random.default_rng(8)
    pair = max_entangled(4)
    diag_dev = off_mass = 0.0
    for _ in range(50):
        joint = epr_joint(random_eigenbasis(4, rng), pair)
        diag_dev = max(diag_dev, float(np.max(np.abs(np.diag(joint) - 0.25))))
        off_mass = max(off_mass, float(joint[~np.eye(4, dtype=bool)].sum()))
    ok = diag_dev <= 1e-12 and off_mass <= 1e-12
    verdict(8, "EPR transpose correlations d=4", ok,
            f"diag dev {diag_dev:.2e}, off-diagonal mass {off_mass:.2e}")


def test_ac09_wigner(verdict):
    rng = np.random.default_rng(9)
    worst = 0.0
    for df, ds in ((2, 2), (2, 3), (3, 3)):
        for _ in range(100):
            out = wigner_cycle(random_density(df, rng), random_pure(ds, rng),
                               random_unitary(df * ds, rng))
            worst = max(worst, out.reversal_distance)
    plus = (ket(0, 2) + ket(1, 2)) / np.sqrt(2)
    bell = wigner_cycle(projector(ket(0, 2)), plus, cnot())
    marg = max(float(np.max(np.abs(bell.friend_marginal - np.eye(2) / 2))),
               float(np.max(np.abs(bell.system_marginal - np.eye(2) / 2))))
    ok = worst <= 1e-12 and marg <= 1e-12
    verdict(9, "Wigner cycle", ok, f"max reversal distance {worst:.2e}, CNOT marginal dev {marg:.2e}")


def test_ac10_definetti(verdict, sic_for):
    rng = np.random.default_rng(10)
    perm_dev = 0.0
    for n in (1, 2, 3):
        m = Mixture(np.array([0.4, 0.6]), np.array([random_density(2, rng), random_density(2, rng)]))
        perm_dev = max(perm_dev, exchangeability_deviation(extend(m, n), 2, n))
    sic = sic_for(2)
    assert verify_sic(sic).passed
    m = Mixture(np.array([0.5, 0.5]), np.array([projector(ket(0, 2)), projector(ket(1, 2))]))
    wins = sum(simulate_tomography(0, m, sic.effects, 200, seed=s)[-1, 0] >= 0.99
               for s in range(20))
    order_dev = 0.0
    for s in range(20):
        outcomes = sample_outcomes(m.states[0], sic.effects, 200, seed=s)
        a = posterior_trajectory(m, sic.effects, outcomes)[-1]
        b = posterior_trajectory(m, sic.effects, rng.permutation(outcomes))[-1]
        order_dev = max(order_dev, float(np.max(np.abs(a - b))))
    ok = perm_dev <= 1e-10 and wins >= 19 and order_dev <= 1e-12
    verdict(10, "de Finetti", ok,
            f"permutation dev {perm_dev:.1e}, posterior>=0.99 in {wins}/20 seeds, "
            f"order dev {order_dev:.1e}")


def test_ac11_determinism(verdict, capsys, tmp_path):
    rng = np.random.default_rng(11)
    rho = tmp_path / "rho.json"
    io.write_json(rho, io.encode_matrix(random_density(2, rng)))
    fid = tmp_path / "fid.json"
    io.write_json(fid, io.encode_fiducial(tetrahedron_fiducial()))
    p = tmp_path / "p.json"
    io.write_json(p, io.encode_probvector(np.full(4, 0.25), 2))
    commands = [
        ["find-sic", "--d", "5"],
        ["verify-sic", "--in", fid],
        ["rho2p", "--in", rho],
        ["p2rho", "--in", p],
        ["validity", "--in", p],
        ["urgleichung", "--d", "2", "--state", "uniform"],
        ["evolve", "--in", p],
        ["general-rule", "--q", "2", "--d", "3"],
        ["ks-check"],
        ["epr"],
        ["wigner"],
        ["definetti-sim"],
    ]
    mismatched = []
    for argv in commands:
        blobs = []
        for k in range(2):
            out = tmp_path / f"{argv[0]}-{k}.json"
            code, _ = _cli(capsys, *argv, "--seed", 99, "--out", out)
            blobs.append((code, out.read_bytes()))
        if blobs[0] != blobs[1] or blobs[0][0] != 0:
            mismatched.append(argv[0])
    verdict(11, "CLI determinism", not mismatched,
            f"{len(commands) - len(mismatched)}/{len(commands)} subcommands byte-identical"
            + (f"; mismatched: {mismatched}" if mismatched else ""))
