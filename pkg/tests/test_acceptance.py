"""Acceptance criteria 1-11, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in
the terminal summary.
"""

import time
import warnings
from fractions import Fraction
from math import comb, pi, sqrt, tan

import numpy as np

from bethe_oracle import solve_bethe
from graystate.angles import AngleSchedule, angles_complex, angles_real, reconstruct_amplitudes
from graystate.circuit import (
    GrayGate,
    XPower,
    assemble_circuit,
    control_schedule,
    decomposition_matrix,
    gray_gate_matrix,
)
from graystate.compositions import (
    CompositionSpec,
    GrayCode,
    dimension,
    enumerate_sector,
    verify_gray_property,
    walsh_gray_code,
    warnsdorff_gray_code,
)
from graystate.operators import (
    aklt_hamiltonian,
    eigenstate_residual,
    h_poly,
    poly_eval,
    scaled,
    total_s2,
    total_sz,
    xxx_hamiltonian,
)
from graystate.pipeline import prepare
from graystate.simulator import amplitude_of, run
from graystate.states import (
    BetheRoots,
    aklt_amplitudes,
    bethe_amplitudes,
    bethe_energy,
    bethe_residual,
    dicke_amplitudes,
)

WORKED_CODE = ((2, 1, 0), (1, 2, 0), (0, 2, 1), (1, 1, 1), (2, 0, 1), (1, 0, 2), (0, 1, 2))

H_COEFFS = {
    1: [Fraction(-1, 2), Fraction(2)],
    2: [Fraction(0), Fraction(1, 2), Fraction(-1, 2)],
    3: [Fraction(-3, 4), Fraction(-1, 8), Fraction(1, 27), Fraction(2, 27)],
    4: [Fraction(-1, 2), Fraction(13, 24), Fraction(43, 432), Fraction(-5, 216), Fraction(-1, 144)],
}


def _all_specs(max_n, two_s_values):
    for n in range(1, max_n + 1):
        for two_s in two_s_values:
            for k in range(two_s * n + 1):
                yield CompositionSpec(n, k, two_s)


def test_criterion_01_walsh_canonical(acceptance):
    t0 = time.perf_counter()
    code = walsh_gray_code(CompositionSpec(3, 3, 2))
    elapsed = time.perf_counter() - t0
    ok = code.entries == WORKED_CODE and elapsed < 0.1
    acceptance(1, "Walsh code for (3,3,s=1) equals the canonical table", ok, f"{elapsed:.4f} s")


def test_criterion_02_completeness_sweep(acceptance):
    t0 = time.perf_counter()
    bad = []
    count = 0
    for spec in _all_specs(6, (1, 2, 3, 4)):
        brute = enumerate_sector(spec)
        dim = dimension(spec)
        for code in (walsh_gray_code(spec), warnsdorff_gray_code(spec)):
            count += 1
            if not (verify_gray_property(code) and len(code) == dim == len(brute)
                    and set(code.entries) == set(brute)):
                bad.append((spec, code.entries[:3]))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 60
    acceptance(2, "both generators valid and complete for n<=6, 2s<=4", ok,
               f"{count} codes, {len(bad)} bad, {elapsed:.1f} s")


def test_criterion_03_gate_correctness(acceptance):
    rng = np.random.default_rng(3)
    worst_unitary = worst_decomp = 0.0
    cases = 0
    for d in (2, 3, 4, 5):
        for m_i in range(d - 1):
            for m_j in range(1, d):
                for _ in range(20):
                    theta, phi = rng.uniform(-2 * pi, 2 * pi, size=2)
                    g = GrayGate(1, 2, m_i, m_j, theta, phi)
                    u = gray_gate_matrix(g, d)
                    eye = np.eye(d * d)
                    worst_unitary = max(worst_unitary, np.max(np.abs(u.conj().T @ u - eye)))
                    worst_decomp = max(worst_decomp, np.max(np.abs(u - decomposition_matrix(g, d))))
                    cases += 1
    ok = worst_unitary <= 1e-13 and worst_decomp <= 1e-13
    acceptance(3, "Gray gate unitary and equal to its three-gate decomposition", ok,
               f"{cases} cases, unitarity {worst_unitary:.1e}, decomposition {worst_decomp:.1e}")


def test_criterion_04_worked_example(acceptance):
    spec = CompositionSpec(3, 3, 2)
    code = GrayCode(spec, WORKED_CODE)
    thetas = np.array([0.3, 0.7, 1.1, 0.2, 0.9, 1.4])
    schedule = AngleSchedule(thetas, np.zeros(6))
    circuit = assemble_circuit(code, schedule)

    x_gates = [g for g in circuit.gates if isinstance(g, XPower)]
    grays = circuit.gray_gates
    pairs = [(g.i, g.j) for g in grays]
    levels = [(g.m_i, g.m_j) for g in grays]
    ctrls = [g.controls for g in grays]
    structure_ok = (
        x_gates == [XPower(1, 2), XPower(2, 1)]
        and circuit.gates[:2] == tuple(x_gates)
        and pairs == [(2, 1), (3, 1), (1, 2), (1, 2), (3, 1), (2, 1)]
        and levels == [(1, 2), (0, 1), (0, 2), (1, 1), (1, 2), (0, 1)]
        and ctrls == [(), (), ((3, 1),), ((3, 1),), (), ((3, 2),)]
        and control_schedule(code).controls == tuple(ctrls)
    )

    c, s = np.cos(thetas), np.sin(thetas)
    expected = [np.prod(s[:l]) * c[l] for l in range(6)] + [np.prod(s)]
    state = run(circuit)
    got = np.array([amplitude_of(state, m) for m in WORKED_CODE])
    err = float(np.max(np.abs(got - expected)))
    leak = 1 - float(np.sum(np.abs(got) ** 2))
    ok = structure_ok and err <= 1e-12 and abs(leak) <= 1e-12
    acceptance(4, "worked example circuit structure and closed-form amplitudes", ok,
               f"structure {'ok' if structure_ok else 'mismatch'}, max error {err:.1e}")


def _random_specs(rng, count, cap=2**16):
    specs = []
    while len(specs) < count:
        two_s = int(rng.integers(1, 5))
        d = two_s + 1
        n = int(rng.integers(1, 17))
        if d**n > cap:
            continue
        k = int(rng.integers(0, two_s * n + 1))
        specs.append(CompositionSpec(n, k, two_s))
    return specs


def test_criterion_05_generic_fidelity(acceptance):
    rng = np.random.default_rng(5)
    t0 = time.perf_counter()
    worst = 1.0
    runs = 0
    for kind in ("real", "complex"):
        for spec in _random_specs(rng, 100):
            D = dimension(spec)
            a = rng.normal(size=D)
            if kind == "complex":
                a = a + 1j * rng.normal(size=D)
            a = a / np.linalg.norm(a)
            worst = min(worst, prepare(spec, a).fidelity)
            runs += 1
    elapsed = time.perf_counter() - t0
    ok = worst >= 1 - 1e-10 and elapsed < 300 and runs == 200
    acceptance(5, "random real and complex states prepared with high fidelity", ok,
               f"{runs} states, min fidelity 1-{1 - worst:.1e}, {elapsed:.1f} s")


def test_criterion_06_pruning_soundness(acceptance):
    rng = np.random.default_rng(6)
    worst = 0.0
    cases = 0
    for spec in _all_specs(4, (1, 2, 3)):
        D = dimension(spec)
        for code in (walsh_gray_code(spec), warnsdorff_gray_code(spec)):
            a = rng.normal(size=D) + 1j * rng.normal(size=D)
            a /= np.linalg.norm(a)
            pruned = prepare(spec, a, code).state.amplitudes
            naive = prepare(spec, a, code, naive_controls=True).state.amplitudes
            worst = max(worst, float(np.max(np.abs(pruned - naive))))
            cases += 1
    ok = worst <= 1e-12
    acceptance(6, "pruned controls give the same state as naive controls", ok,
               f"{cases} circuits, max difference {worst:.1e}")


def test_criterion_07_aklt(acceptance):
    t0 = time.perf_counter()
    worst_h = worst_sz = 0.0
    for n in (3, 4, 5, 6):
        spec = CompositionSpec(n, n, 2)
        code = walsh_gray_code(spec)
        psi = prepare(spec, aklt_amplitudes(n, code.entries), code).state
        worst_h = max(worst_h, eigenstate_residual(aklt_hamiltonian(n), psi, 0.0))
        worst_sz = max(worst_sz, abs(total_sz(n, 2).expectation(psi)))
    elapsed = time.perf_counter() - t0
    ok = worst_h <= 1e-9 and worst_sz <= 1e-10 and elapsed < 30
    acceptance(7, "AKLT state annihilated by H_AKLT with zero magnetization, n=3..6", ok,
               f"|H psi| {worst_h:.1e}, <Sz> {worst_sz:.1e}, {elapsed:.1f} s")


def test_criterion_08_dicke(acceptance):
    worst_res = worst_uniform = 0.0
    cases = 0
    for spec in _all_specs(4, (1, 2, 3, 4)):
        code = walsh_gray_code(spec)
        psi = prepare(spec, dicke_amplitudes(spec, code.entries), code).state
        s, n = spec.s, spec.n
        energy = -s * n * (s * n + 1)
        op = scaled(total_s2(n, spec.two_s), -1.0)
        worst_res = max(worst_res, eigenstate_residual(op, psi, energy))
        if spec.two_s == 1:
            target = 1 / sqrt(comb(n, spec.k))
            amps = np.array([amplitude_of(psi, m) for m in code.entries])
            worst_uniform = max(worst_uniform, float(np.max(np.abs(amps - target))))
        cases += 1
    ok = worst_res <= 1e-9 and worst_uniform <= 1e-12
    acceptance(8, "Dicke states are -S^2 eigenstates; s=1/2 amplitudes uniform", ok,
               f"{cases} sectors, residual {worst_res:.1e}, uniformity {worst_uniform:.1e}")


def test_criterion_09_bethe(acceptance):
    t0 = time.perf_counter()
    worst_k1 = 0.0
    k1_cases = 0
    for n in (3, 4):
        for two_s in (1, 2, 3):
            s = two_s / 2
            spec = CompositionSpec(n, 1, two_s)
            op = xxx_hamiltonian(n, two_s)
            for q in range(1, n):
                roots = BetheRoots(spec, [s / tan(pi * q / n)])
                psi = prepare(spec, bethe_amplitudes(spec, roots)).state
                worst_k1 = max(worst_k1, eigenstate_residual(op, psi, bethe_energy(roots)))
                k1_cases += 1

    worst_eq = worst_state = worst_spec = 0.0
    k2_cases = 0
    empty = []
    for n, two_s in ((3, 2), (4, 1), (3, 3)):
        spec = CompositionSpec(n, 2, two_s)
        op = xxx_hamiltonian(n, two_s)
        spectrum = np.linalg.eigvalsh(op.to_dense())
        solutions = solve_bethe(n, 2, two_s)
        if not solutions:
            empty.append((n, two_s))
        for u in solutions:
            roots = BetheRoots(spec, u)
            with warnings.catch_warnings():
                warnings.simplefilter("error")
                energy = bethe_energy(roots)
            psi = prepare(spec, bethe_amplitudes(spec, roots)).state
            worst_eq = max(worst_eq, float(np.max(bethe_residual(roots))))
            worst_state = max(worst_state, eigenstate_residual(op, psi, energy))
            worst_spec = max(worst_spec, float(np.min(np.abs(spectrum - energy))))
            k2_cases += 1
    elapsed = time.perf_counter() - t0
    ok = (worst_k1 <= 1e-8 and not empty and worst_eq <= 1e-9 and worst_state <= 1e-6
          and worst_spec <= 1e-8 and elapsed < 120)
    acceptance(9, "Bethe states are eigenstates of H(s) (k=1 closed form, k=2 Newton roots)", ok,
               f"k=1: {k1_cases} states, residual {worst_k1:.1e}; k=2: {k2_cases} root sets, "
               f"equations {worst_eq:.1e}, state {worst_state:.1e}, spectrum {worst_spec:.1e}; "
               f"{elapsed:.1f} s")


def test_criterion_10_h_table(acceptance):
    rows_ok = all(h_poly(two_s) == row for two_s, row in H_COEFFS.items())
    zero_ok = all(poly_eval(h_poly(two_s), Fraction(two_s * two_s, 4)) == 0 for two_s in (1, 2, 3, 4))
    acceptance(10, "h(x,s) coefficients match the table exactly and h(s^2,s)=0", rows_ok and zero_ok)


def test_criterion_11_angle_roundtrip(acceptance):
    rng = np.random.default_rng(11)
    worst = 0.0
    for D in (1, 2, 3, 7, 10, 100, 500, 1000):
        for _ in range(5):
            real = rng.normal(size=D)
            real /= np.linalg.norm(real)
            sched = angles_real(real)
            worst = max(worst, float(np.max(np.abs(reconstruct_amplitudes(sched, D) / sched.rescale - real))))
            cplx = rng.normal(size=D) + 1j * rng.normal(size=D)
            cplx /= np.linalg.norm(cplx)
            sched = angles_complex(cplx)
            worst = max(worst, float(np.max(np.abs(reconstruct_amplitudes(sched, D) / sched.rescale - cplx))))
    ok = worst <= 1e-12
    acceptance(11, "angles reproduce their amplitudes for D up to 1000", ok, f"max error {worst:.1e}")
