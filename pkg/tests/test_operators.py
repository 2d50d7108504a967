from fractions import Fraction
from functools import reduce

import numpy as np
import pytest

from graystate.errors import DimensionCapError, GraystateError
from graystate.operators import (
    LocalOperator,
    aklt_hamiltonian,
    coupling_nodes,
    eigenstate_residual,
    h_poly,
    poly_eval,
    scaled,
    spin_matrices,
    total_s2,
    total_sz,
    two_site_coupling,
    xxx_hamiltonian,
)
from graystate.simulator import basis_index

H_COEFFS = {
    1: [Fraction(-1, 2), Fraction(2)],
    2: [Fraction(0), Fraction(1, 2), Fraction(-1, 2)],
    3: [Fraction(-3, 4), Fraction(-1, 8), Fraction(1, 27), Fraction(2, 27)],
    4: [Fraction(-1, 2), Fraction(13, 24), Fraction(43, 432), Fraction(-5, 216), Fraction(-1, 144)],
}


def site_op(n, d, r, mat):
    """``mat`` on qudit r; qudit n is the leftmost kron factor."""
    factors = [np.eye(d)] * n
    factors[n - r] = mat
    return reduce(np.kron, factors)


def heisenberg_dense(n, two_s):
    d = two_s + 1
    out = np.zeros((d**n, d**n), dtype=complex)
    for a in range(1, n + 1):
        b = a % n + 1
        for s_mat in spin_matrices(two_s):
            out += site_op(n, d, a, s_mat) @ site_op(n, d, b, s_mat)
    return out


class TestSpin:
    @pytest.mark.parametrize("two_s", [1, 2, 3, 4])
    def test_algebra(self, two_s):
        sx, sy, sz = spin_matrices(two_s)
        s = two_s / 2
        assert np.allclose(sx @ sy - sy @ sx, 1j * sz)
        assert np.allclose(sx @ sx + sy @ sy + sz @ sz, s * (s + 1) * np.eye(two_s + 1))

    def test_level_zero_is_highest_weight(self):
        sz = spin_matrices(2)[2]
        assert np.allclose(np.diag(sz), [1, 0, -1])

    def test_rejects_zero_spin(self):
        with pytest.raises(GraystateError):
            spin_matrices(0)

    @pytest.mark.parametrize("two_s", [1, 2, 3])
    def test_coupling_eigenvalues_are_nodes(self, two_s):
        ev = np.linalg.eigvalsh(two_site_coupling(two_s))
        nodes = sorted(float(x) for x in coupling_nodes(two_s))
        assert np.allclose(sorted(set(np.round(ev, 10))), nodes)


class TestHPoly:
    @pytest.mark.parametrize("two_s", sorted(H_COEFFS))
    def test_table(self, two_s):
        assert h_poly(two_s) == H_COEFFS[two_s]

    @pytest.mark.parametrize("two_s", [1, 2, 3, 4, 5])
    def test_vanishes_at_s_squared(self, two_s):
        assert poly_eval(h_poly(two_s), Fraction(two_s * two_s, 4)) == 0

    @pytest.mark.parametrize("two_s", [1, 2, 3, 4, 5])
    def test_harmonic_gaps(self, two_s):
        h, nodes = h_poly(two_s), coupling_nodes(two_s)
        base = poly_eval(h, nodes[0])
        harmonic = Fraction(0)
        for i in range(1, two_s + 1):
            harmonic += Fraction(1, i)
            assert poly_eval(h, nodes[i]) - base == 2 * harmonic


class TestLocalOperator:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_spin_half_chain(self, n):
        want = 2 * heisenberg_dense(n, 1) - n / 2 * np.eye(2**n)
        if n == 2:
            # both periodic bonds join sites 1 and 2
            assert np.allclose(xxx_hamiltonian(2, 1).to_dense(), want)
        else:
            assert np.allclose(xxx_hamiltonian(n, 1).to_dense(), want)

    def test_total_sz_matches_kron(self):
        n, two_s = 3, 2
        sz = spin_matrices(two_s)[2]
        want = sum(site_op(n, 3, r, sz) for r in range(1, n + 1))
        assert np.allclose(total_sz(n, two_s).to_dense(), want)

    def test_total_sz_on_basis(self):
        op = total_sz(3, 2)
        v = np.zeros(27)
        v[basis_index((2, 1, 0), 3)] = 1
        assert op.expectation(v) == pytest.approx(3 * 1 - 3)

    @pytest.mark.parametrize("n,two_s", [(2, 1), (3, 1), (3, 2), (2, 3)])
    def test_total_s2_spectrum(self, n, two_s):
        ev = np.linalg.eigvalsh(total_s2(n, two_s).to_dense())
        j_max = n * two_s / 2
        allowed = [j * (j + 1) for j in np.arange(j_max % 1, j_max + 1)]
        assert all(min(abs(e - a) for a in allowed) < 1e-10 for e in ev)
        assert max(ev) == pytest.approx(j_max * (j_max + 1))

    def test_apply_batch(self):
        op = xxx_hamiltonian(3, 2)
        rng = np.random.default_rng(0)
        block = rng.normal(size=(27, 4))
        assert np.allclose(op.apply(block), op.to_dense() @ block)

    def test_dense_cap(self):
        with pytest.raises(DimensionCapError):
            total_sz(9, 2).to_dense()

    def test_scaled(self):
        op = LocalOperator(2, 2, [(1, np.eye(2))], [], 1.5)
        assert np.allclose(scaled(op, -2).to_dense(), -2 * op.to_dense())


class TestHamiltonians:
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_aklt_positive_with_unique_ground_state(self, n):
        ev = np.linalg.eigvalsh(aklt_hamiltonian(n).to_dense(max_dim=3**5))
        assert ev[0] == pytest.approx(0, abs=1e-10)
        assert ev[1] > 1e-6

    @pytest.mark.parametrize("two_s", [1, 2, 3])
    def test_xxx_commutes_with_sz(self, two_s):
        n = 3
        h = xxx_hamiltonian(n, two_s).to_dense()
        sz = total_sz(n, two_s).to_dense()
        assert np.allclose(h @ sz, sz @ h)

    @pytest.mark.parametrize("two_s", [1, 2, 3])
    def test_polarized_state_has_zero_energy(self, two_s):
        op = xxx_hamiltonian(3, two_s)
        v = np.zeros((two_s + 1) ** 3)
        v[0] = 1
        assert eigenstate_residual(op, v, 0.0) < 1e-12

    def test_open_chain(self):
        assert len(xxx_hamiltonian(4, 1, periodic=False).two_site) == 3
        assert len(xxx_hamiltonian(4, 1).two_site) == 4

    def test_single_site_rejected(self):
        with pytest.raises(GraystateError):
            xxx_hamiltonian(1, 1)
        with pytest.raises(GraystateError):
            aklt_hamiltonian(1)

    def test_residual_shape_check(self):
        with pytest.raises(GraystateError):
            eigenstate_residual(total_sz(2, 1), np.ones(3), 0.0)
