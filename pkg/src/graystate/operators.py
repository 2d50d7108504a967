"""Spin-chain operators used to check prepared states.

Level ``|mu>`` of a qudit carries ``S^z = s - mu``, so ``|0>`` is the highest
weight state and a digit sum ``k`` has total ``S^z = s n - k``. Site ``r``
of the chain is qudit ``r``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionCapError, GraystateError
from .simulator import StateVector

DEFAULT_MAX_DENSE = 4096


def spin_matrices(two_s: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(Sx, Sy, Sz)`` for spin ``two_s / 2`` in the level basis."""
    if two_s < 1:
        raise GraystateError(f"two_s must be >= 1, got {two_s}")
    s = two_s / 2
    d = two_s + 1
    m = s - np.arange(d)
    sz = np.diag(m).astype(complex)
    sp = np.zeros((d, d), dtype=complex)
    for mu in range(1, d):
        # S+ |m> = sqrt(s(s+1) - m(m+1)) |m+1>, and m+1 sits at level mu-1
        sp[mu - 1, mu] = np.sqrt(s * (s + 1) - m[mu] * (m[mu] + 1))
    sm = sp.conj().T
    return (sp + sm) / 2, (sp - sm) / 2j, sz


def two_site_coupling(two_s: int) -> np.ndarray:
    """``S_a . S_b`` on two qudits; basis ``|mu>_a |nu>_b`` has index ``mu * d + nu``."""
    return sum(np.kron(a, a) for a in spin_matrices(two_s))


# --------------------------------------------------------------------------
# h(x, s)

def _poly_mul(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for a, pa in enumerate(p):
        for b, qb in enumerate(q):
            out[a + b] += pa * qb
    return out


def poly_eval(coeffs: Sequence, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def coupling_nodes(two_s: int) -> list[Fraction]:
    """Eigenvalues ``x_l = (l(l+1) - 2s(s+1)) / 2`` of ``S_a . S_b`` for ``l = 0..2s``."""
    s = Fraction(two_s, 2)
    return [(Fraction(l * (l + 1)) - 2 * s * (s + 1)) / 2 for l in range(two_s + 1)]


def h_poly(two_s: int) -> list[Fraction]:
    """Exact coefficients (ascending powers of x) of the integrable bond polynomial.

    Interpolates the value ``2 * (1 + 1/2 + ... + 1/l)`` at node ``x_l``, then
    shifts the constant so that ``h(s**2) = 0``.
    """
    nodes = coupling_nodes(two_s)
    coeffs = [Fraction(0)] * (two_s + 1)
    harmonic = Fraction(0)
    for i in range(1, two_s + 1):
        harmonic += Fraction(1, i)
        basis = [Fraction(1)]
        for l, xl in enumerate(nodes):
            if l == i:
                continue
            denom = nodes[i] - xl
            basis = _poly_mul(basis, [-xl / denom, 1 / denom])
        for p, c in enumerate(basis):
            coeffs[p] += 2 * harmonic * c
    s_sq = Fraction(two_s * two_s, 4)
    coeffs[0] -= poly_eval(coeffs, s_sq)
    return coeffs


# --------------------------------------------------------------------------
# Operators as sums of local terms, applied without materialising d^n x d^n

@dataclass
class LocalOperator:
    """``constant * I + sum of one- and two-site terms`` on an n-qudit chain."""

    n: int
    d: int
    one_site: list[tuple[int, np.ndarray]] = field(default_factory=list)
    two_site: list[tuple[int, int, np.ndarray]] = field(default_factory=list)
    constant: complex = 0.0

    def _apply_local(self, t: np.ndarray, sites: Sequence[int], mat: np.ndarray) -> np.ndarray:
        axes = [self.n - r for r in sites]
        moved = np.moveaxis(t, axes, range(len(axes)))
        shape = moved.shape
        out = mat @ moved.reshape(self.d ** len(axes), -1)
        return np.moveaxis(out.reshape(shape), range(len(axes)), axes)

    def apply(self, psi) -> np.ndarray:
        """``H @ psi`` for a vector (or a ``(d**n, m)`` block of vectors)."""
        if isinstance(psi, StateVector):
            psi = psi.amplitudes
        psi = np.asarray(psi, dtype=complex)
        batch = psi.shape[1:]
        t = psi.reshape((self.d,) * self.n + batch)
        out = self.constant * t
        for r, mat in self.one_site:
            out = out + self._apply_local(t, [r], mat)
        for a, b, mat in self.two_site:
            out = out + self._apply_local(t, [a, b], mat)
        return out.reshape(psi.shape)

    def to_dense(self, max_dim: int = DEFAULT_MAX_DENSE) -> np.ndarray:
        size = self.d**self.n
        if size > max_dim:
            raise DimensionCapError(f"dense operator of size {size} exceeds cap {max_dim}")
        return self.apply(np.eye(size, dtype=complex))

    def expectation(self, psi) -> complex:
        if isinstance(psi, StateVector):
            psi = psi.amplitudes
        return complex(np.vdot(psi, self.apply(psi)) / np.vdot(psi, psi))


def _bond_polynomial(two_s: int, coeffs: Sequence) -> np.ndarray:
    x = two_site_coupling(two_s)
    out = np.zeros_like(x)
    power = np.eye(x.shape[0], dtype=complex)
    for c in coeffs:
        out = out + float(c) * power
        power = power @ x
    return out


def _bonds(n: int, periodic: bool) -> list[tuple[int, int]]:
    bonds = [(r, r + 1) for r in range(1, n)]
    if periodic and n >= 2:
        bonds.append((n, 1))
    return bonds


def xxx_hamiltonian(n: int, two_s: int, periodic: bool = True) -> LocalOperator:
    """Integrable spin-s chain: ``sum_i h(S_i . S_{i+1}, s)``."""
    if n < 2:
        raise GraystateError("a chain Hamiltonian needs n >= 2")
    bond = _bond_polynomial(two_s, h_poly(two_s))
    return LocalOperator(n, two_s + 1, two_site=[(a, b, bond) for a, b in _bonds(n, periodic)])


def aklt_hamiltonian(n: int, periodic: bool = True) -> LocalOperator:
    if n < 2:
        raise GraystateError("a chain Hamiltonian needs n >= 2")
    bond = _bond_polynomial(2, [Fraction(1, 3), Fraction(1, 2), Fraction(1, 6)])
    return LocalOperator(n, 3, two_site=[(a, b, bond) for a, b in _bonds(n, periodic)])


def total_sz(n: int, two_s: int) -> LocalOperator:
    sz = spin_matrices(two_s)[2]
    return LocalOperator(n, two_s + 1, one_site=[(r, sz) for r in range(1, n + 1)])


def total_s2(n: int, two_s: int) -> LocalOperator:
    """``(sum_i S_i)^2 = n s(s+1) + 2 sum_{i<j} S_i . S_j``."""
    s = two_s / 2
    x = two_site_coupling(two_s)
    pairs = [(a, b, 2 * x) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    return LocalOperator(n, two_s + 1, two_site=pairs, constant=n * s * (s + 1))


def scaled(op: LocalOperator, factor: float) -> LocalOperator:
    return LocalOperator(
        op.n, op.d,
        [(r, factor * m) for r, m in op.one_site],
        [(a, b, factor * m) for a, b, m in op.two_site],
        factor * op.constant,
    )


def eigenstate_residual(op: LocalOperator, psi, energy: complex) -> float:
    """``||H psi - E psi|| / ||psi||``."""
    if isinstance(psi, StateVector):
        if (psi.n, psi.d) != (op.n, op.d):
            raise GraystateError("state and operator act on different registers")
        psi = psi.amplitudes
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (op.d**op.n,):
        raise GraystateError(f"state has shape {psi.shape}, operator needs {op.d ** op.n}")
    return float(np.linalg.norm(op.apply(psi) - energy * psi) / np.linalg.norm(psi))
