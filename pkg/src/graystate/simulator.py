"""Dense statevector simulation of qudit circuits.

Basis index ``b = sum_r m_r * d**(r - 1)``: qudit 1 is the least significant
digit. Reshaped to a ``(d,) * n`` tensor in C order, qudit ``r`` lives on axis
``n - r``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .circuit import Circuit, Gate, GrayGate, XPower
from .compositions import display
from .errors import DimensionCapError, GraystateError, LevelBoundError

DEFAULT_MAX_AMPLITUDES = 2**26


@dataclass
class StateVector:
    n: int
    d: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (self.d**self.n,):
            raise GraystateError(
                f"expected {self.d**self.n} amplitudes, got {self.amplitudes.shape}"
            )

    @property
    def tensor(self) -> np.ndarray:
        """A writable view with one axis per qudit (axis ``n - r`` is qudit ``r``)."""
        return self.amplitudes.reshape((self.d,) * self.n)

    def axis(self, r: int) -> int:
        return self.n - r

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.d, self.amplitudes.copy())

    def rows(self, threshold: float = 1e-12) -> list[tuple[str, float, float]]:
        out = []
        for b in np.flatnonzero(np.abs(self.amplitudes) > threshold):
            amp = self.amplitudes[b]
            out.append((display(ditstring_of(int(b), self.n, self.d)),
                        float(amp.real), float(amp.imag)))
        return out

    def to_json(self, threshold: float = 1e-12) -> str:
        return json.dumps({
            "n": self.n,
            "d": self.d,
            "amplitudes": [{"m": m, "re": re, "im": im} for m, re, im in self.rows(threshold)],
        })

    def to_csv(self, threshold: float = 1e-12) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["ditstring", "re", "im"])
        writer.writerows((m, repr(re), repr(im)) for m, re, im in self.rows(threshold))
        return buf.getvalue()


def basis_index(m: Sequence[int], d: int) -> int:
    b = 0
    for r in range(len(m) - 1, -1, -1):
        if not 0 <= m[r] < d:
            raise LevelBoundError(f"digit {m[r]} out of range for d={d}")
        b = b * d + m[r]
    return b


def ditstring_of(b: int, n: int, d: int) -> tuple[int, ...]:
    m = []
    for _ in range(n):
        b, digit = divmod(b, d)
        m.append(digit)
    return tuple(m)


def zero_state(n: int, d: int, max_amplitudes: int = DEFAULT_MAX_AMPLITUDES) -> StateVector:
    if n < 1 or d < 2:
        raise GraystateError(f"need n >= 1 and d >= 2, got n={n}, d={d}")
    size = d**n
    if size > max_amplitudes:
        raise DimensionCapError(f"d**n = {size} exceeds cap {max_amplitudes}")
    amps = np.zeros(size, dtype=complex)
    amps[0] = 1.0
    return StateVector(n, d, amps)


def _check_qudit(state: StateVector, r: int) -> None:
    if not 1 <= r <= state.n:
        raise LevelBoundError(f"qudit {r} out of range 1..{state.n}")


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Apply ``gate`` in place and return ``state``."""
    t = state.tensor
    if isinstance(gate, XPower):
        _check_qudit(state, gate.target)
        p = gate.power % state.d
        if p:
            ax = state.axis(gate.target)
            t[...] = np.roll(t, p, axis=ax)
        return state
    if not isinstance(gate, GrayGate):
        raise GraystateError(f"unknown gate {gate!r}")

    d = state.d
    for r in (gate.i, gate.j, *(q for q, _ in gate.controls)):
        _check_qudit(state, r)
    if not (0 <= gate.m_i <= d - 2 and 1 <= gate.m_j <= d - 1):
        raise LevelBoundError(f"levels (m_i={gate.m_i}, m_j={gate.m_j}) invalid for d={d}")
    base: list = [slice(None)] * state.n
    for q, v in gate.controls:
        if not 0 <= v < d:
            raise LevelBoundError(f"control value {v} out of range for d={d}")
        base[state.axis(q)] = v
    lo = list(base)
    hi = list(base)
    lo[state.axis(gate.i)], lo[state.axis(gate.j)] = gate.m_i, gate.m_j
    hi[state.axis(gate.i)], hi[state.axis(gate.j)] = gate.m_i + 1, gate.m_j - 1
    lo, hi = tuple(lo), tuple(hi)

    c, s = np.cos(gate.theta), np.sin(gate.theta)
    phase = np.exp(1j * gate.phi)
    a = t[lo].copy()
    b = t[hi].copy()
    t[lo] = c * a - s * b
    t[hi] = phase * (s * a + c * b)
    return state


def run(circuit: Circuit, max_amplitudes: int = DEFAULT_MAX_AMPLITUDES) -> StateVector:
    state = zero_state(circuit.n, circuit.d, max_amplitudes)
    return run_on(state, circuit.gates)


def run_on(state: StateVector, gates: Iterable[Gate]) -> StateVector:
    for g in gates:
        apply_gate(state, g)
    return state


def amplitude_of(state: StateVector, m: Sequence[int]) -> complex:
    if len(m) != state.n:
        raise LevelBoundError(f"ditstring has {len(m)} digits, expected {state.n}")
    return complex(state.amplitudes[basis_index(m, state.d)])


def fidelity(a: StateVector, b: StateVector) -> float:
    """``|<a|b>|`` for two states on the same register."""
    if (a.n, a.d) != (b.n, b.d):
        raise GraystateError(f"shape mismatch: (n={a.n}, d={a.d}) vs (n={b.n}, d={b.d})")
    return float(min(1.0, abs(np.vdot(a.amplitudes, b.amplitudes))))


def embed(n: int, d: int, entries: Sequence[Sequence[int]], amps) -> StateVector:
    """Statevector with ``amps[l]`` on basis state ``entries[l]``, zero elsewhere."""
    out = np.zeros(d**n, dtype=complex)
    for m, a in zip(entries, amps):
        out[basis_index(m, d)] = a
    return StateVector(n, d, out)
