"""Gray gates, their control sets, and the full preparation circuit."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .angles import AngleSchedule
from .compositions import GrayCode, GrayStep, gray_steps
from .errors import GraystateError, LevelBoundError

Control = tuple[int, int]


@dataclass(frozen=True)
class XPower:
    """``X**power`` on qudit ``target``; ``X|mu> = |mu + 1 mod d>``."""

    target: int
    power: int

    def to_dict(self) -> dict:
        return {"kind": "x", "target": self.target, "power": self.power}


@dataclass(frozen=True)
class GrayGate:
    """Givens rotation between ``|m_i, m_j>`` and ``|m_i + 1, m_j - 1>`` on qudits (i, j).

    Acts only on basis states whose digit at each control qudit ``q`` equals
    the paired value ``v``.
    """

    i: int
    j: int
    m_i: int
    m_j: int
    theta: float
    phi: float = 0.0
    controls: tuple[Control, ...] = ()

    def __post_init__(self):
        if self.i == self.j:
            raise LevelBoundError("Gray gate needs i != j")
        qs = [q for q, _ in self.controls]
        if len(set(qs)) != len(qs) or self.i in qs or self.j in qs:
            raise LevelBoundError(f"control qudits {qs} overlap each other or (i, j)")

    def to_dict(self) -> dict:
        return {
            "kind": "gray",
            "i": self.i,
            "j": self.j,
            "m_i": self.m_i,
            "m_j": self.m_j,
            "theta": self.theta,
            "phi": self.phi,
            "controls": [[q, v] for q, v in self.controls],
        }

    def is_identity(self) -> bool:
        return self.theta == 0.0 and self.phi == 0.0


Gate = Union[XPower, GrayGate]


def gate_from_dict(data: dict) -> Gate:
    kind = data.get("kind")
    if kind == "x":
        return XPower(int(data["target"]), int(data["power"]))
    if kind == "gray":
        return GrayGate(
            int(data["i"]), int(data["j"]), int(data["m_i"]), int(data["m_j"]),
            float(data["theta"]), float(data["phi"]),
            tuple((int(q), int(v)) for q, v in data.get("controls", [])),
        )
    raise GraystateError(f"unknown gate kind {kind!r}")


@dataclass(frozen=True)
class Circuit:
    n: int
    d: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        for g in self.gates:
            qs = [g.target] if isinstance(g, XPower) else [g.i, g.j, *(q for q, _ in g.controls)]
            if any(not 1 <= q <= self.n for q in qs):
                raise LevelBoundError(f"gate {g} touches a qudit outside 1..{self.n}")
            if isinstance(g, GrayGate):
                _check_levels(g, self.d)

    @property
    def gray_gates(self) -> list[GrayGate]:
        return [g for g in self.gates if isinstance(g, GrayGate)]

    @property
    def x_gates(self) -> list[XPower]:
        return [g for g in self.gates if isinstance(g, XPower)]

    def to_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "gates": [g.to_dict() for g in self.gates]}

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict) -> "Circuit":
        return cls(int(data["n"]), int(data["d"]),
                   tuple(gate_from_dict(g) for g in data["gates"]))

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        return cls.from_dict(json.loads(text))


def _check_levels(gate: GrayGate, d: int) -> None:
    if not (0 <= gate.m_i <= d - 2 and 1 <= gate.m_j <= d - 1):
        raise LevelBoundError(
            f"need 0 <= m_i <= {d - 2} and 1 <= m_j <= {d - 1}, "
            f"got m_i={gate.m_i}, m_j={gate.m_j}"
        )
    for _, v in gate.controls:
        if not 0 <= v < d:
            raise LevelBoundError(f"control value {v} outside 0..{d - 1}")


# --------------------------------------------------------------------------
# Two-qudit matrices. Basis |mu>_i |nu>_j has index mu * d + nu.

def x_matrix(d: int) -> np.ndarray:
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def givens_matrix(d: int, level: int, theta: float, phi: float) -> np.ndarray:
    """Single-qudit rotation between ``|level>`` and ``|level - 1>``."""
    c, s, e = np.cos(theta), np.sin(theta), np.exp(1j * phi)
    r = np.eye(d, dtype=complex)
    a, b = level, level - 1
    r[a, a] = c
    r[a, b] = -s
    r[b, a] = e * s
    r[b, b] = e * c
    return r


def gray_gate_matrix(gate: GrayGate, d: int) -> np.ndarray:
    """Uncontrolled action of ``gate`` on qudits (i, j) as a d^2 x d^2 matrix."""
    _check_levels(gate, d)
    lo = gate.m_i * d + gate.m_j
    hi = (gate.m_i + 1) * d + (gate.m_j - 1)
    c, s, e = np.cos(gate.theta), np.sin(gate.theta), np.exp(1j * gate.phi)
    u = np.eye(d * d, dtype=complex)
    u[lo, lo] = c
    u[hi, lo] = e * s
    u[hi, hi] = e * c
    u[lo, hi] = -s
    return u


@dataclass(frozen=True)
class ControlledOp:
    """Single-qudit ``matrix`` on ``target`` ("i" or "j"), controlled on the other qudit."""

    target: str
    control_value: int
    matrix: np.ndarray = field(compare=False)

    def two_qudit_matrix(self, d: int) -> np.ndarray:
        u = np.eye(d * d, dtype=complex)
        v = self.control_value
        if self.target == "i":
            idx = [mu * d + v for mu in range(d)]
        else:
            idx = [v * d + nu for nu in range(d)]
        u[np.ix_(idx, idx)] = self.matrix
        return u


def gray_gate_decomposition(gate: GrayGate, d: int) -> list[ControlledOp]:
    """Controlled-X, controlled Givens rotation, controlled-X^dagger (in time order)."""
    _check_levels(gate, d)
    x = x_matrix(d)
    return [
        ControlledOp("i", gate.m_j, x),
        ControlledOp("j", gate.m_i + 1, givens_matrix(d, gate.m_j, gate.theta, gate.phi)),
        ControlledOp("i", gate.m_j, x.conj().T),
    ]


def decomposition_matrix(gate: GrayGate, d: int) -> np.ndarray:
    u = np.eye(d * d, dtype=complex)
    for op in gray_gate_decomposition(gate, d):
        u = op.two_qudit_matrix(d) @ u
    return u


# --------------------------------------------------------------------------
# Controls

@dataclass(frozen=True)
class ControlSchedule:
    """Per-step controls, plus the intermediate sets kept for auditing.

    ``naive[l]`` holds every digit outside (i, j) that is nonzero at step ``l``;
    ``untouched[l]`` is the set it was pruned against; ``restored[l]`` lists
    pruned controls put back because the first ditstring would otherwise be
    hit by the gate; ``controls[l]`` is the final result.
    """

    controls: tuple[tuple[Control, ...], ...]
    naive: tuple[tuple[Control, ...], ...]
    untouched: tuple[frozenset, ...]
    restored: tuple[tuple[Control, ...], ...]
    initial_untouched: frozenset

    def __len__(self) -> int:
        return len(self.controls)


def _hits(m, st: GrayStep, controls) -> bool:
    """Whether a Gray gate for ``st`` with ``controls`` acts nontrivially on ``|m>``."""
    if any(m[q - 1] != v for q, v in controls):
        return False
    pair = (m[st.i - 1], m[st.j - 1])
    return pair in ((st.m_i, st.m_j), (st.m_i + 1, st.m_j - 1))


def control_schedule(code: GrayCode) -> ControlSchedule:
    """Controls for each Gray gate, with redundant controls on untouched digits pruned.

    Controls sit on the nonzero digits outside (i, j). A digit that still has
    its initial nonzero value cannot tell the states built so far apart, so
    its control is dropped. The untouched set starts from the nonzero digits
    of the first ditstring and loses (i, j) at every step after the first;
    the first step prunes against that set minus its own pair.

    That update never removes the pair of the first step, so a digit changed
    only there can be pruned even though the first ditstring differs at it.
    Only the first ditstring can then be misrouted, so each step checks it
    directly and restores the affected controls when needed.
    """
    steps = gray_steps(code)
    m0 = code.entries[0]
    u0 = frozenset(r for r in range(1, code.spec.n + 1) if m0[r - 1] != 0)
    first_pair = {steps[0].i, steps[0].j} if steps else set()
    controls, naive, untouched, restored = [], [], [], []
    u = u0
    for st in steps:
        if st.l > 0:
            u = u - {st.i, st.j}
        prune = u - {st.i, st.j}
        m = code.entries[st.l]
        c = tuple(
            (r, m[r - 1])
            for r in range(1, code.spec.n + 1)
            if r not in (st.i, st.j) and m[r - 1] != 0
        )
        kept = tuple((r, v) for r, v in c if r not in prune)
        back: tuple[Control, ...] = ()
        if st.l > 0 and _hits(m0, st, kept):
            back = tuple((r, v) for r, v in c if r in prune and r in first_pair)
            kept = tuple((r, v) for r, v in c if r not in prune or r in first_pair)
        naive.append(c)
        untouched.append(prune)
        restored.append(back)
        controls.append(kept)
    return ControlSchedule(
        tuple(controls), tuple(naive), tuple(untouched), tuple(restored), u0
    )


def assemble_circuit(
    code: GrayCode,
    schedule: AngleSchedule,
    controls: Optional[Sequence[Sequence[Control]]] = None,
    elide_identity: bool = False,
) -> Circuit:
    """X powers preparing the first ditstring, then one Gray gate per step.

    ``controls`` defaults to the pruned control schedule of ``code``.
    """
    steps = gray_steps(code)
    if len(schedule) != len(steps):
        raise GraystateError(
            f"angle schedule has {len(schedule)} entries, code has {len(steps)} steps"
        )
    if controls is None:
        controls = control_schedule(code).controls
    if len(controls) != len(steps):
        raise GraystateError(f"{len(controls)} control sets for {len(steps)} steps")

    gates: list[Gate] = [
        XPower(r, p) for r, p in enumerate(code.entries[0], start=1) if p != 0
    ]
    for st, th, ph, ctl in zip(steps, schedule.thetas, schedule.phis, controls):
        g = GrayGate(st.i, st.j, st.m_i, st.m_j, float(th), float(ph),
                     tuple((int(q), int(v)) for q, v in ctl))
        if elide_identity and g.is_identity():
            continue
        gates.append(g)
    return Circuit(code.spec.n, code.spec.d, tuple(gates))
