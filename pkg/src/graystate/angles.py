"""Rotation angles that build an amplitude list one Gray-code entry at a time.

The amplitude list is ordered along a Gray code: ``amps[l]`` is the target
amplitude of the ``l``-th ditstring. The schedule ``(thetas, phis)`` has one
entry per transition, so ``len(thetas) == len(amps) - 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import GraystateError, NormalizationError

NORM_TOL = 1e-9
REAL_TOL = 1e-12


@dataclass
class AngleSchedule:
    thetas: np.ndarray
    phis: np.ndarray
    # target = rescaled / rescale; identity unless the anchor amplitude was
    # not already real positive
    rescale: complex = 1.0 + 0.0j
    anchor: int = 0
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.thetas = np.asarray(self.thetas, dtype=float)
        self.phis = np.asarray(self.phis, dtype=float)
        if self.thetas.shape != self.phis.shape:
            raise GraystateError("thetas and phis must have the same length")

    def __len__(self) -> int:
        return len(self.thetas)

    @property
    def dimension(self) -> int:
        return len(self.thetas) + 1

    def to_dict(self) -> dict:
        return {
            "thetas": [float(t) for t in self.thetas],
            "phis": [float(p) for p in self.phis],
            "rescale": [float(np.real(self.rescale)), float(np.imag(self.rescale))],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "AngleSchedule":
        re, im = data.get("rescale", [1.0, 0.0])
        return cls(np.array(data["thetas"], dtype=float),
                   np.array(data["phis"], dtype=float), complex(re, im))

    @classmethod
    def from_json(cls, text: str) -> "AngleSchedule":
        return cls.from_dict(json.loads(text))


def _prepare(amps, auto_normalize: bool) -> np.ndarray:
    a = np.asarray(amps)
    if a.ndim != 1 or a.size == 0:
        raise GraystateError("amplitudes must be a non-empty 1-d array")
    norm = np.linalg.norm(a)
    if norm == 0:
        raise NormalizationError("amplitude vector is zero")
    if abs(norm - 1.0) > NORM_TOL:
        if not auto_normalize:
            raise NormalizationError(f"amplitudes have norm {norm:.12g}, expected 1")
        a = a / norm
    return a


def _tail_norms(moduli_sq: np.ndarray) -> np.ndarray:
    """``out[l] = sqrt(sum_{j > l} moduli_sq[j])``."""
    tail = np.cumsum(moduli_sq[::-1])[::-1]
    out = np.zeros_like(moduli_sq)
    out[:-1] = np.sqrt(tail[1:])
    return out


def angles_real(amps, auto_normalize: bool = False) -> AngleSchedule:
    """Angles for real amplitudes; all phases are zero."""
    a = _prepare(amps, auto_normalize)
    if np.iscomplexobj(a):
        if np.max(np.abs(a.imag)) > REAL_TOL:
            raise GraystateError("angles_real needs real amplitudes; use angles_complex")
        a = a.real
    a = a.astype(float)
    D = a.size
    if D == 1:
        # no rotation can carry the sign of a lone amplitude
        return AngleSchedule(np.zeros(0), np.zeros(0), complex(np.sign(a[0])))
    thetas = np.arctan2(_tail_norms(a * a)[: D - 2], a[: D - 2])
    last = np.arctan2(a[D - 1], a[D - 2])
    thetas = np.append(thetas, last)
    # atan2(0, 0) is already 0 in numpy, which is the zero-tail convention
    return AngleSchedule(thetas, np.zeros(D - 1))


def angles_complex(amps, auto_normalize: bool = False) -> AngleSchedule:
    """Angles and phases for complex amplitudes.

    The vector is first multiplied by a unit phase so that its first nonzero
    entry is real positive. Thetas come from the moduli; each phase is the
    phase increment needed to reach the next nonzero amplitude.
    """
    a = _prepare(amps, auto_normalize).astype(complex)
    D = a.size
    nonzero = np.flatnonzero(a)
    anchor = int(nonzero[0])
    rescale = abs(a[anchor]) / a[anchor]
    notes = []
    if anchor != 0:
        notes.append(f"first amplitude is zero; phase anchored at index {anchor}")
    a = a * rescale
    if D == 1:
        return AngleSchedule(np.zeros(0), np.zeros(0), rescale, anchor, notes)

    mod = np.abs(a)
    thetas = np.arctan2(_tail_norms(mod * mod)[: D - 2], mod[: D - 2])
    thetas = np.append(thetas, np.arctan2(mod[D - 1], mod[D - 2]))

    # Cosines and sines are non-negative here, so the phase of a[l+1] is the
    # running sum of phis; this equals arg(a[l+1] / (a[l] tan th_l cos th_{l+1}))
    # whenever that expression is defined, and stays defined across zeros.
    phis = np.zeros(D - 1)
    running = 0.0
    for l in range(D - 1):
        if a[l + 1] != 0:
            phis[l] = np.angle(a[l + 1] * np.exp(-1j * running))
            running += phis[l]
    return AngleSchedule(thetas, phis, rescale, anchor, notes)


def reconstruct_amplitudes(schedule: AngleSchedule, D: int | None = None) -> np.ndarray:
    """Amplitudes produced by the schedule (before undoing any rescale)."""
    if D is None:
        D = schedule.dimension
    if D != schedule.dimension:
        raise GraystateError(f"schedule of length {len(schedule)} does not match D={D}")
    if D == 1:
        return np.ones(1, dtype=complex)
    th, ph = schedule.thetas, schedule.phis
    step = np.exp(1j * ph) * np.sin(th)
    prefix = np.concatenate(([1.0 + 0j], np.cumprod(step)))
    out = prefix.copy()
    out[:-1] *= np.cos(th)
    return out
