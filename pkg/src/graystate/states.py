"""Amplitude providers: AKLT, spin-s Dicke, coordinate Bethe ansatz, and user files.

Every provider takes the sector plus the ordered ditstrings it should fill
(normally the entries of a Gray code) and returns a normalized amplitude
array in that order.
"""

from __future__ import annotations

import itertools
import json
import warnings
from dataclasses import dataclass
from math import comb, factorial
from typing import Mapping, Optional, Sequence

import numpy as np

from .compositions import CompositionSpec, Ditstring, display, parse_ditstring, walsh_gray_code
from .errors import GraystateError, InvalidSpecError, SingularRootsError

MAX_BETHE_K = 9

AKLT_MATRICES = (
    np.array([[0.0, 1.0], [0.0, 0.0]]),
    np.array([[-1.0, 0.0], [0.0, 1.0]]) / np.sqrt(2),
    np.array([[0.0, 0.0], [-1.0, 0.0]]),
)


def _entries(spec: CompositionSpec, entries: Optional[Sequence[Ditstring]]) -> list[Ditstring]:
    if entries is None:
        return list(walsh_gray_code(spec).entries)
    return [tuple(m) for m in entries]


def _normalized(values: np.ndarray) -> np.ndarray:
    norm = np.linalg.norm(values)
    if norm == 0:
        raise GraystateError("all amplitudes vanish; the state is zero")
    return values / norm


def aklt_trace(m: Sequence[int]) -> float:
    """Unnormalized AKLT amplitude ``tr(A^{m_n} ... A^{m_1})``."""
    prod = np.eye(2)
    for digit in reversed(m):  # leftmost factor belongs to m_n
        prod = prod @ AKLT_MATRICES[digit]
    return float(np.trace(prod))


def aklt_amplitudes(n: int, entries: Optional[Sequence[Ditstring]] = None) -> np.ndarray:
    if n < 2:
        raise InvalidSpecError("the AKLT state needs n >= 2")
    spec = CompositionSpec(n, n, 2)
    return _normalized(np.array([aklt_trace(m) for m in _entries(spec, entries)]))


def dicke_amplitudes(spec: CompositionSpec, entries: Optional[Sequence[Ditstring]] = None) -> np.ndarray:
    total = comb(spec.two_s * spec.n, spec.k)
    vals = []
    for m in _entries(spec, entries):
        num = 1
        for digit in m:
            num *= comb(spec.two_s, digit)
        vals.append(np.sqrt(num / total))
    return np.array(vals)


# --------------------------------------------------------------------------
# Bethe states

@dataclass
class BetheRoots:
    spec: CompositionSpec
    u: np.ndarray

    def __post_init__(self):
        self.u = np.atleast_1d(np.asarray(self.u, dtype=complex))
        if len(self.u) != self.spec.k:
            raise InvalidSpecError(f"{len(self.u)} roots given for k={self.spec.k}")

    @property
    def s(self) -> float:
        return self.spec.two_s / 2

    def to_dict(self) -> dict:
        return {
            "n": self.spec.n,
            "k": self.spec.k,
            "s_times_2": self.spec.two_s,
            "u": [[float(z.real), float(z.imag)] for z in self.u],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "BetheRoots":
        spec = CompositionSpec(int(data["n"]), int(data["k"]), int(data["s_times_2"]))
        u = []
        for z in data["u"]:
            u.append(complex(*z) if isinstance(z, (list, tuple)) else complex(z))
        return cls(spec, np.array(u, dtype=complex))

    @classmethod
    def from_json(cls, text: str) -> "BetheRoots":
        return cls.from_dict(json.loads(text))


def momentum_phases(roots: BetheRoots) -> np.ndarray:
    """``e^{i k_j} = (u_j + i s) / (u_j - i s)``."""
    s = roots.s
    den = roots.u - 1j * s
    if np.any(den == 0):
        raise SingularRootsError(f"root at u = i s = {1j * s}")
    return (roots.u + 1j * s) / den


def bethe_momenta(roots: BetheRoots) -> np.ndarray:
    """Momenta ``k_j`` on the principal branch of the logarithm."""
    return -1j * np.log(momentum_phases(roots))


def bethe_residual(roots: BetheRoots) -> np.ndarray:
    """Per-root ``|lhs - rhs|`` of the Bethe equations; ``inf`` where a denominator vanishes."""
    u, n = roots.u, roots.spec.n
    out = np.empty(len(u))
    for j in range(len(u)):
        if u[j] == 1j * roots.s:
            out[j] = np.inf
            continue
        lhs = ((u[j] + 1j * roots.s) / (u[j] - 1j * roots.s)) ** n
        rhs = 1.0 + 0j
        singular = False
        for l in range(len(u)):
            if l == j:
                continue
            den = u[j] - u[l] - 1j
            if den == 0:
                singular = True
                break
            rhs *= (u[j] - u[l] + 1j) / den
        out[j] = np.inf if singular else abs(lhs - rhs)
    return out


def bethe_energy(roots: BetheRoots) -> float:
    s = roots.s
    den = roots.u**2 + s * s
    if np.any(den == 0):
        raise SingularRootsError("u_j**2 + s**2 vanishes")
    e = complex(-np.sum(2 * s / den))
    if abs(e.imag) > 1e-9:
        warnings.warn(f"Bethe energy has imaginary part {e.imag:.3g}", RuntimeWarning)
    return e.real


def scattering_weights(z: np.ndarray, two_s: int) -> tuple[np.ndarray, np.ndarray]:
    """All permutations of the magnons and their weights ``A_P``."""
    k = len(z)
    perms = np.array(list(itertools.permutations(range(k))), dtype=int).reshape(-1, k)
    weights = np.ones(len(perms), dtype=complex)
    for a in range(k):
        for b in range(a + 1, k):
            za, zb = z[perms[:, a]], z[perms[:, b]]
            weights *= 1 - (za - 1) * (zb - 1) / (two_s * (za - zb))
    return perms, weights


def bethe_amplitudes(
    spec: CompositionSpec,
    roots: BetheRoots,
    entries: Optional[Sequence[Ditstring]] = None,
    max_k: int = MAX_BETHE_K,
) -> np.ndarray:
    """Coordinate-ansatz amplitudes, normalized, in the order of ``entries``."""
    if roots.spec != spec:
        raise InvalidSpecError(f"roots are for {roots.spec}, not {spec}")
    k = spec.k
    if k > max_k:
        raise GraystateError(f"k={k} needs {factorial(k)} permutations; cap is k <= {max_k}")
    z = momentum_phases(roots)
    for a in range(k):
        for b in range(a + 1, k):
            if z[a] == z[b]:
                raise SingularRootsError(f"roots {a} and {b} give the same momentum")
    perms, weights = scattering_weights(z, spec.two_s)
    zp = z[perms]  # zp[P, j] = e^{i k_{Pj}}

    vals = []
    for m in _entries(spec, entries):
        # magnon positions: site r repeated m_r times, nondecreasing
        x = np.repeat(np.arange(1, spec.n + 1), m)
        wave = np.prod(zp ** x[None, :], axis=1) if k else np.ones(1)
        amp = np.sum(weights * wave)
        for digit in m:
            amp *= np.sqrt(comb(spec.two_s, digit))
        vals.append(amp)
    return _normalized(np.array(vals, dtype=complex))


# --------------------------------------------------------------------------
# Generic amplitudes from a file

def load_amplitude_file(text: str) -> dict[Ditstring, complex]:
    """Parse ``[{"m": [m_1, ..., m_n], "re": x, "im": y}, ...]``.

    ``m`` may also be a displayed string such as ``"012"``, and the list may
    sit under an ``"amplitudes"`` key, so saved statevectors load directly.
    """
    data = json.loads(text)
    if isinstance(data, dict) and "amplitudes" in data:
        data = data["amplitudes"]
    out: dict[Ditstring, complex] = {}
    for row in data:
        raw = row["m"]
        m = parse_ditstring(raw) if isinstance(raw, str) else tuple(int(x) for x in raw)
        if m in out:
            raise InvalidSpecError(f"ditstring {display(m)} listed twice")
        out[m] = complex(float(row.get("re", 0.0)), float(row.get("im", 0.0)))
    return out


def order_amplitudes(
    spec: CompositionSpec, entries: Sequence[Ditstring], mapping: Mapping[Ditstring, complex]
) -> np.ndarray:
    """Amplitudes of ``mapping`` in the order of ``entries``; sector must match exactly.

    Ditstrings in the sector that are absent from ``mapping`` are an error,
    as are entries outside the sector.
    """
    extra = [m for m in mapping if not spec.contains(m)]
    if extra:
        raise InvalidSpecError(
            f"{len(extra)} ditstring(s) outside the sector, e.g. {display(extra[0])}"
        )
    missing = [m for m in entries if m not in mapping]
    if missing:
        raise InvalidSpecError(
            f"{len(missing)} sector ditstring(s) missing, e.g. {display(missing[0])}"
        )
    vals = np.array([mapping[m] for m in entries], dtype=complex)
    if np.all(vals.imag == 0):
        return vals.real
    return vals
