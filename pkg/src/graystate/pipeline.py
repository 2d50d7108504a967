"""End-to-end preparation: amplitudes -> Gray code -> angles -> circuit -> statevector."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .angles import AngleSchedule, angles_complex, angles_real
from .circuit import Circuit, ControlSchedule, assemble_circuit, control_schedule
from .compositions import CompositionSpec, GrayCode, gray_code
from .simulator import DEFAULT_MAX_AMPLITUDES, StateVector, embed, fidelity, run


@dataclass
class Preparation:
    spec: CompositionSpec
    code: GrayCode
    amplitudes: np.ndarray
    schedule: AngleSchedule
    controls: ControlSchedule
    circuit: Circuit
    state: StateVector
    target: StateVector
    wall_time: float

    @property
    def fidelity(self) -> float:
        return fidelity(self.target, self.state)

    @property
    def norm_drift(self) -> float:
        return abs(self.state.norm() - 1.0)

    def report(self) -> dict:
        return {
            "n": self.spec.n,
            "k": self.spec.k,
            "two_s": self.spec.two_s,
            "dimension": len(self.code),
            "gate_count": len(self.circuit.gates),
            "gray_gate_count": len(self.circuit.gray_gates),
            "x_gate_count": len(self.circuit.x_gates),
            "fidelity_to_target": self.fidelity,
            "norm_drift": self.norm_drift,
            "wall_time": self.wall_time,
        }


def is_real(amps: np.ndarray) -> bool:
    return not np.iscomplexobj(amps) or bool(np.all(np.asarray(amps).imag == 0))


def prepare(
    spec: CompositionSpec,
    amplitudes,
    code: Optional[GrayCode] = None,
    generator: str = "walsh",
    elide_identity: bool = False,
    auto_normalize: bool = False,
    naive_controls: bool = False,
    max_amplitudes: int = DEFAULT_MAX_AMPLITUDES,
) -> Preparation:
    """Build and simulate the circuit for ``amplitudes`` ordered along ``code``.

    Without ``code`` one is generated with ``generator``; the amplitudes must
    then already follow that generator's order.
    """
    t0 = time.perf_counter()
    if code is None:
        code = gray_code(spec, generator)
    amps = np.asarray(amplitudes)
    if is_real(amps):
        schedule = angles_real(np.real(amps), auto_normalize=auto_normalize)
    else:
        schedule = angles_complex(amps, auto_normalize=auto_normalize)
    controls = control_schedule(code)
    circuit = assemble_circuit(
        code, schedule,
        controls.naive if naive_controls else controls.controls,
        elide_identity=elide_identity,
    )
    state = run(circuit, max_amplitudes)
    wall = time.perf_counter() - t0
    target_amps = amps / np.linalg.norm(amps)
    target = embed(spec.n, spec.d, code.entries, target_amps)
    return Preparation(spec, code, amps, schedule, controls, circuit, state, target, wall)
