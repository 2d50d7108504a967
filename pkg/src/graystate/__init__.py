"""Gray-code circuits that prepare fixed-digit-sum states of spin-s qudits."""

from .angles import AngleSchedule, angles_complex, angles_real, reconstruct_amplitudes
from .circuit import (
    Circuit,
    ControlSchedule,
    GrayGate,
    XPower,
    assemble_circuit,
    control_schedule,
    decomposition_matrix,
    gray_gate_decomposition,
    gray_gate_matrix,
)
from .compositions import (
    CompositionSpec,
    GrayCode,
    dimension,
    enumerate_sector,
    gray_code,
    verify_gray_property,
    walsh_gray_code,
    warnsdorff_gray_code,
)
from .errors import (
    DimensionCapError,
    EmptySectorError,
    GraystateError,
    InvalidGrayCodeError,
    InvalidSpecError,
    LevelBoundError,
    NormalizationError,
    SearchFailure,
    SingularRootsError,
)
from .operators import (
    LocalOperator,
    aklt_hamiltonian,
    eigenstate_residual,
    h_poly,
    total_s2,
    total_sz,
    xxx_hamiltonian,
)
from .pipeline import Preparation, prepare
from .simulator import StateVector, amplitude_of, apply_gate, fidelity, run, zero_state
from .states import (
    BetheRoots,
    aklt_amplitudes,
    bethe_amplitudes,
    bethe_energy,
    bethe_residual,
    dicke_amplitudes,
)

__version__ = "0.1.0"
