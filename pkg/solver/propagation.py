import logging

import numpy as np
import numpy.typing as npt

from model.errors import DimensionError, PropagationError
from model.schedule import ControlSchedule
from model.settings import DEFAULT_SETTINGS, Settings
from model.space import DenseOperator, JointSpace
from model.spin_bath import ControlErrorModel, SpinBathModel
from solver.bath_hamiltonian import build_internal_hamiltonian
from solver.operators import assemble, propagator_matrix, reduce_to_system
from synthesis.control_errors import apply_control_error

logger = logging.getLogger(__name__)


def segment_hamiltonians(schedule: ControlSchedule, space: JointSpace) -> list[DenseOperator]:
    """Gating-Hamiltonian jedes Segments als H_g ⊗ I_B auf ``space``."""
    if schedule.n_qubits != space.n_system_qubits:
        raise DimensionError(f"Schedule hat {schedule.n_qubits} Qubits, Raum {space.n_system_qubits}.")
    return [assemble(seg.gating_spec(), space) for seg in schedule]


def gate_frames(schedule: ControlSchedule, space: JointSpace,
                hamiltonians: list[DenseOperator] | None = None) -> list[npt.NDArray[np.complex128]]:
    """ Kumulative Gating-Propagatoren P_0 = I, P_i = U_i ··· U_1.

    Parameters
    ----------
    schedule : ControlSchedule
        Der Schedule.
    space : JointSpace
        Zielraum.
    hamiltonians : list[DenseOperator] | None
        Bereits assemblierte Segment-Hamiltonians.

    Returns
    -------
    list[npt.NDArray[np.complex128]]
        N+1 Matrizen, P_i ist U_gate am Ende von Segment i.
    """
    hs = segment_hamiltonians(schedule, space) if hamiltonians is None else hamiltonians
    frames = [np.eye(space.total_dimension, dtype=complex)]
    for h, seg in zip(hs, schedule):
        frames.append(propagator_matrix(h, seg.duration) @ frames[-1])
    return frames


def total_propagator(schedule: ControlSchedule, H_e: DenseOperator,
                     settings: Settings = DEFAULT_SETTINGS) -> DenseOperator:
    """ U(T) = Π_i exp(-i(H_g,i + H_e)τ_i) in Anwendungsreihenfolge.

    Parameters
    ----------
    schedule : ControlSchedule
        Der Schedule.
    H_e : DenseOperator
        Zeitunabhängiger Fehler-Hamiltonian auf dem Gesamtraum.
    settings : Settings
        Liefert die Unitaritätsschranke.

    Returns
    -------
    DenseOperator
        Gesamtpropagator.
    """
    space = H_e.space
    u = np.eye(space.total_dimension, dtype=complex)
    for h_g, seg in zip(segment_hamiltonians(schedule, space), schedule):
        u = propagator_matrix(h_g + H_e, seg.duration) @ u
    residual = np.linalg.norm(u.conj().T @ u - np.eye(space.total_dimension), 2)
    if residual > settings.simulation_unitary_tol:
        raise PropagationError(f"Unitaritätsresiduum {residual:.2e} überschreitet {settings.simulation_unitary_tol:.0e}.")
    return DenseOperator(u, space, unitary=True, tolerance=settings.simulation_unitary_tol)


def closed_system_unitary(schedule: ControlSchedule) -> npt.NDArray[np.complex128]:
    """Produkt der Segmentexponentiale auf dem reinen Systemraum."""
    space = JointSpace(schedule.n_qubits, 1)
    return gate_frames(schedule, space)[-1]


def evolve_state(schedule: ControlSchedule, H_internal: DenseOperator, rho_in: npt.ArrayLike,
                 settings: Settings = DEFAULT_SETTINGS) -> npt.NDArray[np.complex128]:
    """ Propagiert einen gemeinsamen Dichteoperator exakt: ρ(T) = U ρ U†.

    Parameters
    ----------
    schedule : ControlSchedule
        Gating-Schedule (ggf. schon mit Kontrollfehlern).
    H_internal : DenseOperator
        H_B + H_SB auf dem Gesamtraum.
    rho_in : array_like
        Anfangszustand auf dem Gesamtraum.
    settings : Settings
        Toleranzen.

    Returns
    -------
    npt.NDArray[np.complex128]
        Endzustand auf dem Gesamtraum.
    """
    rho = np.asarray(rho_in, dtype=complex)
    if len(schedule) == 0:
        return rho.copy()
    u = total_propagator(schedule, H_internal, settings).matrix
    return u @ rho @ u.conj().T


def reference_input_state(n: int) -> npt.NDArray[np.complex128]:
    """|0…0⟩ ⊗ |+⟩, für n = 2 also (|00⟩ + |01⟩)/√2."""
    assert n >= 1, "Mindestens ein Qubit."
    zero = np.array([1.0, 0.0], dtype=complex)
    psi = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    for _ in range(n - 1):
        psi = np.kron(zero, psi)
    return psi


def simulate(schedule: ControlSchedule, model: SpinBathModel,
             error_model: ControlErrorModel | None = None,
             rng: np.random.Generator | None = None,
             psi_in: npt.ArrayLike | None = None,
             settings: Settings = DEFAULT_SETTINGS,
             internal: tuple[DenseOperator, DenseOperator] | None = None) -> npt.NDArray[np.complex128]:
    """ Exakte Spinbad-Propagation eines Schedules, Rückgabe ist ρ_S = Tr_B ρ(T).

    Parameters
    ----------
    schedule : ControlSchedule
        Nomineller Schedule.
    model : SpinBathModel
        Badmodell; ρ_B = I/2^{n_B}.
    error_model : ControlErrorModel | None
        Kontrollfehler, Standard fehlerfrei.
    rng : np.random.Generator | None
        Zufallsquelle für zufällige Überrotationen.
    psi_in : array_like | None
        Anfangszustand des Systems, Standard ``reference_input_state``.
    settings : Settings
        Toleranzen und Spin-Konvention.
    internal : tuple[DenseOperator, DenseOperator] | None
        Vorab gebautes (H_B, H_SB), um es über mehrere Schedules zu teilen.

    Returns
    -------
    npt.NDArray[np.complex128]
        Reduzierter Endzustand (2^n × 2^n).
    """
    if schedule.n_qubits != model.n:
        raise DimensionError(f"Schedule hat {schedule.n_qubits} Qubits, Modell {model.n}.")
    if error_model is not None:
        schedule = apply_control_error(schedule, error_model, rng)
    h_b, h_sb = build_internal_hamiltonian(model, settings) if internal is None else internal
    space = h_sb.space

    psi = reference_input_state(model.n) if psi_in is None else np.asarray(psi_in, dtype=complex)
    rho_s = np.outer(psi, psi.conj())
    rho_in = np.kron(rho_s, np.eye(space.bath_dimension) / space.bath_dimension)

    rho_out = evolve_state(schedule, h_b + h_sb, rho_in, settings)
    return reduce_to_system(DenseOperator(rho_out, space, hermitian=True, tolerance=1e-9))


if __name__ == "__main__":
    from model.gates import GateSpec
    from synthesis.schedules import dcg_schedule_for

    sched = dcg_schedule_for(GateSpec.parse("x:1:pi/4"), 0.01, 2)
    u = closed_system_unitary(sched)
    print(sched, np.round(u, 3))
