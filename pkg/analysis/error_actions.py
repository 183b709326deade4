from __future__ import annotations

import logging

import numpy as np
import numpy.typing as npt
import scipy.linalg

from model.errors import BranchCutError, DimensionError
from model.schedule import ControlSchedule
from model.settings import DEFAULT_SETTINGS, Settings
from model.space import DenseOperator
from solver.operators import mod_b_reduce, operator_norm, phase_distance, segment_integral
from solver.propagation import closed_system_unitary, gate_frames, segment_hamiltonians, total_propagator

logger = logging.getLogger(__name__)


class ErrorAction:
    ORDER_TAGS = ("total", "first_order", "residual")

    def __init__(self, phi: DenseOperator, order_tag: str, duration: float = 0.0,
                 converged: bool = True):
        """Hermitescher Fehleroperator Φ mit U(T) = U_gate(T) e^{-iΦ}.

        Parameters
        ----------
        phi : DenseOperator
            Φ auf dem Gesamtraum.
        order_tag : str
            "total", "first_order" oder "residual".
        duration : float
            Gesamtdauer T des zugehörigen Schedules.
        converged : bool
            False, wenn die Konvergenzbedingung der Magnus-Reihe verletzt ist.
        """
        assert order_tag in self.ORDER_TAGS, f"Unbekannter Ordnungstyp: {order_tag}"
        assert phi.hermitian, "Ein Fehleroperator muss hermitesch sein."
        self.phi = phi
        self.order_tag = order_tag
        self.duration = float(duration)
        self.converged = bool(converged)

    def mod_b(self) -> DenseOperator:
        return mod_b_reduce(self.phi)

    def norm(self, kind: str | None = None) -> float:
        return operator_norm(self.phi, kind)

    def residual_to(self, other: ErrorAction) -> ErrorAction:
        """self - other als Restterm (z.B. exakt minus erste Ordnung)."""
        return ErrorAction(self.phi - other.phi, "residual", self.duration,
                           self.converged and other.converged)

    def __str__(self) -> str:
        flag = "" if self.converged else ", nicht konvergent"
        return f"ErrorAction({self.order_tag}, ‖Φ‖={self.norm():.3e}, T={self.duration:.4g}{flag})"

    def __repr__(self) -> str:
        return self.__str__()


def _hermitian(m: npt.NDArray[np.complex128], space) -> DenseOperator:
    return DenseOperator(0.5 * (m + m.conj().T), space, hermitian=True)


def _check_convergence(H_e: DenseOperator, duration: float, settings: Settings) -> bool:
    if settings.magnus_criterion == "toggling":
        norm = operator_norm(mod_b_reduce(H_e), settings.norm)
        label = "‖H_SB‖T"
    else:
        norm = operator_norm(H_e, settings.norm)
        label = "‖H_e‖T"
    if norm * duration >= np.pi:
        logger.warning("Konvergenzbedingung verletzt: %s = %.3g ≥ π", label, norm * duration)
        return False
    return True


def exact_error_action(schedule: ControlSchedule, H_e: DenseOperator,
                       settings: Settings = DEFAULT_SETTINGS) -> ErrorAction:
    """ Exakter Fehleroperator Φ = i·log(U_gate(T)† U(T)) (Hauptzweig).

    Parameters
    ----------
    schedule : ControlSchedule
        Gating-Schedule.
    H_e : DenseOperator
        Fehler-Hamiltonian auf dem Gesamtraum.
    settings : Settings
        Liefert den Mindestabstand der Eigenphasen von ±π.

    Returns
    -------
    ErrorAction
        Φ mit ‖Φ‖ < π; ``converged`` ist False bei ‖H_e‖T ≥ π.
    """
    space = H_e.space
    T = schedule.total_duration
    converged = _check_convergence(H_e, T, settings)

    u_gate = gate_frames(schedule, space)[-1]
    u = total_propagator(schedule, H_e, settings).matrix
    w = u_gate.conj().T @ u

    # Komplexe Schur-Form einer normalen Matrix ist diagonal: W = Z diag(λ) Z†
    t_form, z = scipy.linalg.schur(w, output="complex")
    phases = np.angle(np.diag(t_form))
    if phases.size and np.max(np.abs(phases)) > np.pi - settings.branch_margin:
        raise BranchCutError(
            f"Eigenphase {np.max(np.abs(phases)):.9f} liegt am Schnitt ±π; Logarithmus nicht eindeutig."
        )
    phi = -(z * phases) @ z.conj().T
    return ErrorAction(_hermitian(phi, space), "total", T, converged)


def first_order_magnus(schedule: ControlSchedule, H_e: DenseOperator,
                       settings: Settings = DEFAULT_SETTINGS) -> ErrorAction:
    """ Erste Magnus-Ordnung Φ^[1] = ∫_0^T U_gate(t)† H_e U_gate(t) dt, segmentweise exakt.

    Parameters
    ----------
    schedule : ControlSchedule
        Gating-Schedule.
    H_e : DenseOperator
        Fehler-Hamiltonian.
    settings : Settings
        Norm und Konvergenzkriterium.

    Returns
    -------
    ErrorAction
        Hermitesches Φ^[1].
    """
    space = H_e.space
    hs = segment_hamiltonians(schedule, space)
    frames = gate_frames(schedule, space, hs)
    total = np.zeros((space.total_dimension, space.total_dimension), dtype=complex)
    for h, seg, p in zip(hs, schedule, frames):
        total += p.conj().T @ segment_integral(h, H_e, seg.duration) @ p
    T = schedule.total_duration
    return ErrorAction(_hermitian(total, space), "first_order", T,
                       _check_convergence(H_e, T, settings))


def compose_gate_errors(gates: list[tuple[npt.ArrayLike, ErrorAction]]) -> ErrorAction:
    """ Diskrete erste Ordnung Σ_i P_{i-1}† Φ_i P_{i-1} mit P_0 = I, P_i = Q_i···Q_1.

    Parameters
    ----------
    gates : list[tuple[array_like, ErrorAction]]
        Paare (Q_i, Φ_i) in Anwendungsreihenfolge; Q_i darf auf dem System oder
        dem Gesamtraum gegeben sein.

    Returns
    -------
    ErrorAction
        Kombinierte Fehlerwirkung erster Ordnung.
    """
    assert gates, "Mindestens ein Gatter erforderlich."
    space = gates[0][1].phi.space
    d = space.total_dimension
    p = np.eye(d, dtype=complex)
    total = np.zeros((d, d), dtype=complex)
    duration = 0.0
    max_norm = 0.0
    for q, action in gates:
        q = np.asarray(q.matrix if isinstance(q, DenseOperator) else q, dtype=complex)
        if q.shape == (space.system_dimension, space.system_dimension) and space.bath_dimension > 1:
            q = np.kron(q, np.eye(space.bath_dimension))
        if q.shape != (d, d):
            raise DimensionError(f"Gatter hat Form {q.shape}, erwartet ({d}, {d}).")
        total += p.conj().T @ action.phi.matrix @ p
        p = q @ p
        duration += action.duration
        max_norm = max(max_norm, action.norm())

    converged = len(gates) * max_norm < np.pi
    if not converged:
        logger.warning("Konvergenzbedingung N·max‖Φ_i‖ = %.3g ≥ π verletzt", len(gates) * max_norm)
    return ErrorAction(_hermitian(total, space), "first_order", duration, converged)


def second_order_bound(h_sb_norm: float, h_b_norm: float, duration: float) -> float:
    """ Schranke (T²/4)·(2‖H_B‖‖H_SB‖ + ‖H_SB‖²) für den unkorrigierten Rest.

    Parameters
    ----------
    h_sb_norm, h_b_norm : float
        Normen von H_SB und H_B (≥ 0).
    duration : float
        Gesamtdauer T.

    Returns
    -------
    float
        Die Schranke.
    """
    assert h_sb_norm >= 0 and h_b_norm >= 0, "Normen dürfen nicht negativ sein."
    return 0.25 * duration ** 2 * (2.0 * h_b_norm * h_sb_norm + h_sb_norm ** 2)


def closed_system_deviation(schedule: ControlSchedule, target: npt.ArrayLike | None = None) -> float:
    """Phasenunabhängiger Spektralabstand zwischen Schedule-Produkt und Ziel."""
    target = schedule.target if target is None else target
    assert target is not None, "Kein Zielgatter bekannt."
    return phase_distance(closed_system_unitary(schedule), target)


def split_layer_errors(drift, H_e1: DenseOperator, H_e2: DenseOperator,
                       settings: Settings = DEFAULT_SETTINGS) -> tuple[ErrorAction, ErrorAction]:
    """ Schichtweise erste Ordnung (Φ₁^[1], Φ₂^[1]) eines Drift-Blocks.

    Parameters
    ----------
    drift : DriftSchedule
        Zwei parallele Kontrollschichten.
    H_e1, H_e2 : DenseOperator
        Fehleranteile, die jeweils nur mit einer Schicht nicht kommutieren.
    settings : Settings
        Toleranzen.

    Returns
    -------
    tuple[ErrorAction, ErrorAction]
        Fehler der Schicht 1 und der Schicht 2.
    """
    phi_1 = first_order_magnus(drift.layer(1), H_e1, settings)
    phi_2 = first_order_magnus(drift.layer(2), H_e2, settings)
    return phi_1, phi_2


if __name__ == "__main__":
    from model.gates import GateSpec
    from model.hamiltonian import HamiltonianSpec
    from model.pauli import PauliString
    from model.space import JointSpace
    from solver.operators import assemble
    from synthesis.schedules import dcg_schedule_for

    space = JointSpace(2, 2)
    bath = np.array([[0.3, 0.1], [0.1, -0.3]])
    h_e = assemble(HamiltonianSpec().add(PauliString("ZI"), 1.0, bath).add(PauliString("IX"), 0.5, bath), space)
    sched = dcg_schedule_for(GateSpec.parse("x:1:pi/4"), 0.01, 2)
    phi1 = first_order_magnus(sched, h_e)
    print(phi1, "‖mod_B Φ1‖ =", operator_norm(phi1.mod_b()))
    print(exact_error_action(sched, h_e))
