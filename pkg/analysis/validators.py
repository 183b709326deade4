import logging

import numpy as np
import numpy.typing as npt

from analysis.error_actions import exact_error_action, first_order_magnus, second_order_bound
from analysis.subspaces import ErrorSubspace, random_bath_operator
from model.chain import DriftSchedule
from model.hamiltonian import HamiltonianSpec
from model.pauli import PauliString
from model.schedule import ControlProfile, ControlSchedule
from model.settings import DEFAULT_SETTINGS, Settings
from model.space import DenseOperator, JointSpace
from solver.operators import assemble, mod_b_reduce, operator_norm, propagator_matrix
from solver.propagation import gate_frames
from synthesis.balance_pair import make_balance_pair

logger = logging.getLogger(__name__)


def _commutator_norm(a: npt.NDArray[np.complex128], b: npt.NDArray[np.complex128]) -> float:
    return float(np.linalg.norm(a @ b - b @ a, 2))


def _embed(q: npt.ArrayLike, space: JointSpace) -> npt.NDArray[np.complex128]:
    q = np.asarray(q, dtype=complex)
    if q.shape[0] == space.total_dimension:
        return q
    return np.kron(q, np.eye(space.bath_dimension))


class ErrorValidator:
    """Prüft Fehlerauslöschung erster Ordnung und die Struktureigenschaften der Konstruktionen."""

    @staticmethod
    def verify_first_order_cancellation(schedule: ControlSchedule, error_subspace: ErrorSubspace,
                                        bath_dimension: int = 4, samples: int = 20, tol: float = 1e-9,
                                        seed: int = 0, extra: DenseOperator | None = None,
                                        settings: Settings = DEFAULT_SETTINGS) -> tuple[bool, float]:
        """Prüft ‖mod_B Φ^[1]‖/(‖H_e‖T) < tol für zufällige H_e ∈ Ω_e.

        Parameters
        ----------
        schedule : ControlSchedule
            Zu prüfender Schedule.
        error_subspace : ErrorSubspace
            Fehlerunterraum, aus dem gezogen wird.
        bath_dimension : int
            Dimension des Bades.
        samples : int
            Anzahl Stichproben.
        tol : float
            Schranke für das relative Residuum.
        seed : int
            Startwert.
        extra : DenseOperator | None
            Fester Zusatz zu jedem H_e (z.B. ε·H_dev ⊗ I_B oder ein Drift).
        settings : Settings
            Norm und Raumgrenze.

        Returns
        -------
        tuple[bool, float]
            (bestanden, größtes relatives Residuum).
        """
        assert samples >= 1, "Mindestens eine Stichprobe."
        space = JointSpace(schedule.n_qubits, bath_dimension, settings.dimension_cap)
        rng = np.random.default_rng(seed)
        T = schedule.total_duration
        worst = 0.0
        for _ in range(samples):
            h_e = error_subspace.sample(space, rng)
            if extra is not None:
                h_e = h_e + extra
            phi = first_order_magnus(schedule, h_e, settings)
            residual = operator_norm(phi.mod_b(), settings.norm) / (operator_norm(h_e, settings.norm) * T)
            worst = max(worst, residual)
        passed = worst < tol
        logger.info("Auslöschung %s über %s: worst=%.3e (%s)", schedule.name, error_subspace.name,
                    worst, "ok" if passed else "FEHLER")
        return passed, worst

    @staticmethod
    def report(schedule: ControlSchedule, error_subspace: ErrorSubspace, samples: int,
               passed: bool, worst: float) -> dict:
        """JSON-fähiger Prüfbericht."""
        return {
            "schedule_id": schedule.name,
            "subspace": error_subspace.name,
            "samples": samples,
            "worst_residual": worst,
            "pass": bool(passed),
        }

    @staticmethod
    def nogo_witness(sequence: list[npt.ArrayLike], error_subspace: ErrorSubspace | None = None,
                     bath_dimension: int = 2, samples: int = 10, seed: int = 0,
                     operators: list[DenseOperator] | None = None, tol: float = 1e-9) -> dict:
        """ Wertet beide Black-Box-Fehlermodelle einer Gatterfolge aus.

        ℰ₁(U) = X liefert Σ_{i=0}^{N-1} P_i† X P_i, ℰ₂(U) = U†XU liefert
        Σ_{i=1}^{N} P_i† X P_i. Verschwinden beide modulo Bad, dann bleibt
        A†XA - X = 0 modulo Bad.

        Parameters
        ----------
        sequence : list[array_like]
            Systemunitäre Q_1..Q_N in Anwendungsreihenfolge.
        error_subspace : ErrorSubspace | None
            Quelle zufälliger X, falls ``operators`` fehlt.
        bath_dimension : int
            Baddimension für gezogene X.
        samples : int
            Anzahl gezogener X.
        seed : int
            Startwert.
        operators : list[DenseOperator] | None
            Explizite X statt Stichproben.
        tol : float
            Relative Schranke für "verschwindet".

        Returns
        -------
        dict
            Größte relative Normen der beiden Summen und der Wirkung sowie Flags.
        """
        assert sequence, "Die Gatterfolge darf nicht leer sein."
        if operators is None:
            assert error_subspace is not None, "Entweder Operatoren oder einen Fehlerunterraum angeben."
            n = int(np.log2(np.asarray(sequence[0]).shape[0]))
            space = JointSpace(n, bath_dimension)
            rng = np.random.default_rng(seed)
            operators = [error_subspace.sample(space, rng) for _ in range(samples)]

        worst = {"e1_sum": 0.0, "e2_sum": 0.0, "action": 0.0}
        for x in operators:
            space = x.space
            frames = [np.eye(space.total_dimension, dtype=complex)]
            for q in sequence:
                frames.append(_embed(q, space) @ frames[-1])
            conj = [p.conj().T @ x.matrix @ p for p in frames]
            scale = max(operator_norm(x), 1e-300)
            sums = {
                "e1_sum": sum(conj[:-1]),
                "e2_sum": sum(conj[1:]),
                "action": conj[-1] - x.matrix,
            }
            for key, m in sums.items():
                reduced = mod_b_reduce(DenseOperator(m, space, hermitian=True, tolerance=1e-9))
                worst[key] = max(worst[key], operator_norm(reduced) / scale)

        result = {
            "worst_e1_sum": worst["e1_sum"],
            "worst_e2_sum": worst["e2_sum"],
            "worst_action": worst["action"],
            "e1_vanishes": worst["e1_sum"] < tol,
            "e2_vanishes": worst["e2_sum"] < tol,
            "action_preserves": worst["action"] < tol,
        }
        logger.debug("No-Go-Zeuge: %s", result)
        return result

    @staticmethod
    def check_layer_commutation(drift: DriftSchedule, H_e1: DenseOperator, H_e2: DenseOperator) -> dict:
        """ Kommutatoren der Schichtpropagatoren an allen Rastergrenzen.

        Parameters
        ----------
        drift : DriftSchedule
            Zweischichtiger Block.
        H_e1, H_e2 : DenseOperator
            Fehleranteile der Schichten auf demselben Raum.

        Returns
        -------
        dict
            Maxima von ‖[U_g1, U_g2]‖, ‖[U_g1, H_e2]‖ und ‖[U_g2, H_e1]‖.
        """
        space = H_e1.space
        frames_1 = gate_frames(drift.layer(1), space)
        frames_2 = gate_frames(drift.layer(2), space)
        worst = {"layers": 0.0, "layer1_vs_e2": 0.0, "layer2_vs_e1": 0.0}
        for p1, p2 in zip(frames_1, frames_2):
            worst["layers"] = max(worst["layers"], _commutator_norm(p1, p2))
            worst["layer1_vs_e2"] = max(worst["layer1_vs_e2"], _commutator_norm(p1, H_e2.matrix))
            worst["layer2_vs_e1"] = max(worst["layer2_vs_e1"], _commutator_norm(p2, H_e1.matrix))
        return worst

    @staticmethod
    def check_gating_symmetry(schedule: ControlSchedule, operator: DenseOperator) -> float:
        """Größte Norm von [H_g(t), O] über alle Segmente."""
        worst = 0.0
        for seg in schedule:
            h = assemble(seg.gating_spec(), operator.space)
            worst = max(worst, _commutator_norm(h.matrix, operator.matrix))
        return worst

    @staticmethod
    def check_divided_control(drift: DriftSchedule) -> bool:
        """True, wenn beide Schichten auf disjunkten Qubits steuern."""
        if drift.layer2 is None:
            return True

        def support(schedule: ControlSchedule) -> set[int]:
            qubits: set[int] = set()
            for seg in schedule:
                for term in seg.gating_spec().terms:
                    if term.weight != 0.0:
                        qubits.update(term.pauli.support)
            return qubits

        shared = support(drift.layer1) & support(drift.layer2)
        if shared:
            logger.warning("Schichten teilen sich die Qubits %s", sorted(shared))
        return not shared

    @staticmethod
    def verify_balance_pair(profile: ControlProfile, H_e: DenseOperator,
                            settings: Settings = DEFAULT_SETTINGS) -> tuple[float, float]:
        """ Vergleicht Φ^[1] von I_Q = Q′Q und Q_{1/2} untereinander und mit 2Φ^[1]_Q.

        Parameters
        ----------
        profile : ControlProfile
            Profil für Q der Dauer τ.
        H_e : DenseOperator
            Fehler-Hamiltonian.
        settings : Settings
            Norm.

        Returns
        -------
        tuple[float, float]
            (‖Φ_{Q′Q} - Φ_{Q½}‖, ‖Φ_{Q½} - 2Φ_Q‖), beide relativ zu ‖H_e‖·2τ.
        """
        pair = make_balance_pair(profile)
        phi_q = first_order_magnus(profile, H_e, settings).phi.matrix
        phi_id = first_order_magnus(pair.identity_profile, H_e, settings).phi.matrix
        phi_half = first_order_magnus(pair.gate_profile, H_e, settings).phi.matrix
        scale = operator_norm(H_e, settings.norm) * pair.duration
        return (operator_norm(phi_id - phi_half, settings.norm) / scale,
                operator_norm(phi_half - 2.0 * phi_q, settings.norm) / scale)

    @staticmethod
    def verify_second_order_bound(schedule: ControlSchedule, H_B: DenseOperator, H_SB: DenseOperator,
                                  settings: Settings = DEFAULT_SETTINGS) -> tuple[float, float]:
        """ Misst ‖Φ - Φ^[1]‖ und vergleicht mit der Schranke zweiter Ordnung.

        Parameters
        ----------
        schedule : ControlSchedule
            Schedule.
        H_B, H_SB : DenseOperator
            Badanteil und Kopplung; H_e = H_B + H_SB.
        settings : Settings
            Norm und Toleranzen.

        Returns
        -------
        tuple[float, float]
            (gemessener Rest, Schranke).
        """
        h_e = H_B + H_SB
        exact = exact_error_action(schedule, h_e, settings)
        first = first_order_magnus(schedule, h_e, settings)
        measured = exact.residual_to(first).norm(settings.norm)
        bound = second_order_bound(operator_norm(H_SB, settings.norm), operator_norm(H_B, settings.norm),
                                   schedule.total_duration)
        if measured > bound:
            logger.warning("Rest %.3e überschreitet die Schranke %.3e", measured, bound)
        return measured, bound

    @staticmethod
    def segment_unitaries(schedule: ControlSchedule) -> list[npt.NDArray[np.complex128]]:
        """Geschlossene Systemunitäre jedes Segments in Anwendungsreihenfolge."""
        space = JointSpace(schedule.n_qubits, 1)
        return [propagator_matrix(assemble(seg.gating_spec(), space), seg.duration) for seg in schedule]

    @staticmethod
    def balance_runs(schedule: ControlSchedule) -> tuple[list[ControlSchedule], ControlSchedule | None]:
        """Zerlegt einen DCG-Schedule in die I_Q-Blöcke und den Q_{1/2}-Block."""
        runs: list[tuple[str, list]] = []
        for seg in schedule:
            if runs and runs[-1][0] == seg.role:
                runs[-1][1].append(seg)
            else:
                runs.append((seg.role, [seg]))
        identities = [ControlSchedule(segs, schedule.n_qubits, "I_Q") for role, segs in runs if role == "I_Q"]
        halves = [segs for role, segs in runs if role == "Q_half"]
        half = ControlSchedule(halves[-1], schedule.n_qubits, "Q_half") if halves else None
        return identities, half

    @staticmethod
    def drift_tolerance(schedule: ControlSchedule, tol: float,
                        settings: Settings = DEFAULT_SETTINGS) -> float:
        """ Auslöschungsschranke für Schedules mit Driftsegmenten.

        Der immer eingeschaltete Drift rotiert den Fehler auch innerhalb der
        Segmente mit; Φ^[1] behält dadurch einen Rest der Ordnung ‖H_drift‖T.

        Parameters
        ----------
        schedule : ControlSchedule
            Zu prüfender Schedule.
        tol : float
            Schranke ohne Drift.
        settings : Settings
            Norm.

        Returns
        -------
        float
            max(tol, ‖H_drift‖T) mit dem stärksten statischen Anteil der
            Driftsegmente, sonst ``tol``.
        """
        space = JointSpace(schedule.n_qubits, 1)
        strength = max(
            (operator_norm(assemble(seg.static, space), settings.norm) for seg in schedule if seg.role == "drift"),
            default=0.0,
        )
        if strength == 0.0:
            return tol
        scaled = max(tol, strength * schedule.total_duration)
        logger.info("Driftschedule %s: Auslöschung gegen %.3e statt %.1e geprüft", schedule.name, scaled, tol)
        return scaled

    @staticmethod
    def run_suites(schedule: ControlSchedule, error_subspace: ErrorSubspace, bath_dimension: int = 4,
                   samples: int = 20, tol: float = 1e-9, seed: int = 0,
                   settings: Settings = DEFAULT_SETTINGS) -> dict:
        """ Alle Prüfungen für einen geladenen Schedule.

        Auslöschung erster Ordnung, Schranke zweiter Ordnung, Gleichheit der
        Fehler von I_Q und Q_{1/2} (falls vorhanden) und die Konsistenz der
        No-Go-Aussage für die Segmentfolge.

        Enthält der Schedule Driftsegmente, bleibt vom Drift ein Rest der
        Ordnung ‖H_drift‖T; die Auslöschung wird dann gegen
        ``drift_tolerance`` statt ``tol`` geprüft.

        Parameters
        ----------
        schedule : ControlSchedule
            Zu prüfender Schedule.
        error_subspace : ErrorSubspace
            Fehlerunterraum Ω_e.
        bath_dimension : int
            Dimension des Testbades.
        samples : int
            Anzahl Stichproben je Prüfung.
        tol : float
            Relative Schranke.
        seed : int
            Startwert.
        settings : Settings
            Norm und Raumgrenze.

        Returns
        -------
        dict
            Bericht wie ``report`` plus ``suites`` mit den Einzelergebnissen.
        """
        cancel_tol = ErrorValidator.drift_tolerance(schedule, tol, settings)
        passed, worst = ErrorValidator.verify_first_order_cancellation(
            schedule, error_subspace, bath_dimension, samples, cancel_tol, seed, settings=settings)
        result = ErrorValidator.report(schedule, error_subspace, samples, passed, worst)
        suites = {"cancellation": {"pass": bool(passed), "worst_residual": worst, "tolerance": cancel_tol,
                                   "drift": "drift" in schedule.roles()}}

        space = JointSpace(schedule.n_qubits, bath_dimension, settings.dimension_cap)
        rng = np.random.default_rng([seed, 1])
        T = schedule.total_duration
        worst_ratio = 0.0
        for _ in range(samples):
            h_sb = error_subspace.sample(space, rng)
            bath = HamiltonianSpec()
            bath.add(PauliString.identity(schedule.n_qubits), 1.0, random_bath_operator(bath_dimension, rng))
            h_b = assemble(bath, space)
            # ‖H_e‖T ≤ 0.4
            h_sb = h_sb * (0.2 / (operator_norm(h_sb, settings.norm) * T))
            h_b = h_b * (0.2 / (operator_norm(h_b, settings.norm) * T))
            measured, bound = ErrorValidator.verify_second_order_bound(schedule, h_b, h_sb, settings)
            worst_ratio = max(worst_ratio, measured / bound)
        suites["bound"] = {"pass": bool(worst_ratio <= 1.0), "worst_ratio": worst_ratio}

        identities, half = ErrorValidator.balance_runs(schedule)
        if identities and half is not None:
            worst_balance = 0.0
            for _ in range(samples):
                h_e = error_subspace.sample(space, rng)
                phi_half = first_order_magnus(half, h_e, settings).phi.matrix
                scale = operator_norm(h_e, settings.norm) * half.total_duration
                for block in identities:
                    phi_id = first_order_magnus(block, h_e, settings).phi.matrix
                    worst_balance = max(worst_balance, operator_norm(phi_id - phi_half, settings.norm) / scale)
            suites["balance_pair"] = {"pass": bool(worst_balance < tol), "worst_residual": worst_balance}

        witness = ErrorValidator.nogo_witness(ErrorValidator.segment_unitaries(schedule), error_subspace,
                                              bath_dimension=2, samples=min(samples, 10), seed=seed, tol=tol)
        # verschwinden beide Summen, so auch die Wirkung
        consistent = not (witness["e1_vanishes"] and witness["e2_vanishes"]) or witness["action_preserves"]
        suites["nogo"] = {"pass": bool(consistent), **{k: bool(v) if isinstance(v, (bool, np.bool_)) else v
                                                      for k, v in witness.items()}}

        result["suites"] = suites
        result["pass"] = all(s["pass"] for s in suites.values())
        logger.info("Prüfung %s: %s", schedule.name, "bestanden" if result["pass"] else "fehlgeschlagen")
        return result


if __name__ == "__main__":
    from model.gates import GateSpec
    from synthesis.schedules import dcg_schedule_for, primitive_schedule_for

    gate = GateSpec.parse("x:1:pi/4")
    omega = ErrorSubspace.linear(2)
    for sched in (dcg_schedule_for(gate, 0.01, 2), primitive_schedule_for(gate, 0.01, 2)):
        print(sched.name, ErrorValidator.verify_first_order_cancellation(sched, omega, samples=3))
