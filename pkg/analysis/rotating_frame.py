import numpy as np

from model.hamiltonian import HamiltonianSpec
from model.pauli import collective_sum
from model.space import DenseOperator
from solver.operators import assemble, propagator_matrix, segment_integral


def _carrier(space, omega_c: float) -> DenseOperator:
    spec = HamiltonianSpec()
    for p in collective_sum(space.n_system_qubits, "Z"):
        spec.add(p, omega_c)
    return assemble(spec, space)


def rotating_frame_transform(H_e: DenseOperator, omega_c: float, t: float) -> DenseOperator:
    """ H_e im mit Ω_c ΣZ_i rotierenden Rahmen: U† H_e U mit U = exp(-itΩ_c ΣZ_i).

    Parameters
    ----------
    H_e : DenseOperator
        Fehler-Hamiltonian im Laborrahmen.
    omega_c : float
        Trägerfrequenz Ω_c > 0.
    t : float
        Zeitpunkt.

    Returns
    -------
    DenseOperator
        Der transformierte Operator.
    """
    assert omega_c > 0, "Ω_c muss positiv sein."
    u = propagator_matrix(_carrier(H_e.space, omega_c), t)
    return DenseOperator(u.conj().T @ H_e.matrix @ u, H_e.space, hermitian=H_e.hermitian, tolerance=1e-9)


def rotating_period(omega_c: float) -> float:
    return np.pi / omega_c


def time_average_over_period(H_e: DenseOperator, omega_c: float) -> DenseOperator:
    """ Mittel über eine Periode π/Ω_c; X- und Y-Anteile verschwinden, Z bleibt.

    Parameters
    ----------
    H_e : DenseOperator
        Fehler-Hamiltonian.
    omega_c : float
        Trägerfrequenz Ω_c > 0.

    Returns
    -------
    DenseOperator
        (Ω_c/π) ∫_0^{π/Ω_c} U(t)† H_e U(t) dt.
    """
    assert omega_c > 0, "Ω_c muss positiv sein."
    period = rotating_period(omega_c)
    avg = segment_integral(_carrier(H_e.space, omega_c), H_e, period) / period
    return DenseOperator(avg, H_e.space, hermitian=H_e.hermitian, tolerance=1e-9)


def stroboscopic_tau(omega_c: float, periods: int = 1) -> float:
    """Gatterdauer als ganzzahliges Vielfaches der Rahmenperiode."""
    assert periods >= 1, "Mindestens eine Periode."
    return periods * rotating_period(omega_c)


if __name__ == "__main__":
    from model.pauli import PauliString
    from model.space import JointSpace

    space = JointSpace(1, 2)
    b = np.array([[0.2, 0.1], [0.1, -0.2]])
    h = assemble(HamiltonianSpec().add(PauliString("X"), 1.0, b).add(PauliString("Z"), 0.5, b), space)
    avg = time_average_over_period(h, 10.0)
    print(np.round(avg.matrix.real, 6))
