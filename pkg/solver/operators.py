import logging

import numpy as np
import numpy.typing as npt

from model.errors import DimensionError, HermiticityError
from model.hamiltonian import HamiltonianSpec
from model.settings import DEFAULT_SETTINGS
from model.space import DenseOperator, JointSpace

logger = logging.getLogger(__name__)


def assemble(spec: HamiltonianSpec, space: JointSpace) -> DenseOperator:
    """ Dichte Matrix Σ_γ w_γ S_γ ⊗ B_γ auf dem Gesamtraum.

    Parameters
    ----------
    spec : HamiltonianSpec
        Die symbolische Summe.
    space : JointSpace
        Zielraum; Terme ohne Badoperator erhalten I_B.

    Returns
    -------
    DenseOperator
        Hermitescher Operator.
    """
    d_b = space.bath_dimension
    matrix = np.zeros((space.total_dimension, space.total_dimension), dtype=complex)
    eye_b = np.eye(d_b)

    for term in spec.terms:
        if term.pauli.n_qubits != space.n_system_qubits:
            raise DimensionError(
                f"Pauli-String {term.pauli} hat {term.pauli.n_qubits} Qubits, "
                f"der Raum {space.n_system_qubits}."
            )
        bath = eye_b
        if term.bath is not None:
            if term.bath.shape != (d_b, d_b):
                raise DimensionError(f"Badoperator hat Form {term.bath.shape}, erwartet ({d_b}, {d_b}).")
            if not np.allclose(term.bath, term.bath.conj().T, atol=DEFAULT_SETTINGS.hermitian_tol):
                raise HermiticityError("Badoperator ist nicht hermitesch.")
            bath = term.bath
        matrix += term.weight * np.kron(term.pauli.to_matrix(), bath)

    return DenseOperator(matrix, space, hermitian=True)


def unitary_exponential(H: DenseOperator, t: float) -> DenseOperator:
    """ Berechnet exp(-iHt) über die (gecachte) hermitesche Eigenzerlegung.

    Parameters
    ----------
    H : DenseOperator
        Hermitescher Generator.
    t : float
        Dauer.

    Returns
    -------
    DenseOperator
        Unitärer Propagator, ‖U†U - I‖ < unitary_tol.
    """
    if not H.hermitian:
        raise HermiticityError("exp(-iHt) verlangt einen hermiteschen Generator.")
    w, v = H.spectrum()
    u = (v * np.exp(-1j * w * t)) @ v.conj().T
    return DenseOperator(u, H.space, unitary=True)


def propagator_matrix(H: DenseOperator, t: float) -> npt.NDArray[np.complex128]:
    """Wie unitary_exponential, aber ohne Unitaritätsprüfung (für innere Schleifen)."""
    w, v = H.spectrum()
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def _as_blocks(m: npt.NDArray[np.complex128], space: JointSpace) -> npt.NDArray[np.complex128]:
    d_s, d_b = space.system_dimension, space.bath_dimension
    return m.reshape(d_s, d_b, d_s, d_b)


def partial_trace_system(O: DenseOperator) -> npt.NDArray[np.complex128]:
    """Tr_S O als Matrix auf dem Bad."""
    return np.einsum("ibic->bc", _as_blocks(O.matrix, O.space))


def partial_trace_bath(O: DenseOperator) -> npt.NDArray[np.complex128]:
    """Tr_B O als Matrix auf dem System."""
    return np.einsum("iaja->ij", _as_blocks(O.matrix, O.space))


def mod_b_reduce(O: DenseOperator) -> DenseOperator:
    """ Entfernt den reinen Badanteil: O - I_S ⊗ Tr_S(O)/2^n.

    Parameters
    ----------
    O : DenseOperator
        Operator auf einem Raum mit n ≥ 1.

    Returns
    -------
    DenseOperator
        Operator mit verschwindender Teilspur über das System (idempotent).
    """
    space = O.space
    assert space.n_system_qubits >= 1, "mod-B braucht mindestens ein Systemqubit."
    bath_part = partial_trace_system(O) / space.system_dimension
    reduced = O.matrix - np.kron(np.eye(space.system_dimension), bath_part)
    return DenseOperator(reduced, space, hermitian=O.hermitian)


def operator_norm(O: DenseOperator | npt.ArrayLike, kind: str | None = None) -> float:
    """ Unitär invariante Operatornorm, standardmäßig die Spektralnorm.

    Parameters
    ----------
    O : DenseOperator | array_like
        Operator.
    kind : str | None
        "spectral" oder "frobenius", Standard aus den Settings.

    Returns
    -------
    float
        Die Norm.
    """
    m = O.matrix if isinstance(O, DenseOperator) else np.asarray(O)
    kind = DEFAULT_SETTINGS.norm if kind is None else kind
    if m.size == 0:
        return 0.0
    if kind == "frobenius":
        return float(np.linalg.norm(m, "fro"))
    return float(np.linalg.norm(m, 2))


def _validate_density(rho: npt.NDArray[np.complex128], name: str) -> npt.NDArray[np.float64]:
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"{name} ist keine quadratische Matrix.")
    if not np.allclose(rho, rho.conj().T, atol=1e-10):
        raise HermiticityError(f"{name} ist nicht hermitesch.")
    w = np.linalg.eigvalsh(rho)
    if w.min() < -1e-10:
        raise HermiticityError(f"{name} hat negativen Eigenwert {w.min():.2e}.")
    if abs(np.trace(rho).real - 1.0) > 1e-10:
        raise HermiticityError(f"{name} hat Spur {np.trace(rho).real:.12f} statt 1.")
    return w


def uhlmann_fidelity(rho1: npt.ArrayLike, rho2: npt.ArrayLike) -> float:
    """ Fidelity Tr √(√ρ1 ρ2 √ρ1) (nicht quadriert).

    Für einen reinen Zustand wird direkt √⟨φ|ρ|φ⟩ berechnet, damit kleine
    Infidelitäten nicht im Rundungsrauschen der Matrixwurzel verschwinden.

    Parameters
    ----------
    rho1, rho2 : array_like
        Dichteoperatoren gleicher Dimension.

    Returns
    -------
    float
        Wert in [0, 1].
    """
    rho1 = np.asarray(rho1, dtype=complex)
    rho2 = np.asarray(rho2, dtype=complex)
    if rho1.shape != rho2.shape:
        raise DimensionError(f"Dichteoperatoren haben Formen {rho1.shape} und {rho2.shape}.")
    w1 = _validate_density(rho1, "rho1")
    w2 = _validate_density(rho2, "rho2")

    # Reiner Zustand in einem der Argumente
    for w, pure, other in ((w1, rho1, rho2), (w2, rho2, rho1)):
        if abs(w[-1] - 1.0) < 1e-12:
            _, v = np.linalg.eigh(pure)
            phi = v[:, -1]
            overlap = float(np.real(phi.conj() @ other @ phi))
            return float(np.sqrt(np.clip(overlap, 0.0, 1.0)))

    w, v = np.linalg.eigh(rho1)
    sqrt_rho1 = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
    m = sqrt_rho1 @ rho2 @ sqrt_rho1
    lam = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    f = float(np.sum(np.sqrt(np.clip(lam, 0.0, None))))
    return float(np.clip(f, 0.0, 1.0))


def reduce_to_system(rho_joint: DenseOperator) -> npt.NDArray[np.complex128]:
    """ Teilspur über das Bad, ρ_S = Tr_B ρ.

    Parameters
    ----------
    rho_joint : DenseOperator
        Gemeinsamer Dichteoperator.

    Returns
    -------
    npt.NDArray[np.complex128]
        Reduzierter Zustand (2^n × 2^n), Spur erhalten.
    """
    rho_s = partial_trace_bath(rho_joint)
    return 0.5 * (rho_s + rho_s.conj().T)


def segment_integral(H: DenseOperator, E: DenseOperator, duration: float) -> npt.NDArray[np.complex128]:
    """ Exaktes Integral ∫_0^τ e^{iHs} E e^{-iHs} ds in der Eigenbasis von H.

    Parameters
    ----------
    H : DenseOperator
        Hermitescher, im Segment konstanter Generator.
    E : DenseOperator
        Zu transformierender Operator.
    duration : float
        Segmentdauer τ.

    Returns
    -------
    npt.NDArray[np.complex128]
        Matrix des Integrals.
    """
    w, v = H.spectrum()
    e_eig = v.conj().T @ E.matrix @ v
    delta = w[:, None] - w[None, :]
    # ∫_0^τ e^{iδs} ds = τ e^{iδτ/2} sinc(δτ/2π) mit numpys normiertem sinc
    kernel = duration * np.exp(0.5j * delta * duration) * np.sinc(delta * duration / (2.0 * np.pi))
    return v @ (e_eig * kernel) @ v.conj().T


def phase_distance(U: npt.ArrayLike, V: npt.ArrayLike) -> float:
    """Spektralabstand min_φ ‖U - e^{iφ} V‖ (globale Phase herausgerechnet)."""
    U = np.asarray(U.matrix if isinstance(U, DenseOperator) else U)
    V = np.asarray(V.matrix if isinstance(V, DenseOperator) else V)
    overlap = np.trace(V.conj().T @ U)
    phase = overlap / abs(overlap) if abs(overlap) > 1e-14 else 1.0
    return float(np.linalg.norm(U - phase * V, 2))


if __name__ == "__main__":
    from model.pauli import PauliString

    space = JointSpace(2, 1)
    h = assemble(HamiltonianSpec().add(PauliString("XI"), 1.0), space)
    print(np.round(h.matrix.real, 3))
    u = unitary_exponential(h, np.pi / 2)
    print("exp(-iπ/2 X) ≈ -iX:", np.allclose(u.matrix, -1j * h.matrix))
    rho0 = np.diag([1.0, 0.0])
    print("f(|0><0|, I/2) =", uhlmann_fidelity(rho0, np.eye(2) / 2))
