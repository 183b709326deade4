import logging

import numpy as np
import numpy.typing as npt

from model.settings import DEFAULT_SETTINGS
from solver.operators import uhlmann_fidelity

logger = logging.getLogger(__name__)


def ideal_output(target: npt.ArrayLike, psi_in: npt.ArrayLike) -> npt.NDArray[np.complex128]:
    """Q|ψ_in⟩⟨ψ_in|Q†."""
    phi = np.asarray(target, dtype=complex) @ np.asarray(psi_in, dtype=complex)
    return np.outer(phi, phi.conj())


def gate_fidelity(rho_s: npt.ArrayLike, target: npt.ArrayLike, psi_in: npt.ArrayLike) -> float:
    """ Fidelity des reduzierten Endzustands mit dem idealen Ausgang Q|ψ_in⟩.

    Parameters
    ----------
    rho_s : array_like
        Reduzierter Zustand nach der Evolution.
    target : array_like
        Zielgatter Q auf dem System.
    psi_in : array_like
        Fester Eingangszustand.

    Returns
    -------
    float
        uhlmann_fidelity(ρ_S, Q|ψ⟩⟨ψ|Q†) in [0, 1].
    """
    return uhlmann_fidelity(rho_s, ideal_output(target, psi_in))


def gate_infidelity(rho_s: npt.ArrayLike, target: npt.ArrayLike, psi_in: npt.ArrayLike) -> float:
    """1 - f ohne Auslöschung: (1 - p)/(1 + √p) mit p = ⟨φ|ρ_S|φ⟩."""
    phi = np.asarray(target, dtype=complex) @ np.asarray(psi_in, dtype=complex)
    rho_s = np.asarray(rho_s, dtype=complex)
    p = float(np.clip(np.real(phi.conj() @ rho_s @ phi), 0.0, 1.0))
    # 1 - p über das orthogonale Komplement von φ, damit kleine Werte nicht auslöschen
    basis, _ = np.linalg.qr(np.column_stack([phi, np.eye(len(phi))]))
    perp = basis[:, 1:]
    complement = float(np.real(np.trace(perp.conj().T @ rho_s @ perp)))
    return max(complement, 0.0) / (1.0 + np.sqrt(p))


def improvement_ratio(f_prim: float, f_dcg: float,
                      floor: float = DEFAULT_SETTINGS.infidelity_floor) -> tuple[float, bool]:
    """ r = (1 - f_prim)/(1 - f_dcg); r > 1 heißt, das DCG ist besser.

    Parameters
    ----------
    f_prim, f_dcg : float
        Fidelities in [0, 1].
    floor : float
        Untergrenze des Nenners.

    Returns
    -------
    tuple[float, bool]
        (r, gesättigt); bei 1 - f_dcg < floor wird mit floor gerechnet und
        der Punkt als gesättigt markiert.
    """
    assert 0.0 <= f_prim <= 1.0 and 0.0 <= f_dcg <= 1.0, "Fidelities müssen in [0, 1] liegen."
    return ratio_from_infidelities(1.0 - f_prim, 1.0 - f_dcg, floor)


def ratio_from_infidelities(e_prim: float, e_dcg: float,
                            floor: float = DEFAULT_SETTINGS.infidelity_floor) -> tuple[float, bool]:
    """Wie improvement_ratio, aber direkt auf 1 - f."""
    saturated = bool(e_dcg < floor)
    if saturated:
        logger.debug("Nenner 1-f_dcg = %.3g unter der Untergrenze %.0e", e_dcg, floor)
    return float(e_prim / max(e_dcg, floor)), saturated


if __name__ == "__main__":
    psi = np.array([1.0, 1.0]) / np.sqrt(2.0)
    dephased = np.diag([0.5, 0.5])
    print("f =", gate_fidelity(dephased, np.eye(2), psi))
    print("r =", improvement_ratio(0.99, 0.9999))
