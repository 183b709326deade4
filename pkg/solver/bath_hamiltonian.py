import logging

import numpy as np
import numpy.typing as npt

from model.hamiltonian import HamiltonianSpec
from model.pauli import PauliString
from model.settings import DEFAULT_SETTINGS, Settings
from model.space import DenseOperator
from model.spin_bath import SpinBathModel
from solver.operators import assemble

logger = logging.getLogger(__name__)


def _bath_pauli(n_bath: int, k: int, label: str) -> npt.NDArray[np.complex128]:
    return PauliString.on(n_bath, {k: label}).to_matrix()


def bath_spec(model: SpinBathModel, settings: Settings = DEFAULT_SETTINGS) -> HamiltonianSpec:
    """H_B = Σ_{i<j} Γ_ij (I⃗^(i)·I⃗^(j) − 3 I_Z^(i) I_Z^(j)) als reiner Badterm."""
    s2 = settings.spin_scale ** 2
    d_b = model.bath_dimension
    h_b = np.zeros((d_b, d_b), dtype=complex)
    for i, j in zip(*np.nonzero(model.gamma_couplings)):
        g = model.gamma_couplings[i, j]
        pair = sum(_bath_pauli(model.n_bath, i + 1, a) @ _bath_pauli(model.n_bath, j + 1, a) for a in "XYZ")
        zz = _bath_pauli(model.n_bath, i + 1, "Z") @ _bath_pauli(model.n_bath, j + 1, "Z")
        h_b += g * s2 * (pair - 3.0 * zz)
    spec = HamiltonianSpec()
    if np.any(h_b):
        spec.add(PauliString.identity(model.n), 1.0, h_b)
    return spec


def coupling_spec(model: SpinBathModel, settings: Settings = DEFAULT_SETTINGS) -> HamiltonianSpec:
    """ H_SB = Σ_{i,k} A_k^{(i)} S⃗^{(i)}·I⃗^{(k)} als Summe S_α^{(i)} ⊗ B_α^{(i)}.

    Parameters
    ----------
    model : SpinBathModel
        Das Badmodell.
    settings : Settings
        Liefert die Spin-Konvention S = spin_scale · σ.

    Returns
    -------
    HamiltonianSpec
        Höchstens 3n Terme, nur lineare Systemanteile.
    """
    s2 = settings.spin_scale ** 2
    spec = HamiltonianSpec()
    for i in range(model.n):
        for a in "XYZ":
            b = sum(
                model.hyperfine_couplings[i, k] * _bath_pauli(model.n_bath, k + 1, a)
                for k in range(model.n_bath)
            )
            if np.any(b):
                spec.add(PauliString.on(model.n, {i + 1: a}), s2, b)
    return spec


def build_internal_hamiltonian(model: SpinBathModel, settings: Settings = DEFAULT_SETTINGS,
                               ) -> tuple[DenseOperator, DenseOperator]:
    """ Baut (H_B, H_SB) als dichte Operatoren auf dem Raum des Modells.

    Parameters
    ----------
    model : SpinBathModel
        Das Badmodell.
    settings : Settings
        Spin-Konvention und Dimensionsgrenze.

    Returns
    -------
    tuple[DenseOperator, DenseOperator]
        H_B (wirkt als I_S ⊗ ·) und H_SB.
    """
    space = model.space(settings.dimension_cap)
    h_b = assemble(bath_spec(model, settings), space)
    h_sb = assemble(coupling_spec(model, settings), space)
    logger.debug("H_int für %s: ‖H_B‖=%.3g", model, np.linalg.norm(h_b.matrix, 2))
    return h_b, h_sb


if __name__ == "__main__":
    from model.spin_bath import sample_bath_model

    m = sample_bath_model(1, 1, 0.0, 1.0, seed=1)
    h_b, h_sb = build_internal_hamiltonian(m)
    print(np.round(h_sb.matrix.real / m.hyperfine_couplings[0, 0], 3))
