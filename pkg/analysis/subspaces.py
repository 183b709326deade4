from __future__ import annotations

import itertools
import logging

import numpy as np
import numpy.typing as npt

from model.hamiltonian import HamiltonianSpec
from model.pauli import PauliString
from model.space import DenseOperator, JointSpace
from solver.operators import assemble

logger = logging.getLogger(__name__)


def random_bath_operator(dimension: int, rng: np.random.Generator) -> npt.NDArray[np.complex128]:
    """GUE-artige hermitesche Matrix mit Spektralnorm 1."""
    a = rng.standard_normal((dimension, dimension)) + 1j * rng.standard_normal((dimension, dimension))
    h = 0.5 * (a + a.conj().T)
    return h / np.linalg.norm(h, 2)


class ErrorSubspace:
    def __init__(self, name: str, patterns: list[PauliString]):
        """Fehlerunterraum Ω_e = span{S_γ ⊗ B_γ} mit freiem Badoperator je Muster.

        Parameters
        ----------
        name : str
            Bezeichner, z.B. "linear".
        patterns : list[PauliString]
            Systemanteile S_γ (ohne Identität).
        """
        assert patterns, "Ein Fehlerunterraum braucht mindestens ein Muster."
        lengths = {p.n_qubits for p in patterns}
        assert len(lengths) == 1, "Alle Muster müssen auf gleich vielen Qubits wirken."
        assert not any(p.is_identity() for p in patterns), "Reine Badterme gehören nicht in Ω_e."
        self.name = name
        self.patterns = [p.phase_free() for p in patterns]
        self.n_qubits = lengths.pop()

    @classmethod
    def linear(cls, n: int) -> ErrorSubspace:
        """Ω_e^{1}: beliebige Einzelqubit-Operatoren."""
        return cls("linear", [PauliString.on(n, {q: a}) for q in range(1, n + 1) for a in "XYZ"])

    @classmethod
    def dephasing(cls, n: int) -> ErrorSubspace:
        """Ω_e^{Z}: nur Z-Kopplungen."""
        return cls("dephasing", [PauliString.on(n, {q: "Z"}) for q in range(1, n + 1)])

    @classmethod
    def nearest_neighbor(cls, n: int) -> ErrorSubspace:
        """Ω_e^{2}: Ω_e^{1} plus alle Bilinearterme S_α^{(i)} S_β^{(i+1)}."""
        assert n >= 2, "Nächste-Nachbar-Terme brauchen mindestens zwei Qubits."
        bilinear = [
            PauliString.on(n, {i: a, i + 1: b})
            for i in range(1, n) for a, b in itertools.product("XYZ", repeat=2)
        ]
        return cls("nearest_neighbor", cls.linear(n).patterns + bilinear)

    @classmethod
    def from_name(cls, name: str, n: int) -> ErrorSubspace:
        factories = {"linear": cls.linear, "dephasing": cls.dephasing, "nearest_neighbor": cls.nearest_neighbor}
        if name not in factories:
            raise ValueError(f"Unbekannter Fehlerunterraum: {name} (erlaubt: {sorted(factories)})")
        return factories[name](n)

    def sample_spec(self, bath_dimension: int, rng: np.random.Generator) -> HamiltonianSpec:
        """Zufälliges Element als Termliste, ein normierter Badoperator je Muster."""
        spec = HamiltonianSpec()
        for p in self.patterns:
            spec.add(p, 1.0, random_bath_operator(bath_dimension, rng))
        return spec

    def sample(self, space: JointSpace, rng: np.random.Generator) -> DenseOperator:
        """ Zieht ein zufälliges H_e ∈ Ω_e auf ``space``.

        Parameters
        ----------
        space : JointSpace
            Zielraum, n muss zu den Mustern passen.
        rng : np.random.Generator
            Zufallsquelle.

        Returns
        -------
        DenseOperator
            Hermitesches H_e = Σ_γ S_γ ⊗ B_γ.
        """
        assert space.n_system_qubits == self.n_qubits, "Raum passt nicht zum Fehlerunterraum."
        return assemble(self.sample_spec(space.bath_dimension, rng), space)

    def contains(self, O: DenseOperator, tol: float = 1e-10) -> bool:
        """True, wenn O modulo Bad nur Komponenten aus den Mustern hat."""
        allowed = {p.labels for p in self.patterns}
        return all(
            labels in allowed or set(labels) == {"I"}
            for labels, block in pauli_components(O).items()
            if np.linalg.norm(block, 2) > tol
        )

    def to_dict(self) -> dict:
        return {"name": self.name, "patterns": [p.labels for p in self.patterns]}

    def __len__(self) -> int:
        return len(self.patterns)

    def __str__(self) -> str:
        return f"ErrorSubspace({self.name}, {len(self.patterns)} Muster, n={self.n_qubits})"

    def __repr__(self) -> str:
        return self.__str__()


def pauli_components(O: DenseOperator) -> dict[str, npt.NDArray[np.complex128]]:
    """ Zerlegung O = Σ_P P ⊗ B_P mit B_P = Tr_S[(P ⊗ I) O] / 2^n.

    Parameters
    ----------
    O : DenseOperator
        Operator auf dem Gesamtraum.

    Returns
    -------
    dict[str, npt.NDArray[np.complex128]]
        Pauli-Label -> Badoperator, für alle 4^n Strings.
    """
    space = O.space
    n, d_s, d_b = space.n_system_qubits, space.system_dimension, space.bath_dimension
    blocks = O.matrix.reshape(d_s, d_b, d_s, d_b)
    components = {}
    for letters in itertools.product("IXYZ", repeat=n):
        labels = "".join(letters)
        p = PauliString(labels).to_matrix()
        components[labels] = np.einsum("ij,jaib->ab", p, blocks) / d_s
    return components


if __name__ == "__main__":
    rng = np.random.default_rng(3)
    space = JointSpace(2, 2)
    omega = ErrorSubspace.linear(2)
    h = omega.sample(space, rng)
    print(omega, "enthält Stichprobe:", omega.contains(h))
    print("dephasierend enthält sie:", ErrorSubspace.dephasing(2).contains(h))
