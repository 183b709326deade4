from __future__ import annotations

from functools import reduce

import numpy as np
import numpy.typing as npt

PAULI_MATRICES: dict[str, npt.NDArray[np.complex128]] = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# (a, b) -> (Phase, c) mit σ_a σ_b = Phase · σ_c
_PRODUCT_TABLE: dict[tuple[str, str], tuple[complex, str]] = {}
for _p in "IXYZ":
    _PRODUCT_TABLE[("I", _p)] = (1, _p)
    _PRODUCT_TABLE[(_p, "I")] = (1, _p)
    _PRODUCT_TABLE[(_p, _p)] = (1, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _PRODUCT_TABLE[(_a, _b)] = (1j, _c)
    _PRODUCT_TABLE[(_b, _a)] = (-1j, _c)


class PauliString:
    def __init__(self, labels: str, coefficient: complex = 1.0):
        """Erstellt ein Produkt von Pauli-Operatoren auf n Qubits.

        Parameters
        ----------
        labels : str
            Ein Symbol aus {I, X, Y, Z} pro Qubit, Qubit 1 steht links.
        coefficient : complex
            Skalarer Vorfaktor.
        """
        labels = labels.upper()
        assert len(labels) >= 1, "Pauli-String braucht mindestens ein Qubit."
        assert set(labels) <= set("IXYZ"), f"Ungültige Pauli-Symbole: {labels}"
        self.labels = labels
        self.coefficient = complex(coefficient)

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls("I" * n)

    @classmethod
    def on(cls, n: int, ops: dict[int, str], coefficient: complex = 1.0) -> PauliString:
        """Baut einen Pauli-String aus einer Zuordnung Qubit -> Symbol.

        Parameters
        ----------
        n : int
            Anzahl Qubits.
        ops : dict[int, str]
            Qubit-Index (1-basiert, wie X^{(1)}) -> Symbol.
        coefficient : complex
            Vorfaktor.

        Returns
        -------
        PauliString
            Der String mit Identität auf allen übrigen Qubits.
        """
        chars = ["I"] * n
        for qubit, label in ops.items():
            assert 1 <= qubit <= n, f"Qubit {qubit} liegt außerhalb von 1..{n}."
            chars[qubit - 1] = label
        return cls("".join(chars), coefficient)

    @classmethod
    def uniform(cls, n: int, label: str) -> PauliString:
        """Kollektiver Operator S^{(all)} = S ⊗ ... ⊗ S."""
        return cls(label * n)

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    @property
    def support(self) -> list[int]:
        """1-basierte Qubits, auf denen der String nicht trivial wirkt."""
        return [i + 1 for i, c in enumerate(self.labels) if c != "I"]

    def is_identity(self) -> bool:
        return set(self.labels) == {"I"}

    def phase_free(self) -> PauliString:
        return PauliString(self.labels)

    def __mul__(self, other):
        if isinstance(other, PauliString):
            assert other.n_qubits == self.n_qubits, "Pauli-Strings haben unterschiedliche Länge."
            phase: complex = 1
            chars = []
            for a, b in zip(self.labels, other.labels):
                p, c = _PRODUCT_TABLE[(a, b)]
                phase *= p
                chars.append(c)
            return PauliString("".join(chars), phase * self.coefficient * other.coefficient)
        return PauliString(self.labels, self.coefficient * complex(other))

    def __rmul__(self, other):
        return PauliString(self.labels, self.coefficient * complex(other))

    def commutes_with(self, other: PauliString) -> bool:
        # Zwei Pauli-Strings kommutieren genau dann, wenn sie an einer geraden Zahl von Stellen antikommutieren
        clashes = sum(
            1 for a, b in zip(self.labels, other.labels)
            if a != "I" and b != "I" and a != b
        )
        return clashes % 2 == 0

    def to_matrix(self) -> npt.NDArray[np.complex128]:
        """Dichte Matrix der Dimension 2^n (Qubit 1 ist der höchstwertige Tensorfaktor)."""
        mats = [PAULI_MATRICES[c] for c in self.labels]
        return self.coefficient * reduce(np.kron, mats)

    def same_operator(self, other: PauliString) -> bool:
        return self.labels == other.labels and np.isclose(self.coefficient, other.coefficient)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return self.same_operator(other)

    def __hash__(self) -> int:
        return hash(self.labels)

    def __str__(self) -> str:
        if self.coefficient == 1:
            return self.labels
        return f"({self.coefficient:g}){self.labels}"

    def __repr__(self) -> str:
        return f"PauliString('{self.labels}', {self.coefficient!r})"


def collective_sum(n: int, label: str, qubits: list[int] | None = None) -> list[PauliString]:
    """Summanden von Σ_i S^{(i)} über die angegebenen Qubits (Standard: alle).

    Parameters
    ----------
    n : int
        Anzahl Qubits.
    label : str
        Pauli-Symbol.
    qubits : list[int] | None
        1-basierte Qubits.

    Returns
    -------
    list[PauliString]
        Ein Einzel-Qubit-String pro Qubit.
    """
    targets = qubits if qubits is not None else list(range(1, n + 1))
    return [PauliString.on(n, {q: label}) for q in targets]


def heisenberg_terms(n: int, i: int, j: int) -> list[PauliString]:
    """Summanden von σ⃗^{(i)}·σ⃗^{(j)} = X_iX_j + Y_iY_j + Z_iZ_j."""
    assert i != j, "Heisenberg-Kopplung braucht zwei verschiedene Qubits."
    return [PauliString.on(n, {i: a, j: a}) for a in "XYZ"]


if __name__ == "__main__":
    x = PauliString("XI")
    y = PauliString("YI")
    print(f"XI * YI = {x * y}")
    print(f"kommutieren: {x.commutes_with(y)}")
    print(f"X^(all) auf 3 Qubits: {PauliString.uniform(3, 'X')}")
    print(np.round(PauliString("XZ").to_matrix().real, 1))
