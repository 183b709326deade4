from __future__ import annotations

import numpy as np
import numpy.typing as npt

from model.pauli import PauliString


class HamiltonianTerm:
    def __init__(self, pauli: PauliString, weight: float = 1.0,
                 bath: npt.ArrayLike | None = None):
        """Ein Summand S_γ ⊗ B_γ mit reellem Gewicht.

        Parameters
        ----------
        pauli : PauliString
            Systemanteil.
        weight : float
            Gewicht in Energieeinheiten.
        bath : array_like | None
            Dichter Badoperator, None steht für die Identität auf dem Bad.
        """
        self.pauli = pauli
        self.weight = float(weight)
        self.bath = None if bath is None else np.array(bath, dtype=complex)

    def is_pure_bath(self) -> bool:
        """True für I_S ⊗ B mit nichttrivialem Badanteil."""
        return self.pauli.is_identity() and self.bath is not None

    def __str__(self) -> str:
        bath = "I_B" if self.bath is None else f"B{self.bath.shape}"
        return f"{self.weight:+g}·{self.pauli}⊗{bath}"

    def __repr__(self) -> str:
        return self.__str__()


class HamiltonianSpec:
    def __init__(self, terms: list[HamiltonianTerm] | None = None):
        """Symbolische gewichtete Summe von Pauli-Produkten (optional mit Badoperatoren)."""
        self.terms: list[HamiltonianTerm] = list(terms) if terms else []

    def add(self, pauli: PauliString, weight: float = 1.0,
            bath: npt.ArrayLike | None = None) -> HamiltonianSpec:
        self.terms.append(HamiltonianTerm(pauli, weight, bath))
        return self

    def extend(self, other: HamiltonianSpec) -> HamiltonianSpec:
        self.terms.extend(other.terms)
        return self

    def scaled(self, factor: float) -> HamiltonianSpec:
        return HamiltonianSpec([
            HamiltonianTerm(t.pauli, t.weight * factor, t.bath) for t in self.terms
        ])

    def n_qubits(self) -> int | None:
        return self.terms[0].pauli.n_qubits if self.terms else None

    def is_system_only(self) -> bool:
        return all(t.bath is None for t in self.terms)

    def to_dict(self) -> list[dict]:
        """Serialisiert reine Systemterme als Liste von {labels, weight}."""
        assert self.is_system_only(), "Nur Systemterme sind serialisierbar."
        return [{"labels": t.pauli.labels, "weight": t.weight} for t in self.terms]

    @classmethod
    def from_dict(cls, items: list[dict]) -> HamiltonianSpec:
        return cls([HamiltonianTerm(PauliString(d["labels"]), d["weight"]) for d in items])

    def render(self) -> str:
        """Kompakte Textform, z.B. ``+1*XI+1*IX``."""
        return "".join(f"{t.weight:+.17g}*{t.pauli.labels}" for t in self.terms)

    @classmethod
    def parse(cls, text: str) -> HamiltonianSpec:
        """Umkehrung von ``render``; wirft ValueError bei ungültiger Syntax."""
        spec = cls()
        text = text.strip()
        if not text or text == "0":
            return spec
        # Vorzeichen trennen die Summanden; Exponenten (1e-05) nicht zerschneiden
        chunks, current = [], ""
        for i, ch in enumerate(text):
            if ch in "+-" and current and text[i - 1] not in "eE":
                chunks.append(current)
                current = ""
            current += ch
        chunks.append(current)
        for chunk in chunks:
            weight, sep, labels = chunk.partition("*")
            if not sep:
                raise ValueError(f"Ungültiger Term: {chunk!r}")
            spec.add(PauliString(labels.strip()), float(weight))
        return spec

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        return " ".join(str(t) for t in self.terms) or "0"

    def __repr__(self) -> str:
        return f"HamiltonianSpec({len(self.terms)} terms)"


if __name__ == "__main__":
    h = HamiltonianSpec().add(PauliString("XI"), 0.5).add(PauliString("II"), 1.0, np.eye(2))
    print(h, [t.is_pure_bath() for t in h.terms])
