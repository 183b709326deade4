from __future__ import annotations

import re

import numpy as np
import numpy.typing as npt
import scipy.linalg

from model.errors import ConfigError
from model.hamiltonian import HamiltonianSpec
from model.pauli import PauliString, heisenberg_terms

KINDS = ("x", "y", "z", "w", "noop")

_ANGLE = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?P<num>(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?)?\s*\*?\s*(?P<pi>pi)?\s*(/\s*(?P<den>\d+(\.\d*)?))?\s*$"
)


def parse_angle(text: str) -> float:
    """Liest Winkel wie ``pi/4``, ``-pi/2``, ``3pi/4``, ``0.25``.

    Parameters
    ----------
    text : str
        Winkelangabe.

    Returns
    -------
    float
        Winkel in Radiant.
    """
    m = _ANGLE.match(text.lower())
    if m is None or (m.group("num") is None and m.group("pi") is None):
        raise ConfigError(f"Ungültiger Winkel: {text!r}")
    num = m.group("num")
    value = float(num) if num is not None else 1.0
    if m.group("sign") == "-":
        value = -value
    if m.group("pi"):
        value *= np.pi
    if m.group("den"):
        value /= float(m.group("den"))
    return value


class GateSpec:
    def __init__(self, kind: str, qubits: tuple[int, ...] = (), angle: float = 0.0):
        """Zielgatter Q = exp(-iθC) mit θ = angle/2.

        Eine Rotation "um φ" ist exp(-i(φ/2)C) mit σ-normiertem C. Für ``w`` ist
        C = σ⃗·σ⃗ auf einem Qubitpaar, damit ist ``w`` mit φ = π/4 genau √SWAP
        (bis auf eine globale Phase).

        Parameters
        ----------
        kind : str
            "x", "y", "z" (Einzelqubit), "w" (Heisenberg-Paar) oder "noop".
        qubits : tuple[int, ...]
            1-basierte Zielqubits.
        angle : float
            Rotationswinkel φ.
        """
        kind = kind.lower()
        if kind not in KINDS:
            raise ConfigError(f"Unbekannter Gattertyp: {kind}")
        qubits = tuple(int(q) for q in qubits)
        expected = {"w": 2, "noop": 0}.get(kind, 1)
        if len(qubits) != expected:
            raise ConfigError(f"Gatter '{kind}' braucht {expected} Qubits, erhalten {qubits}.")
        if kind == "w" and qubits[0] == qubits[1]:
            raise ConfigError("Heisenberg-Gatter braucht zwei verschiedene Qubits.")
        if any(q < 1 for q in qubits):
            raise ConfigError(f"Qubit-Indizes sind 1-basiert: {qubits}")
        self.kind = kind
        self.qubits = qubits
        self.angle = float(angle) if kind != "noop" else 0.0

    @classmethod
    def parse(cls, text: str) -> GateSpec:
        """Liest ``x:1:pi/4``, ``w:1,2:pi/4`` oder ``noop``."""
        text = text.strip()
        if text.lower() == "noop":
            return cls("noop")
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"Gatterangabe {text!r} hat nicht die Form kind:qubits:angle.")
        kind, qubits, angle = parts
        try:
            qs = tuple(int(q) for q in qubits.split(","))
        except ValueError:
            raise ConfigError(f"Ungültige Qubitliste: {qubits!r}") from None
        return cls(kind, qs, parse_angle(angle))

    @property
    def theta(self) -> float:
        return 0.5 * self.angle

    def is_noop(self) -> bool:
        return self.kind == "noop"

    def check_register(self, n: int) -> None:
        if any(q > n for q in self.qubits):
            raise ConfigError(f"Gatter {self} passt nicht in ein Register mit {n} Qubits.")

    def generator(self, n: int) -> HamiltonianSpec:
        """σ-normierter Erzeuger C auf n Qubits."""
        self.check_register(n)
        spec = HamiltonianSpec()
        if self.kind in ("x", "y", "z"):
            spec.add(PauliString.on(n, {self.qubits[0]: self.kind.upper()}))
        elif self.kind == "w":
            for p in heisenberg_terms(n, *self.qubits):
                spec.add(p)
        return spec

    def target(self, n: int) -> npt.NDArray[np.complex128]:
        """Geschlossene Zielunitäre exp(-iθC) der Dimension 2^n."""
        d = 2 ** n
        c = np.zeros((d, d), dtype=complex)
        for term in self.generator(n).terms:
            c += term.weight * term.pauli.to_matrix()
        return scipy.linalg.expm(-1j * self.theta * c)

    def to_text(self) -> str:
        if self.is_noop():
            return "noop"
        return f"{self.kind}:{','.join(map(str, self.qubits))}:{self.angle!r}"

    def to_dict(self) -> dict:
        return {"kind": self.kind, "qubits": list(self.qubits), "angle": self.angle}

    @classmethod
    def from_dict(cls, d: dict) -> GateSpec:
        angle = d.get("angle", 0.0)
        if isinstance(angle, str):
            angle = parse_angle(angle)
        return cls(d["kind"], tuple(d.get("qubits", ())), angle)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"GateSpec({self.to_text()!r})"


if __name__ == "__main__":
    g = GateSpec.parse("w:1,2:pi/4")
    sqrt_swap = np.array([[1, 0, 0, 0],
                          [0, (1 + 1j) / 2, (1 - 1j) / 2, 0],
                          [0, (1 - 1j) / 2, (1 + 1j) / 2, 0],
                          [0, 0, 0, 1]])
    u = g.target(2)
    phase = u[0, 0] / sqrt_swap[0, 0]
    print(g, "= √SWAP:", np.allclose(u, phase * sqrt_swap))
