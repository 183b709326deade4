from __future__ import annotations

import numpy as np
import numpy.typing as npt

from model.hamiltonian import HamiltonianSpec

ROLES = ("generator", "I_Q", "Q_half", "Q", "free", "drift")

# Nominale Dauer in Einheiten von τ je Rolle
ROLE_MULTIPLIERS = {"generator": 1, "I_Q": 2, "Q_half": 2, "Q": 1, "free": 1}


class ControlSegment:
    def __init__(self, hamiltonian: HamiltonianSpec, amplitude: float, duration: float,
                 role: str = "Q", token: str = "", layer: int = 1,
                 static: HamiltonianSpec | None = None):
        """Rechteckiges Kontrollsegment: H_g = amplitude · hamiltonian + static für die Dauer τ.

        Parameters
        ----------
        hamiltonian : HamiltonianSpec
            Steuerbarer Systemanteil (ohne Bad).
        amplitude : float
            Skalierung der Steuerung, z.B. θ/τ.
        duration : float
            Dauer des Segments.
        role : str
            Eine der ROLES.
        token : str
            Symbolischer Name des Gatters (X, Y, I_Q, ...).
        layer : int
            Kontrollschicht (1 oder 2 bei Drift-Blöcken).
        static : HamiltonianSpec | None
            Immer eingeschalteter Systemanteil H_{S,g}; wird von Kontrollfehlern nicht skaliert.
        """
        assert duration > 0, "Segmentdauer muss positiv sein."
        assert role in ROLES, f"Unbekannte Rolle: {role}"
        assert hamiltonian.is_system_only(), "Kontroll-Hamiltonians wirken nur auf das System."
        self.hamiltonian = hamiltonian
        self.amplitude = float(amplitude)
        self.duration = float(duration)
        self.role = role
        self.token = token
        self.layer = int(layer)
        self.static = static if static is not None else HamiltonianSpec()

    def gating_spec(self) -> HamiltonianSpec:
        """Vollständiger Gating-Hamiltonian dieses Segments als Termliste."""
        spec = self.hamiltonian.scaled(self.amplitude)
        return spec.extend(HamiltonianSpec(list(self.static.terms)))

    def copy(self, **changes) -> ControlSegment:
        fields = {
            "hamiltonian": self.hamiltonian, "amplitude": self.amplitude,
            "duration": self.duration, "role": self.role, "token": self.token,
            "layer": self.layer, "static": self.static,
        }
        fields.update(changes)
        return ControlSegment(**fields)

    def to_dict(self) -> dict:
        return {
            "hamiltonian": self.hamiltonian.to_dict(),
            "amplitude": self.amplitude,
            "duration": self.duration,
            "role": self.role,
            "token": self.token,
            "layer": self.layer,
            "static": self.static.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> ControlSegment:
        return cls(
            hamiltonian=HamiltonianSpec.from_dict(d["hamiltonian"]),
            amplitude=d["amplitude"],
            duration=d["duration"],
            role=d.get("role", "Q"),
            token=d.get("token", ""),
            layer=d.get("layer", 1),
            static=HamiltonianSpec.from_dict(d.get("static", [])),
        )

    def __str__(self) -> str:
        return f"{self.role}:{self.token or '-'}({self.amplitude:.4g}·[{self.hamiltonian}], τ={self.duration:.4g})"

    def __repr__(self) -> str:
        return self.__str__()


class ControlSchedule:
    def __init__(self, segments: list[ControlSegment], n_qubits: int, name: str = "",
                 target: npt.ArrayLike | None = None):
        """Stückweise konstanter Gating-Hamiltonian auf n Systemqubits.

        Parameters
        ----------
        segments : list[ControlSegment]
            Segmente in Anwendungsreihenfolge.
        n_qubits : int
            Anzahl Systemqubits.
        name : str
            Bezeichner für Berichte.
        target : array_like | None
            Beabsichtigtes Systemgatter (2^n × 2^n), falls bekannt.
        """
        assert n_qubits >= 1, "Ein Schedule braucht mindestens ein Qubit."
        for seg in segments:
            for spec in (seg.hamiltonian, seg.static):
                m = spec.n_qubits()
                assert m is None or m == n_qubits, f"Segment {seg} passt nicht zu {n_qubits} Qubits."
        self.segments = list(segments)
        self.n_qubits = int(n_qubits)
        self.name = name
        self.target = None if target is None else np.array(target, dtype=complex)

    @property
    def total_duration(self) -> float:
        return float(sum(s.duration for s in self.segments))

    def without_segment(self, index: int) -> ControlSchedule:
        """Kopie ohne das Segment ``index`` (für Gegenproben)."""
        segments = self.segments[:index] + self.segments[index + 1:]
        return ControlSchedule(segments, self.n_qubits, f"{self.name}-del{index}", self.target)

    def roles(self) -> list[str]:
        return [s.role for s in self.segments]

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "n_qubits": self.n_qubits,
            "segments": [s.to_dict() for s in self.segments],
        }
        if self.target is not None:
            d["target"] = {"real": self.target.real.tolist(), "imag": self.target.imag.tolist()}
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ControlSchedule:
        target = None
        if "target" in d:
            target = np.array(d["target"]["real"]) + 1j * np.array(d["target"]["imag"])
        return cls([ControlSegment.from_dict(s) for s in d["segments"]],
                   d["n_qubits"], d.get("name", ""), target)

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def __getitem__(self, index: int) -> ControlSegment:
        return self.segments[index]

    def __str__(self) -> str:
        return f"ControlSchedule({self.name or '-'}, {len(self.segments)} Segmente, T={self.total_duration:.4g})"

    def __repr__(self) -> str:
        return self.__str__()


class ControlProfile(ControlSchedule):
    def __init__(self, segments: list[ControlSegment], n_qubits: int, target: npt.ArrayLike,
                 name: str = "Q"):
        """Rechteckprofil h^Q(t) für ein Zielgatter Q (das Ziel ist Pflicht)."""
        super().__init__(segments, n_qubits, name, target)


class BalancePair:
    def __init__(self, identity_profile: ControlProfile, gate_profile: ControlProfile):
        """Erstordnungs-Balancepaar (I_Q, Q_{1/2}) gleicher Dauer."""
        assert np.isclose(identity_profile.total_duration, gate_profile.total_duration), \
            "Beide Profile eines Balancepaars müssen gleich lang sein."
        self.identity_profile = identity_profile
        self.gate_profile = gate_profile

    @property
    def duration(self) -> float:
        return self.gate_profile.total_duration

    def __str__(self) -> str:
        return f"BalancePair(I_Q: {len(self.identity_profile)} Seg., Q_half: {len(self.gate_profile)} Seg., T={self.duration:.4g})"

    def __repr__(self) -> str:
        return self.__str__()


class SequenceToken:
    def __init__(self, role: str, label: str, multiplier: int | None = None,
                 generator_index: int | None = None):
        """Symbolisches Gatter einer EDD/DCG-Sequenz."""
        assert role in ROLE_MULTIPLIERS, f"Unbekannte Rolle: {role}"
        self.role = role
        self.label = label
        self.multiplier = ROLE_MULTIPLIERS[role] if multiplier is None else int(multiplier)
        self.generator_index = generator_index

    def __eq__(self, other) -> bool:
        if not isinstance(other, SequenceToken):
            return NotImplemented
        return (self.role, self.label, self.multiplier) == (other.role, other.label, other.multiplier)

    def __hash__(self) -> int:
        return hash((self.role, self.label, self.multiplier))

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return f"SequenceToken({self.role}, {self.label}, {self.multiplier})"


class SequenceSpec:
    def __init__(self, tokens: list[SequenceToken], name: str = "", group_name: str = ""):
        """Geordnete Gatterliste in Anwendungsreihenfolge (erstes Token wirkt zuerst)."""
        self.tokens = list(tokens)
        self.name = name
        self.group_name = group_name

    @property
    def total_multiplier(self) -> int:
        return sum(t.multiplier for t in self.tokens)

    def labels(self) -> list[str]:
        return [t.label for t in self.tokens]

    def render(self) -> str:
        """Operatorschreibweise: rechts steht das zuerst angewandte Gatter."""
        return " ".join(reversed(self.labels()))

    def to_text(self) -> str:
        """Zeilenformat ``role:token:duration_multiplier``."""
        return "\n".join(f"{t.role}:{t.label}:{t.multiplier}" for t in self.tokens) + "\n"

    @classmethod
    def from_text(cls, text: str, name: str = "") -> SequenceSpec:
        tokens = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(":")
            if len(parts) != 3:
                raise ValueError(f"Zeile {lineno}: erwartet role:token:multiplier, erhalten {line!r}")
            role, label, mult = parts
            if role not in ROLE_MULTIPLIERS:
                raise ValueError(f"Zeile {lineno}: unbekannte Rolle {role!r}")
            tokens.append(SequenceToken(role, label, int(mult)))
        return cls(tokens, name)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "group": self.group_name,
            "total_multiplier": self.total_multiplier,
            "tokens": [{"role": t.role, "label": t.label, "multiplier": t.multiplier} for t in self.tokens],
        }

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __str__(self) -> str:
        return f"{self.name or 'Sequenz'}: {self.render()} (Dauer {self.total_multiplier}τ)"

    def __repr__(self) -> str:
        return f"SequenceSpec({self.name!r}, {len(self.tokens)} Tokens)"


if __name__ == "__main__":
    from model.pauli import PauliString

    x = HamiltonianSpec().add(PauliString("X"), 1.0)
    seg = ControlSegment(x, np.pi / 2, 1.0, role="generator", token="X")
    print(ControlSchedule([seg, seg], 1, "XX"))
    seq = SequenceSpec([SequenceToken("generator", "X"), SequenceToken("I_Q", "I_Q"),
                        SequenceToken("generator", "X"), SequenceToken("Q_half", "Q_half")])
    print(seq)
