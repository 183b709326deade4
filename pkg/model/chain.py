from __future__ import annotations

import numpy as np
import numpy.typing as npt

from model.hamiltonian import HamiltonianSpec
from model.pauli import heisenberg_terms
from model.schedule import ControlSchedule, ControlSegment
from model.settings import DEFAULT_SETTINGS, Settings


class ChainModel:
    def __init__(self, n: int, lam: float, k: int):
        """Kette mit ständig eingeschalteter Heisenberg-Kopplung λ Σ S⃗^{(i)}·S⃗^{(i+1)}.

        Parameters
        ----------
        n : int
            Anzahl Qubits (n ≥ 3).
        lam : float
            Kopplungsstärke λ.
        k : int
            Zielpaar (k, k+1) bzw. Zielqubit k, 1-basiert.
        """
        assert n >= 3, "Gerade/ungerade Aufteilung braucht mindestens drei Qubits."
        assert 1 <= k <= n, f"Zielindex {k} liegt außerhalb von 1..{n}."
        self.n = int(n)
        self.lam = float(lam)
        self.k = int(k)

    def bonds(self) -> list[tuple[int, int]]:
        return [(i, i + 1) for i in range(1, self.n)]

    def bond_spec(self, i: int, j: int, settings: Settings = DEFAULT_SETTINGS) -> HamiltonianSpec:
        """λ S⃗^{(i)}·S⃗^{(j)} mit S = spin_scale · σ."""
        return _bond(self.n, i, j, self.lam * settings.spin_scale ** 2)

    def drift_spec(self, bonds: list[tuple[int, int]] | None = None,
                   settings: Settings = DEFAULT_SETTINGS) -> HamiltonianSpec:
        """Summe der Bindungen, Standard alle nächsten Nachbarn."""
        spec = HamiltonianSpec()
        for i, j in (self.bonds() if bonds is None else bonds):
            spec.extend(self.bond_spec(i, j, settings))
        return spec

    def to_dict(self) -> dict:
        return {"n": self.n, "lambda": self.lam, "k": self.k}

    def __str__(self) -> str:
        return f"ChainModel(n={self.n}, λ={self.lam:g}, k={self.k})"

    def __repr__(self) -> str:
        return self.__str__()


def _bond(n: int, i: int, j: int, weight: float) -> HamiltonianSpec:
    spec = HamiltonianSpec()
    for p in heisenberg_terms(n, i, j):
        spec.add(p, weight)
    return spec


def split_to_grid(schedule: ControlSchedule, step: float) -> ControlSchedule:
    """Teilt jedes Segment in Stücke der Länge ``step``."""
    segments = []
    for seg in schedule:
        pieces = int(round(seg.duration / step))
        assert pieces >= 1 and np.isclose(pieces * step, seg.duration), \
            f"Segmentdauer {seg.duration:g} ist kein Vielfaches von {step:g}."
        segments.extend(seg.copy(duration=step) for _ in range(pieces))
    return ControlSchedule(segments, schedule.n_qubits, schedule.name, schedule.target)


class DriftSchedule:
    def __init__(self, layer1: ControlSchedule, layer2: ControlSchedule | None,
                 chain: ChainModel, name: str = "", target: npt.ArrayLike | None = None):
        """Zwei parallele Kontrollschichten auf disjunkten Qubits.

        Parameters
        ----------
        layer1 : ControlSchedule
            Schicht 1 (EDD bzw. DCG über 𝒢_NN).
        layer2 : ControlSchedule | None
            Schicht 2 auf dem Zielpaar inklusive H_{S,g}; None bei Einzelqubit-Blöcken.
        chain : ChainModel
            Die Kette.
        name : str
            Bezeichner.
        target : array_like | None
            Beabsichtigtes Gesamtgatter.
        """
        assert layer1.n_qubits == chain.n, "Schicht 1 passt nicht zur Kette."
        if layer2 is not None:
            assert layer2.n_qubits == chain.n, "Schicht 2 passt nicht zur Kette."
            assert np.isclose(layer1.total_duration, layer2.total_duration), \
                "Beide Schichten müssen gleich lang sein."
        self.layer1 = layer1
        self.layer2 = layer2
        self.chain = chain
        self.name = name
        self.target = None if target is None else np.array(target, dtype=complex)

    @property
    def total_duration(self) -> float:
        return self.layer1.total_duration

    @property
    def step(self) -> float:
        """Gemeinsames Raster: kürzeste Segmentdauer beider Schichten."""
        durations = [s.duration for s in self.layer1]
        if self.layer2 is not None:
            durations += [s.duration for s in self.layer2]
        return min(durations)

    def layer(self, index: int) -> ControlSchedule:
        """Schicht 1 oder 2 auf dem gemeinsamen Raster."""
        assert index in (1, 2), "Es gibt nur die Schichten 1 und 2."
        sched = self.layer1 if index == 1 else self.layer2
        assert sched is not None, "Dieser Block hat keine zweite Schicht."
        return split_to_grid(sched, self.step)

    def merged(self) -> ControlSchedule:
        """ Gesamtschedule: pro Rasterpunkt die Summe beider Schichten.

        Returns
        -------
        ControlSchedule
            Segmente der Länge ``step`` mit Rolle "drift" und Schicht 0
            (bei nur einer Schicht deren Segmente unverändert).
        """
        if self.layer2 is None:
            return ControlSchedule(self.layer1.segments, self.chain.n, self.name, self.target)
        segments = []
        for a, b in zip(self.layer(1), self.layer(2)):
            control = a.hamiltonian.scaled(a.amplitude).extend(b.hamiltonian.scaled(b.amplitude))
            static = HamiltonianSpec(list(a.static.terms) + list(b.static.terms))
            segments.append(ControlSegment(control, 1.0, a.duration, role="drift",
                                           token=f"{a.token}|{b.token}", layer=0, static=static))
        return ControlSchedule(segments, self.chain.n, self.name, self.target)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "chain": self.chain.to_dict(),
            "layers": {"1": self.layer1.to_dict()},
        }
        if self.layer2 is not None:
            d["layers"]["2"] = self.layer2.to_dict()
        merged = self.merged()
        d["merged"] = merged.to_dict()
        return d

    def __len__(self) -> int:
        return len(self.merged())

    def __str__(self) -> str:
        layers = 1 if self.layer2 is None else 2
        return f"DriftSchedule({self.name or '-'}, {layers} Schicht(en), {len(self)} Segmente, T={self.total_duration:.4g})"

    def __repr__(self) -> str:
        return self.__str__()


if __name__ == "__main__":
    chain = ChainModel(4, 1.0, 1)
    print(chain, chain.drift_spec())
