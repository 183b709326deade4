from __future__ import annotations

import itertools
import logging

import networkx as nx
import numpy as np

from model.errors import GroupError
from model.pauli import PauliString

logger = logging.getLogger(__name__)


class DecouplingGroup:
    def __init__(self, elements: list[str], table: dict[tuple[str, str], str],
                 generators: list[str], generator_names: list[str] | None = None,
                 name: str = ""):
        """Endliche Gruppe mit expliziter Multiplikationstafel und Erzeugendensystem Γ.

        Parameters
        ----------
        elements : list[str]
            Elementnamen g_1..g_d, g_1 ist das neutrale Element.
        table : dict[tuple[str, str], str]
            (g, h) -> g·h für alle Paare.
        generators : list[str]
            Elemente h_1..h_m, die als Pulse realisiert werden.
        generator_names : list[str] | None
            Tokennamen der Erzeuger (z.B. "X", "Y"), Standard sind die Elementnamen.
        name : str
            Bezeichner.
        """
        assert len(elements) >= 1, "Eine Gruppe braucht mindestens ein Element."
        assert len(set(elements)) == len(elements), "Elementnamen müssen eindeutig sein."
        element_set = set(elements)
        for a, b in itertools.product(elements, repeat=2):
            if table.get((a, b)) not in element_set:
                raise GroupError(f"Multiplikationstafel nicht abgeschlossen bei ({a}, {b}).")
        e = elements[0]
        if any(table[(e, g)] != g or table[(g, e)] != g for g in elements):
            raise GroupError(f"{e} ist kein neutrales Element.")
        for h in generators:
            if h not in element_set:
                raise GroupError(f"Erzeuger {h} ist kein Gruppenelement.")
        if generator_names is not None:
            assert len(generator_names) == len(generators), "Ein Name pro Erzeuger."

        self.elements = list(elements)
        self.table = dict(table)
        self.generators = list(generators)
        self.generator_names = list(generator_names) if generator_names is not None else list(generators)
        self.name = name

    @classmethod
    def z2_power(cls, k: int, generators: list[tuple[int, ...]],
                 generator_names: list[str] | None = None, name: str = "") -> DecouplingGroup:
        """ℤ₂^k mit Elementen als Bitstrings und komponentenweiser XOR-Verknüpfung.

        Parameters
        ----------
        k : int
            Anzahl der ℤ₂-Faktoren.
        generators : list[tuple[int, ...]]
            Erzeuger als Bit-Tupel der Länge k.
        generator_names : list[str] | None
            Tokennamen der Erzeuger.
        name : str
            Bezeichner.

        Returns
        -------
        DecouplingGroup
            Die Gruppe, das neutrale Element "0…0" steht vorne.
        """
        assert k >= 0, "k darf nicht negativ sein."
        bits = sorted(itertools.product((0, 1), repeat=k), key=lambda b: (sum(b), b[::-1]))
        labels = ["".join(map(str, b)) or "e" for b in bits]
        lookup = dict(zip(bits, labels))
        table = {
            (lookup[a], lookup[b]): lookup[tuple(x ^ y for x, y in zip(a, b))]
            for a, b in itertools.product(bits, repeat=2)
        }
        gens = [lookup[tuple(g)] for g in generators]
        return cls(labels, table, gens, generator_names, name)

    @property
    def identity(self) -> str:
        return self.elements[0]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    def multiply(self, a: str, b: str) -> str:
        return self.table[(a, b)]

    def __str__(self) -> str:
        return f"DecouplingGroup({self.name or '-'}, d={self.order}, m={self.n_generators})"

    def __repr__(self) -> str:
        return self.__str__()


class GroupRepresentation:
    def __init__(self, group: DecouplingGroup, operators: dict[str, PauliString]):
        """Projektive Darstellung g -> G_g durch Pauli-Strings.

        Parameters
        ----------
        group : DecouplingGroup
            Die abstrakte Gruppe.
        operators : dict[str, PauliString]
            Element -> Systemunitär; G_{g_1} muss die Identität sein.
        """
        if set(operators) != set(group.elements):
            raise GroupError("Darstellung muss jedem Gruppenelement einen Operator zuordnen.")
        lengths = {p.n_qubits for p in operators.values()}
        if len(lengths) != 1:
            raise GroupError("Alle Darstellungsoperatoren müssen auf gleich vielen Qubits wirken.")
        if not operators[group.identity].is_identity():
            raise GroupError("Das neutrale Element muss durch I_S dargestellt werden.")
        # Homomorphie bis auf Phase: G_a G_b ∝ G_{ab}
        for a, b in itertools.product(group.elements, repeat=2):
            prod = operators[a] * operators[b]
            if prod.labels != operators[group.multiply(a, b)].labels:
                raise GroupError(f"G_{a}·G_{b} ist nicht proportional zu G_{group.multiply(a, b)}.")
        self.group = group
        self.operators = dict(operators)
        self.n_qubits = lengths.pop()

    def __getitem__(self, element: str) -> PauliString:
        return self.operators[element]

    def generator_operator(self, index: int) -> PauliString:
        return self.operators[self.group.generators[index]]

    def is_faithful(self) -> bool:
        """True, wenn verschiedene Elemente verschiedene Operatoren (modulo Phase) haben."""
        return len({p.labels for p in self.operators.values()}) == self.group.order

    def matrices(self) -> list[np.ndarray]:
        """Dichte Systemmatrizen G_i in Reihenfolge der Elemente."""
        return [self.operators[g].to_matrix() for g in self.group.elements]

    def __str__(self) -> str:
        ops = ", ".join(f"{g}->{self.operators[g].labels}" for g in self.group.elements)
        return f"GroupRepresentation({ops})"

    def __repr__(self) -> str:
        return self.__str__()


class CayleyGraph:
    def __init__(self, group: DecouplingGroup, graph: nx.MultiDiGraph):
        """Cayley-Graph als networkx-Multigraph.

        Kanten (g, h·g) tragen die Attribute ``generator`` (Index j), ``label``
        (Tokenname) und ``kind`` ("generator" oder "loop" für I_Q-Schleifen).
        """
        self.group = group
        self.graph = graph

    @property
    def n_vertices(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def n_edges(self) -> int:
        return self.graph.number_of_edges()

    def has_self_loops(self) -> bool:
        return any(d["kind"] == "loop" for _, _, d in self.graph.edges(data=True))

    def __str__(self) -> str:
        return f"CayleyGraph({self.group.name or '-'}, V={self.n_vertices}, E={self.n_edges})"

    def __repr__(self) -> str:
        return self.__str__()


def trivial_group(n: int) -> tuple[DecouplingGroup, GroupRepresentation]:
    """Gruppe {I} ohne Erzeuger."""
    group = DecouplingGroup.z2_power(0, [], name="trivial")
    return group, GroupRepresentation(group, {group.identity: PauliString.identity(n)})


def dephasing_group(n: int) -> tuple[DecouplingGroup, GroupRepresentation]:
    """𝒢_Z = ℤ₂ mit Darstellung {I, X^(all)}."""
    group = DecouplingGroup.z2_power(1, [(1,)], ["X"], name="G_Z")
    rep = GroupRepresentation(group, {
        "0": PauliString.identity(n),
        "1": PauliString.uniform(n, "X"),
    })
    return group, rep


def linear_group(n: int) -> tuple[DecouplingGroup, GroupRepresentation]:
    """𝒢_LD = ℤ₂⊗ℤ₂ mit Darstellung {I, X^(all), Y^(all), Z^(all)}."""
    group = DecouplingGroup.z2_power(2, [(1, 0), (0, 1)], ["X", "Y"], name="G_LD")
    rep = GroupRepresentation(group, {
        "00": PauliString.identity(n),
        "10": PauliString.uniform(n, "X"),
        "01": PauliString.uniform(n, "Y"),
        "11": PauliString.uniform(n, "Z"),
    })
    return group, rep


if __name__ == "__main__":
    g, rep = linear_group(2)
    print(g, g.elements, g.generators)
    print(rep, "treu:", rep.is_faithful())
