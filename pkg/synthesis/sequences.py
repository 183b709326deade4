import logging

import numpy as np
import numpy.typing as npt

from model.errors import DimensionError, GroupError
from model.group import DecouplingGroup, GroupRepresentation
from model.schedule import SequenceSpec, SequenceToken
from model.space import DenseOperator
from synthesis.cayley import build_cayley_graph, find_eulerian_cycle

logger = logging.getLogger(__name__)


def synthesize_edd(group: DecouplingGroup, rep: GroupRepresentation,
                   cycle: list | None = None) -> SequenceSpec:
    """ Eulersche DD-Sequenz: jeder Erzeuger wird genau d-mal angewandt.

    Parameters
    ----------
    group : DecouplingGroup
        Entkopplungsgruppe.
    rep : GroupRepresentation
        Darstellung der Gruppe (nur für Konsistenzprüfung).
    cycle : list | None
        Vorgegebener Euler-Kreis, Standard ist der kanonische.

    Returns
    -------
    SequenceSpec
        d·m Erzeuger-Tokens in Anwendungsreihenfolge.
    """
    assert rep.group is group, "Darstellung gehört zu einer anderen Gruppe."
    if cycle is None:
        cycle = find_eulerian_cycle(build_cayley_graph(group))
    tokens = [
        SequenceToken("generator", d["label"], generator_index=d["generator"])
        for _, _, d in cycle if d["kind"] == "generator"
    ]
    return SequenceSpec(tokens, name=f"EDD[{group.name}]", group_name=group.name)


def synthesize_dcg(group: DecouplingGroup, rep: GroupRepresentation, target: str = "Q",
                   cycle: list | None = None) -> SequenceSpec:
    """ DCG-Sequenz: Euler-Kreis des um I_Q-Schleifen erweiterten Cayley-Graphen.

    Die Schleife am neutralen Element wird als letzte Kante durch Q_{1/2}
    ersetzt; die übrigen d-1 Schleifen sind Identitätsarme I_Q = Q′Q.

    Parameters
    ----------
    group : DecouplingGroup
        Entkopplungsgruppe.
    rep : GroupRepresentation
        Darstellung.
    target : str
        Name des Zielgatters Q.
    cycle : list | None
        Euler-Kreis des Graphen mit Schleifen, Standard ist der kanonische.

    Returns
    -------
    SequenceSpec
        d·m + d Tokens, Gesamtdauer d(m+2)τ.
    """
    assert rep.group is group, "Darstellung gehört zu einer anderen Gruppe."
    if not target:
        raise GroupError("Zielgatter Q ist nicht definiert.")
    if cycle is None:
        cycle = find_eulerian_cycle(build_cayley_graph(group, self_loops=True))
    if not cycle or cycle[-1][2]["kind"] != "loop" or cycle[-1][0] != group.identity:
        raise GroupError("Euler-Kreis endet nicht mit der Schleife am neutralen Element.")

    tokens = []
    for i, (_, _, d) in enumerate(cycle):
        if d["kind"] == "generator":
            tokens.append(SequenceToken("generator", d["label"], generator_index=d["generator"]))
        elif i == len(cycle) - 1:
            tokens.append(SequenceToken("Q_half", "Q_half"))
        else:
            tokens.append(SequenceToken("I_Q", "I_Q"))
    seq = SequenceSpec(tokens, name=f"DCG[{group.name},{target}]", group_name=group.name)
    logger.debug("DCG-Sequenz %s", seq.render())
    return seq


def projection_superop(rep: GroupRepresentation, E: DenseOperator) -> DenseOperator:
    """ Π_𝒢(E) = Σ_i G_i† E G_i mit G_i ⊗ I_B.

    Parameters
    ----------
    rep : GroupRepresentation
        Darstellung auf n Systemqubits.
    E : DenseOperator
        Operator auf einem Raum mit n Systemqubits.

    Returns
    -------
    DenseOperator
        Die Gruppenmittelung (ohne Faktor 1/d).
    """
    if rep.n_qubits != E.space.n_system_qubits:
        raise DimensionError(
            f"Darstellung wirkt auf {rep.n_qubits} Qubits, Operator auf {E.space.n_system_qubits}."
        )
    d_b = E.space.bath_dimension
    e_blocks = E.matrix.reshape(E.space.system_dimension, d_b, E.space.system_dimension, d_b)
    total = np.zeros_like(E.matrix)
    for g in rep.matrices():
        # (G ⊗ I)† E (G ⊗ I) blockweise ohne Kronecker-Aufblähung
        conj = np.einsum("ji,jakb,kl->ialb", g.conj(), e_blocks, g)
        total += conj.reshape(E.matrix.shape)
    return DenseOperator(total, E.space, hermitian=E.hermitian, tolerance=1e-9)


def bang_bang_sequence(rep: GroupRepresentation) -> list[npt.NDArray[np.complex128]]:
    """ Ideale BB-DD-Pulse Q_i = G_{i+1} G_i†, deren Rahmen P_{i-1} alle G_i durchlaufen.

    Parameters
    ----------
    rep : GroupRepresentation
        Darstellung mit Elementen G_1 = I, ..., G_d.

    Returns
    -------
    list[npt.NDArray[np.complex128]]
        d Systemunitäre; ihr Produkt ist die Identität (bis auf Phase).
    """
    mats = rep.matrices()
    d = len(mats)
    return [mats[(i + 1) % d] @ mats[i].conj().T for i in range(d)]


if __name__ == "__main__":
    from model.group import dephasing_group, linear_group

    for factory in (linear_group, dephasing_group):
        group, rep = factory(2)
        print(synthesize_edd(group, rep))
        print(synthesize_dcg(group, rep))
