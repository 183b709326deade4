import logging

import numpy as np
import numpy.typing as npt

from model.chain import ChainModel, DriftSchedule
from model.errors import GroupError
from model.gates import GateSpec
from model.group import DecouplingGroup, GroupRepresentation
from model.hamiltonian import HamiltonianSpec
from model.pauli import PauliString
from model.schedule import ControlSchedule, ControlSegment
from model.settings import DEFAULT_SETTINGS, Settings
from model.space import JointSpace
from solver.operators import assemble, propagator_matrix
from synthesis.schedules import generator_segment, primitive_profile_for, pulse_spec, sequence_to_schedule
from synthesis.sequences import synthesize_dcg, synthesize_edd

logger = logging.getLogger(__name__)

# Bitpaar (X-Anteil, Y-Anteil) -> Pauli-Symbol, wie bei 𝒢_LD
_LABEL = {(0, 0): "I", (1, 0): "X", (0, 1): "Y", (1, 1): "Z"}

# Blockachsen der zweiten Schicht: X bei l=1,3,6,8, Y bei l=2,4,5,7
PAIR_BLOCK_AXES = ("X", "Y", "X", "Y", "Y", "X", "Y", "X")


def odd_even_sets(n: int, k: int | None = None) -> tuple[list[int], list[int]]:
    """ Ungerade und gerade Qubits der Kette, für Paargatter ohne k und k+1.

    Parameters
    ----------
    n : int
        Kettenlänge.
    k : int | None
        Zielpaar (k, k+1); None für die Einzelqubit-Variante.

    Returns
    -------
    tuple[list[int], list[int]]
        (O_k, E_k), 1-basiert.
    """
    excluded = set() if k is None else {k, k + 1}
    odd = [q for q in range(1, n + 1, 2) if q not in excluded]
    even = [q for q in range(2, n + 1, 2) if q not in excluded]
    return odd, even


def gnn_group(n: int, k: int | None = None) -> tuple[DecouplingGroup, GroupRepresentation]:
    """ 𝒢_NN = ℤ₂⁴ mit den Erzeugern X^odd, Y^odd, X^ev, Y^ev.

    Die Elemente sind P^odd Q^ev mit P, Q ∈ {I, X, Y, Z}; die Mittelung über
    alle 16 annulliert jeden Einzelqubitterm und jede Bindung zwischen einem
    ungeraden und einem geraden Qubit.

    Parameters
    ----------
    n : int
        Kettenlänge (n ≥ 3).
    k : int | None
        Zielpaar (k, k+1), dessen Qubits ausgelassen werden; None für die
        Einzelqubit-Variante über alle Qubits.

    Returns
    -------
    tuple[DecouplingGroup, GroupRepresentation]
        Gruppe der Ordnung 16 mit treuer Darstellung.
    """
    if n < 3:
        raise GroupError(f"𝒢_NN braucht n ≥ 3, erhalten {n}.")
    if k is not None and not 1 <= k < n:
        raise GroupError(f"Ungültiges Zielpaar k={k} für n={n}.")
    odd, even = odd_even_sets(n, k)
    if not odd or not even:
        raise GroupError(f"Für n={n}, k={k} bleibt keine gerade/ungerade Teilmenge übrig.")

    group = DecouplingGroup.z2_power(
        4, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)],
        ["Xo", "Yo", "Xe", "Ye"], name="G_NN" if k is None else f"G_NN[{k}]",
    )
    operators = {}
    for element in group.elements:
        bits = tuple(int(b) for b in element)
        ops = {q: _LABEL[bits[0:2]] for q in odd}
        ops.update({q: _LABEL[bits[2:4]] for q in even})
        operators[element] = PauliString.on(n, ops)
    return group, GroupRepresentation(group, operators)


def pair_target(chain: ChainModel, k: int, tau: float,
                settings: Settings = DEFAULT_SETTINGS) -> npt.NDArray[np.complex128]:
    """exp(-64iτλ S⃗^{(k)}·S⃗^{(k+1)}) auf der ganzen Kette."""
    space = JointSpace(chain.n, 1)
    h = assemble(chain.bond_spec(k, k + 1, settings), space)
    return propagator_matrix(h, 64.0 * tau)


def two_qubit_drift_dcg(chain: ChainModel, k: int, tau: float,
                        settings: Settings = DEFAULT_SETTINGS) -> DriftSchedule:
    """ Korrigierter Verschränkungsblock der Dauer 64τ.

    Schicht 1 ist die EDD über 𝒢_NN auf allen Qubits außer k, k+1 (64 Pulse
    der Dauer τ). Schicht 2 besteht aus acht Blöcken der Dauer 8τ mit
    (π/16τ)(σ^{(k)} + σ^{(k+1)}) + λ S⃗^{(k)}·S⃗^{(k+1)}.

    Parameters
    ----------
    chain : ChainModel
        Kette mit n ≥ 4.
    k : int
        Zielpaar (k, k+1).
    tau : float
        Minimale Gatterdauer.
    settings : Settings
        Spin-Konvention.

    Returns
    -------
    DriftSchedule
        Block mit Ziel exp(-64iτλ S⃗^{(k)}·S⃗^{(k+1)}).
    """
    assert tau > 0, "τ muss positiv sein."
    if chain.n < 4:
        raise GroupError("Der Zweiqubit-Block braucht mindestens vier Qubits.")
    group, rep = gnn_group(chain.n, k)
    edd = synthesize_edd(group, rep)
    layer1 = ControlSchedule(
        [generator_segment(rep.generator_operator(t.generator_index), tau, t.label, layer=1) for t in edd],
        chain.n, f"EDD[{group.name}]",
    )

    bond = chain.bond_spec(k, k + 1, settings)
    blocks = []
    for axis in PAIR_BLOCK_AXES:
        pulse = pulse_spec(PauliString.on(chain.n, {k: axis, k + 1: axis}))
        blocks.append(ControlSegment(pulse, np.pi / (16.0 * tau), 8.0 * tau, role="drift",
                                     token=axis * 2, layer=2, static=bond))
    layer2 = ControlSchedule(blocks, chain.n, f"pair[{k},{k + 1}]")

    drift = DriftSchedule(layer1, layer2, chain, f"drift2q[k={k}]", pair_target(chain, k, tau, settings))
    logger.debug("%s erzeugt", drift)
    return drift


def single_qubit_drift_dcg(chain: ChainModel, k: int, theta: float, axis: str, tau: float,
                           ) -> DriftSchedule:
    """ Einzelqubit-DCG exp(-iθC), C ∈ {X^{(k)}, Y^{(k)}}, über 𝒢_NN (96τ).

    Der Drift λ Σ S⃗·S⃗ wird hier als Fehler behandelt und liegt in Ω_e^{2}.

    Parameters
    ----------
    chain : ChainModel
        Kette mit n ≥ 3.
    k : int
        Zielqubit.
    theta : float
        Winkel θ in exp(-iθC).
    axis : str
        "x" oder "y".
    tau : float
        Minimale Gatterdauer.

    Returns
    -------
    DriftSchedule
        Einschichtiger Block mit 96 Segmenten.
    """
    axis = axis.lower()
    if axis not in ("x", "y"):
        raise GroupError(f"Einzelqubit-Block nur für X oder Y, erhalten {axis!r}.")
    group, rep = gnn_group(chain.n)
    gate = GateSpec(axis, (k,), 2.0 * theta)
    gate.check_register(chain.n)
    seq = synthesize_dcg(group, rep)
    schedule = sequence_to_schedule(seq, rep, primitive_profile_for(gate, tau, chain.n), tau)
    schedule.name = f"DCG[{group.name}]({gate})"
    return DriftSchedule(schedule, None, chain, f"drift1q[{gate}]", schedule.target)


def tau_for_angle(theta: float, lam: float, tau_min: float | None = None) -> float:
    """ τ so, dass der Zweiqubit-Block exp(-iθ S⃗·S⃗) erzeugt: τ = θ/(64λ).

    Parameters
    ----------
    theta : float
        Gewünschter Winkel.
    lam : float
        Kopplungsstärke λ ≠ 0.
    tau_min : float | None
        Kleinste realisierbare Gatterdauer.

    Returns
    -------
    float
        Das benötigte τ.
    """
    assert lam != 0, "Ohne Kopplung lässt sich kein Winkel einstellen."
    tau = theta / (64.0 * lam)
    assert tau > 0, "θ und λ müssen dasselbe Vorzeichen haben."
    if tau_min is not None and tau < tau_min:
        logger.warning("τ = %.3g für θ = %.3g liegt unter τ_min = %.3g", tau, theta, tau_min)
    return tau


def drift_error_terms(chain: ChainModel, k: int, bath_ops: dict[tuple[int, str], npt.ArrayLike],
                      include_drift: bool = True, settings: Settings = DEFAULT_SETTINGS,
                      ) -> tuple[HamiltonianSpec, HamiltonianSpec, HamiltonianSpec]:
    """ Zerlegt den Fehler des Zweiqubit-Blocks in H_{e,1}, H_{e,2} und Randterme.

    Parameters
    ----------
    chain : ChainModel
        Die Kette.
    k : int
        Zielpaar.
    bath_ops : dict[tuple[int, str], array_like]
        (Qubit, Achse) -> Badoperator der linearen Kopplung σ_α^{(q)} ⊗ B.
    include_drift : bool
        Nimmt die übrigen Heisenberg-Bindungen als Fehler hinzu.
    settings : Settings
        Spin-Konvention.

    Returns
    -------
    tuple[HamiltonianSpec, HamiltonianSpec, HamiltonianSpec]
        H_{e,1} (nur Schicht-1-Qubits), H_{e,2} (nur das Paar) und die
        Bindungen zwischen Paar und Schicht 1, die keine der beiden
        Kommutierungsbedingungen erfüllen.
    """
    pair = {k, k + 1}
    e1, e2, boundary = HamiltonianSpec(), HamiltonianSpec(), HamiltonianSpec()
    for (q, a), b in sorted(bath_ops.items()):
        assert 1 <= q <= chain.n and a in "XYZ", f"Ungültiger Term ({q}, {a})."
        target = e2 if q in pair else e1
        target.add(PauliString.on(chain.n, {q: a}), 1.0, b)
    if include_drift:
        for i, j in chain.bonds():
            inside = len(pair & {i, j})
            if inside == 2:
                continue
            (boundary if inside == 1 else e1).extend(chain.bond_spec(i, j, settings))
    return e1, e2, boundary


if __name__ == "__main__":
    chain = ChainModel(4, 1.0, 1)
    block = two_qubit_drift_dcg(chain, 1, 1e-3)
    print(block)
    print(single_qubit_drift_dcg(chain, 2, np.pi / 8, "x", 1e-3))
