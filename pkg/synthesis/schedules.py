import logging

import numpy as np

from model.errors import ConfigError, GroupError
from model.gates import GateSpec
from model.group import DecouplingGroup, GroupRepresentation, dephasing_group, linear_group
from model.hamiltonian import HamiltonianSpec
from model.pauli import PauliString
from model.schedule import ControlProfile, ControlSchedule, ControlSegment, SequenceSpec
from synthesis.balance_pair import make_balance_pair
from synthesis.sequences import synthesize_dcg, synthesize_edd

logger = logging.getLogger(__name__)

ERROR_MODELS = ("linear", "dephasing")


def group_for_model(model: str, n: int) -> tuple[DecouplingGroup, GroupRepresentation]:
    """𝒢_LD für lineare Dekohärenz, 𝒢_Z für reine Dephasierung."""
    if model == "linear":
        return linear_group(n)
    if model == "dephasing":
        return dephasing_group(n)
    raise ConfigError(f"Unbekanntes Fehlermodell: {model} (erlaubt: {ERROR_MODELS})")


def pulse_spec(pauli: PauliString) -> HamiltonianSpec:
    """Σ_q σ_q über den Träger eines Pauli-Produkts; mit π/2τ über τ entsteht das Produkt."""
    spec = HamiltonianSpec()
    for q in pauli.support:
        spec.add(PauliString.on(pauli.n_qubits, {q: pauli.labels[q - 1]}))
    return spec


def generator_segment(pauli: PauliString, tau: float, label: str = "", layer: int = 1) -> ControlSegment:
    """π-Puls der Dauer τ, der bis auf eine Phase den Pauli-String realisiert."""
    if pauli.is_identity():
        return ControlSegment(HamiltonianSpec(), 0.0, tau, role="free", token=label or "I", layer=layer)
    return ControlSegment(pulse_spec(pauli), np.pi / (2.0 * tau), tau,
                          role="generator", token=label or pauli.labels, layer=layer)


def primitive_profile_for(gate: GateSpec, tau: float, n: int) -> ControlProfile:
    """ Primitives Rechteckprofil (C, θ/τ, τ) für Q = exp(-iθC).

    Parameters
    ----------
    gate : GateSpec
        Zielgatter.
    tau : float
        Dauer des Profils.
    n : int
        Anzahl Systemqubits.

    Returns
    -------
    ControlProfile
        Ein Segment; für ``noop`` freie Evolution der Dauer τ.
    """
    assert tau > 0, "τ muss positiv sein."
    c = gate.generator(n)
    role = "free" if gate.is_noop() else "Q"
    seg = ControlSegment(c, gate.theta / tau, tau, role=role, token="Q")
    return ControlProfile([seg], n, gate.target(n), "Q")


def primitive_schedule_for(gate: GateSpec, tau: float, n: int) -> ControlSchedule:
    """Unkorrigiertes Vergleichsgatter der Dauer τ."""
    prof = primitive_profile_for(gate, tau, n)
    return ControlSchedule(prof.segments, n, f"primitive[{gate}]", prof.target)


def _split(segment: ControlSegment, pieces: int) -> list[ControlSegment]:
    return [segment.copy(duration=segment.duration / pieces) for _ in range(pieces)]


def sequence_to_schedule(sequence: SequenceSpec, rep: GroupRepresentation, profile: ControlProfile,
                         tau: float, split_half: bool = True, layer: int = 1) -> ControlSchedule:
    """ Realisiert eine symbolische Sequenz als Rechteck-Schedule.

    Erzeuger werden als π-Pulse der Dauer τ umgesetzt, I_Q als Profil gefolgt
    vom umgekehrt-konjugierten Profil und Q_{1/2} als gestrecktes Profil.

    Parameters
    ----------
    sequence : SequenceSpec
        Tokens in Anwendungsreihenfolge.
    rep : GroupRepresentation
        Darstellung, die den Erzeugernamen Pauli-Strings zuordnet.
    profile : ControlProfile
        Profil für Q der Dauer τ.
    tau : float
        Minimale Gatterdauer.
    split_half : bool
        Zerlegt Q_{1/2} in Segmente der Länge τ.
    layer : int
        Kontrollschicht der erzeugten Segmente.

    Returns
    -------
    ControlSchedule
        Schedule der Dauer total_multiplier · τ.
    """
    assert tau > 0, "τ muss positiv sein."
    assert np.isclose(profile.total_duration, tau), "Das Profil für Q muss genau τ dauern."
    pair = make_balance_pair(profile)
    names = rep.group.generator_names

    segments: list[ControlSegment] = []
    target = np.eye(2 ** rep.n_qubits, dtype=complex)
    for token in sequence:
        if token.role == "generator":
            index = token.generator_index
            if index is None:
                if token.label not in names:
                    raise GroupError(f"Unbekannter Erzeuger {token.label!r} (bekannt: {names}).")
                index = names.index(token.label)
            pauli = rep.generator_operator(index)
            segments.append(generator_segment(pauli, tau, token.label, layer))
            target = pauli.phase_free().to_matrix() @ target
        elif token.role == "I_Q":
            segments.extend(s.copy(layer=layer) for s in pair.identity_profile)
        elif token.role == "Q_half":
            for s in pair.gate_profile:
                segments.extend(_split(s.copy(layer=layer), 2) if split_half else [s.copy(layer=layer)])
            target = profile.target @ target
        elif token.role == "Q":
            segments.extend(s.copy(layer=layer) for s in profile)
            target = profile.target @ target
        else:
            segments.append(ControlSegment(HamiltonianSpec(), 0.0, tau, role="free", token="I", layer=layer))

    return ControlSchedule(segments, rep.n_qubits, sequence.name, target)


def dcg_schedule_for(gate: GateSpec, tau: float, n: int, model: str = "linear") -> ControlSchedule:
    """ DCG-Realisierung eines Gatters über 𝒢_LD (16 Segmente) oder 𝒢_Z (6 Segmente).

    Für 𝒢_LD ergibt sich die Segmenttabelle: X-Pulse bei i=1,7,12,14, Y-Pulse bei
    i=4,10,11,13, +θC/τ bei i=2,5,8, −θC/τ bei i=3,6,9 und +θC/2τ bei i=15,16.

    Parameters
    ----------
    gate : GateSpec
        Zielgatter Q.
    tau : float
        Minimale Gatterdauer τ.
    n : int
        Anzahl Systemqubits.
    model : str
        "linear" oder "dephasing".

    Returns
    -------
    ControlSchedule
        Schedule der Dauer d(m+2)τ mit Ziel exp(-iθC).
    """
    group, rep = group_for_model(model, n)
    gate.check_register(n)
    seq = synthesize_dcg(group, rep, "Q")
    schedule = sequence_to_schedule(seq, rep, primitive_profile_for(gate, tau, n), tau)
    schedule.name = f"DCG[{model}]({gate})"
    logger.debug("%s: %d Segmente", schedule.name, len(schedule))
    return schedule


def edd_schedule_for(model: str, tau: float, n: int) -> ControlSchedule:
    """Eulersche DD-Sequenz (NOOP) als Schedule aus π-Pulsen der Dauer τ."""
    group, rep = group_for_model(model, n)
    seq = synthesize_edd(group, rep)
    noop = primitive_profile_for(GateSpec("noop"), tau, n)
    schedule = sequence_to_schedule(seq, rep, noop, tau)
    schedule.name = f"EDD[{model}]"
    return schedule


if __name__ == "__main__":
    sched = dcg_schedule_for(GateSpec.parse("x:1:pi/4"), 0.01, 2)
    for i, seg in enumerate(sched, start=1):
        print(i, seg)
