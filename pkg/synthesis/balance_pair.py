import numpy as np
import numpy.typing as npt

from model.schedule import BalancePair, ControlProfile
from solver.propagation import closed_system_unitary


def profile_unitary(profile: ControlProfile) -> npt.NDArray[np.complex128]:
    """Geschlossenes Produkt der Segmentexponentiale eines Profils."""
    return closed_system_unitary(profile)


def reverse_conjugate_profile(profile: ControlProfile) -> ControlProfile:
    """ Umgekehrtes, antisymmetrisches Profil h′(t) = -h(τ_Q - t).

    Parameters
    ----------
    profile : ControlProfile
        Rechteckprofil für Q.

    Returns
    -------
    ControlProfile
        Profil für Q′ mit Q′Q = I.
    """
    segments = [s.copy(amplitude=-s.amplitude) for s in reversed(profile.segments)]
    return ControlProfile(segments, profile.n_qubits, profile.target.conj().T, f"{profile.name}'")


def stretch_profile(profile: ControlProfile, factor: float = 2.0) -> ControlProfile:
    """ Halbe Geschwindigkeit, halbe Stärke: (H, h, τ) -> (H, h/factor, factor·τ).

    Parameters
    ----------
    profile : ControlProfile
        Rechteckprofil.
    factor : float
        Streckfaktor > 0.

    Returns
    -------
    ControlProfile
        Profil mit unverändertem Zielgatter.
    """
    assert factor > 0, "Streckfaktor muss positiv sein."
    if factor == 1.0:
        return profile
    segments = [s.copy(amplitude=s.amplitude / factor, duration=s.duration * factor) for s in profile.segments]
    return ControlProfile(segments, profile.n_qubits, profile.target, f"{profile.name}_1/{factor:g}")


def concatenate_profiles(first: ControlProfile, second: ControlProfile) -> ControlProfile:
    """Erst ``first``, dann ``second``; das Ziel ist second.target · first.target."""
    assert first.n_qubits == second.n_qubits, "Profile haben unterschiedliche Qubitzahl."
    return ControlProfile(first.segments + second.segments, first.n_qubits,
                          second.target @ first.target, f"{second.name}{first.name}")


def make_balance_pair(profile: ControlProfile) -> BalancePair:
    """ Erstordnungs-Balancepaar aus einem Profil der Dauer τ.

    I_Q = Q′Q (erst Q, dann das umgekehrt-konjugierte Profil) und Q_{1/2}
    (gestrecktes Profil) dauern beide 2τ und tragen denselben Fehler erster Ordnung.

    Parameters
    ----------
    profile : ControlProfile
        Rechteckprofil für Q.

    Returns
    -------
    BalancePair
        Das Paar (I_Q, Q_{1/2}).
    """
    arm = concatenate_profiles(profile, reverse_conjugate_profile(profile))
    identity = ControlProfile([s.copy(role="I_Q", token="I_Q") for s in arm.segments],
                              arm.n_qubits, arm.target, "I_Q")
    half = stretch_profile(profile, 2.0)
    half = ControlProfile([s.copy(role="Q_half", token="Q_half") for s in half.segments],
                          half.n_qubits, half.target, "Q_half")
    return BalancePair(identity, half)


if __name__ == "__main__":
    from model.gates import GateSpec
    from synthesis.schedules import primitive_profile_for

    prof = primitive_profile_for(GateSpec.parse("x:1:pi/4"), 0.1, 1)
    pair = make_balance_pair(prof)
    print(pair)
    print("I_Q ≈ I:", np.allclose(profile_unitary(pair.identity_profile), np.eye(2)))
