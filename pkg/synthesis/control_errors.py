import logging

import numpy as np

from model.errors import ConfigError
from model.hamiltonian import HamiltonianSpec
from model.schedule import ControlSchedule
from model.spin_bath import ControlErrorModel

logger = logging.getLogger(__name__)


def apply_control_error(schedule: ControlSchedule, error_model: ControlErrorModel,
                        rng: np.random.Generator | None = None) -> ControlSchedule:
    """ Verfälscht einen Schedule gemäß Kontrollfehlermodell.

    Parameters
    ----------
    schedule : ControlSchedule
        Nomineller Schedule.
    error_model : ControlErrorModel
        Art und Stärke des Fehlers.
    rng : np.random.Generator | None
        Nur für "random_overrotation" mit σ > 0 nötig.

    Returns
    -------
    ControlSchedule
        Neuer Schedule; bei ε = 0 das unveränderte Original.
    """
    if error_model.is_trivial():
        return schedule

    eps = error_model.epsilon
    if error_model.kind == "fixed_systematic":
        segments = [s.copy(amplitude=s.amplitude * (1.0 + eps)) for s in schedule]
    elif error_model.kind == "scaled_systematic":
        dev = error_model.deviation
        if dev.n_qubits() not in (None, schedule.n_qubits):
            raise ConfigError(f"H_dev wirkt auf {dev.n_qubits()} Qubits, Schedule auf {schedule.n_qubits}.")
        extra = dev.scaled(eps)
        segments = [
            s.copy(static=HamiltonianSpec(list(s.static.terms) + list(extra.terms)))
            for s in schedule
        ]
    else:
        if error_model.sigma > 0 and rng is None:
            raise ConfigError("random_overrotation mit σ > 0 braucht einen Zufallsgenerator mit Startwert.")
        draws = eps + error_model.sigma * rng.standard_normal(len(schedule)) if error_model.sigma > 0 \
            else np.full(len(schedule), eps)
        segments = [s.copy(amplitude=s.amplitude * (1.0 + e)) for s, e in zip(schedule, draws)]

    logger.debug("Kontrollfehler %s auf %s angewandt", error_model, schedule.name)
    return ControlSchedule(segments, schedule.n_qubits, f"{schedule.name}~{error_model.kind}", schedule.target)


if __name__ == "__main__":
    from model.gates import GateSpec
    from synthesis.schedules import primitive_schedule_for

    sched = primitive_schedule_for(GateSpec.parse("x:1:pi/2"), 1.0, 1)
    bad = apply_control_error(sched, ControlErrorModel("fixed_systematic", 0.01))
    print(sched[0], "->", bad[0])
