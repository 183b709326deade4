from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field

import numpy as np
import numpy.typing as npt

from model.errors import ConfigError
from model.hamiltonian import HamiltonianSpec
from model.space import JointSpace

logger = logging.getLogger(__name__)


class SpinBathModel:
    def __init__(self, n: int, n_bath: int, gamma: float, hyperfine: float, seed: int,
                 gamma_couplings: npt.ArrayLike, hyperfine_couplings: npt.ArrayLike):
        """Dipolares Spinbad mit Hyperfeinkopplung an n Systemqubits.

        Parameters
        ----------
        n : int
            Anzahl Systemqubits.
        n_bath : int
            Anzahl Badspins n_B.
        gamma : float
            Skala Γ der Bad-Bad-Kopplung.
        hyperfine : float
            Skala A der System-Bad-Kopplung.
        seed : int
            Startwert, aus dem die Kopplungen gezogen wurden.
        gamma_couplings : array_like
            Γ_ij (n_B × n_B), nur das obere Dreieck i<j ist belegt.
        hyperfine_couplings : array_like
            A_k^{(i)} (n × n_B).
        """
        assert n >= 1, "Mindestens ein Systemqubit."
        assert n_bath >= 1, "Mindestens ein Badspin."
        gc = np.array(gamma_couplings, dtype=float)
        hc = np.array(hyperfine_couplings, dtype=float)
        assert gc.shape == (n_bath, n_bath), f"Γ-Matrix hat Form {gc.shape}."
        assert hc.shape == (n, n_bath), f"A-Matrix hat Form {hc.shape}."
        assert np.allclose(np.tril(gc), 0.0), "Γ_ij ist nur für i<j definiert."
        gc.setflags(write=False)
        hc.setflags(write=False)
        self.n = int(n)
        self.n_bath = int(n_bath)
        self.gamma = float(gamma)
        self.hyperfine = float(hyperfine)
        self.seed = int(seed)
        self.gamma_couplings = gc
        self.hyperfine_couplings = hc

    @classmethod
    def sample(cls, n: int, n_bath: int, gamma: float, hyperfine: float, seed: int,
               dimension_cap: int | None = None) -> SpinBathModel:
        return sample_bath_model(n, n_bath, gamma, hyperfine, seed, dimension_cap)

    @property
    def bath_dimension(self) -> int:
        return 2 ** self.n_bath

    def space(self, dimension_cap: int | None = None) -> JointSpace:
        return JointSpace(self.n, self.bath_dimension, dimension_cap)

    def to_dict(self) -> dict:
        return {"n": self.n, "n_B": self.n_bath, "Gamma": self.gamma, "A": self.hyperfine, "seed": self.seed}

    def __str__(self) -> str:
        return f"SpinBathModel(n={self.n}, n_B={self.n_bath}, Γ={self.gamma:g}, A={self.hyperfine:g}, seed={self.seed})"

    def __repr__(self) -> str:
        return self.__str__()


def sample_bath_model(n: int, n_bath: int, gamma: float, hyperfine: float, seed: int,
                      dimension_cap: int | None = None) -> SpinBathModel:
    """ Zieht Γ_ij ~ U[-Γ, Γ] (i<j) und A_k^{(i)} ~ U[-A, A] aus einem festen Startwert.

    Reihenfolge der Ziehungen: zuerst das obere Dreieck von Γ zeilenweise,
    dann A als (n × n_B)-Feld. Dieselben Argumente liefern bitgleiche Kopplungen.

    Parameters
    ----------
    n, n_bath : int
        Anzahl System- und Badspins.
    gamma, hyperfine : float
        Skalen Γ und A (≥ 0).
    seed : int
        Startwert.
    dimension_cap : int | None
        Obergrenze der Gesamtdimension.

    Returns
    -------
    SpinBathModel
        Das Modell.
    """
    assert n >= 1 and n_bath >= 1, "n ≥ 1 und n_B ≥ 1 erforderlich."
    if gamma < 0 or hyperfine < 0:
        raise ConfigError("Kopplungsskalen Γ und A dürfen nicht negativ sein.")
    JointSpace(n, 2 ** n_bath, dimension_cap)

    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n_bath, k=1)
    gc = np.zeros((n_bath, n_bath))
    gc[iu] = gamma * rng.uniform(-1.0, 1.0, size=len(iu[0]))
    hc = hyperfine * rng.uniform(-1.0, 1.0, size=(n, n_bath))
    model = SpinBathModel(n, n_bath, gamma, hyperfine, seed, gc, hc)
    logger.debug("Badmodell gezogen: %s", model)
    return model


class ControlErrorModel:
    KINDS = ("none", "fixed_systematic", "scaled_systematic", "random_overrotation")

    def __init__(self, kind: str = "none", epsilon: float = 0.0, sigma: float = 0.0,
                 deviation: HamiltonianSpec | None = None):
        """Kontrollfehler der Gating-Hamiltonians.

        Parameters
        ----------
        kind : str
            "none", "fixed_systematic" ((1+ε)H_g), "scaled_systematic" (H_g + εH_dev)
            oder "random_overrotation" (ε_i = ε + σ·N(0,1) pro Segment).
        epsilon : float
            Fehlerstärke ε ≥ 0.
        sigma : float
            Breite der Normalverteilung für "random_overrotation".
        deviation : HamiltonianSpec | None
            H_dev für "scaled_systematic" (reiner Systemoperator).
        """
        if kind not in self.KINDS:
            raise ConfigError(f"Unbekanntes Fehlermodell: {kind}")
        if epsilon < 0 or sigma < 0:
            raise ConfigError("ε und σ dürfen nicht negativ sein.")
        if kind == "scaled_systematic" and deviation is None:
            raise ConfigError("scaled_systematic braucht einen Abweichungsoperator H_dev.")
        self.kind = kind
        self.epsilon = float(epsilon)
        self.sigma = float(sigma)
        self.deviation = deviation

    @classmethod
    def none(cls) -> ControlErrorModel:
        return cls()

    def is_trivial(self) -> bool:
        return self.kind == "none" or (self.epsilon == 0.0 and self.sigma == 0.0)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "epsilon": self.epsilon, "sigma": self.sigma}
        if self.deviation is not None:
            d["deviation"] = self.deviation.to_dict()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ControlErrorModel:
        unknown = set(d) - {"kind", "epsilon", "sigma", "deviation"}
        if unknown:
            raise ConfigError(f"Unbekannte Felder im Fehlermodell: {sorted(unknown)}")
        deviation = d.get("deviation")
        if deviation is not None:
            deviation = HamiltonianSpec.from_dict(deviation) if isinstance(deviation, list) \
                else HamiltonianSpec.parse(deviation)
        return cls(d.get("kind", "none"), d.get("epsilon", 0.0), d.get("sigma", 0.0), deviation)

    def __str__(self) -> str:
        return f"ControlErrorModel({self.kind}, ε={self.epsilon:g}, σ={self.sigma:g})"

    def __repr__(self) -> str:
        return self.__str__()


@dataclass
class SimulationResult:
    """Ein Punkt einer Spinbad-Rechnung: Fidelities von primitivem Gatter und DCG."""
    tau: float
    A: float
    Gamma: float
    epsilon: float
    seed: int
    f_prim: float
    f_dcg: float
    r: float
    saturated: bool = False
    converged: bool = True
    notes: list[str] = field(default_factory=list)

    CSV_FIELDS = ("tau", "A", "Gamma", "epsilon", "seed", "f_prim", "f_dcg", "r", "saturated")

    def __post_init__(self):
        # NumPy-Skalare sind weder in JSON noch im CSV-Format erlaubt
        for key in ("tau", "A", "Gamma", "epsilon", "f_prim", "f_dcg", "r"):
            setattr(self, key, float(getattr(self, key)))
        self.seed = int(self.seed)
        self.saturated = bool(self.saturated)
        self.converged = bool(self.converged)

    def to_row(self) -> list[str]:
        """CSV-Zeile mit 17 signifikanten Stellen."""
        values = asdict(self)
        row = []
        for key in self.CSV_FIELDS:
            v = values[key]
            if isinstance(v, bool):
                row.append("true" if v else "false")
            elif isinstance(v, int):
                row.append(str(v))
            else:
                row.append(format(v, ".17g"))
        return row

    def to_dict(self) -> dict:
        return asdict(self)


if __name__ == "__main__":
    m = sample_bath_model(2, 4, 1.0, 1.0, seed=7)
    print(m)
    print(np.round(m.hyperfine_couplings, 3))
    print(ControlErrorModel("fixed_systematic", 0.01))
