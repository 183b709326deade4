from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass

import numpy as np

from model.errors import ConfigError
from model.gates import GateSpec
from model.settings import Settings
from model.spin_bath import ControlErrorModel

logger = logging.getLogger(__name__)

TOP_LEVEL_KEYS = {"model", "gate", "group", "error_model", "sweep", "seeds", "output_dir",
                  "dimension_cap", "jobs", "settings"}
MODEL_KEYS = {"n", "n_B", "Gamma", "A"}
SWEEP_KEYS = {"tau", "A", "Gamma", "epsilon", "fit_window"}


@dataclass(frozen=True)
class SweepPoint:
    """Ein Gitterpunkt; ``index`` bestimmt den Zufallsstrom [seed, index]."""
    index: int
    tau: float
    A: float
    Gamma: float
    epsilon: float
    seed: int


def _check_keys(block: dict, allowed: set[str], where: str) -> None:
    unknown = set(block) - allowed
    if unknown:
        raise ConfigError(f"Unbekannte Felder in {where}: {sorted(unknown)}")


def parse_grid(value, name: str) -> list[float]:
    """ Liest eine Gitterangabe: Liste, Einzelwert oder {"logspace": [a, b, num]}.

    Parameters
    ----------
    value : list | float | dict
        Die Angabe aus der Konfiguration.
    name : str
        Name für Fehlermeldungen.

    Returns
    -------
    list[float]
        Die Gitterwerte in angegebener Reihenfolge.
    """
    if isinstance(value, dict):
        _check_keys(value, {"logspace", "linspace"}, f"sweep.{name}")
        if len(value) != 1:
            raise ConfigError(f"sweep.{name}: genau eines von logspace/linspace angeben.")
        kind, args = next(iter(value.items()))
        if len(args) != 3:
            raise ConfigError(f"sweep.{name}.{kind} erwartet [start, stop, anzahl].")
        fn = np.logspace if kind == "logspace" else np.linspace
        grid = [float(v) for v in fn(float(args[0]), float(args[1]), int(args[2]))]
    elif isinstance(value, (int, float)):
        grid = [float(value)]
    else:
        grid = [float(v) for v in value]
    if not grid:
        raise ConfigError(f"Gitter sweep.{name} ist leer.")
    return grid


class ExperimentConfig:
    def __init__(self, n: int = 2, n_bath: int = 4, gamma: float = 1.0, hyperfine: float = 1.0,
                 gate: GateSpec | None = None, group: str = "linear",
                 error_model: ControlErrorModel | None = None,
                 tau_grid: list[float] | None = None, hyperfine_grid: list[float] | None = None,
                 gamma_grid: list[float] | None = None, epsilon_grid: list[float] | None = None,
                 fit_window: str | list[float] = "auto", seeds: list[int] | None = None,
                 output_dir: str = "results", dimension_cap: int | None = None, jobs: int = 1,
                 settings: Settings | None = None):
        """Vollständig serialisierbare Experimentkonfiguration.

        Parameters
        ----------
        n, n_bath : int
            Anzahl System- und Badspins.
        gamma, hyperfine : float
            Standardwerte für Γ und A, wenn kein Gitter angegeben ist.
        gate : GateSpec | None
            Zielgatter, Standard w:1,2:pi/4.
        group : str
            "linear" oder "dephasing".
        error_model : ControlErrorModel | None
            Kontrollfehler; ein ε-Gitter überschreibt dessen ε.
        tau_grid, hyperfine_grid, gamma_grid, epsilon_grid : list[float] | None
            Gitter der Parameter.
        fit_window : str | list[float]
            "auto" oder [τ_min, τ_max].
        seeds : list[int] | None
            Pflichtangabe für Simulationen.
        output_dir : str
            Ausgabeverzeichnis.
        dimension_cap : int | None
            Überschreibt Settings.dimension_cap.
        jobs : int
            Anzahl Prozesse.
        settings : Settings | None
            Numerische Einstellungen.
        """
        self.n = int(n)
        self.n_bath = int(n_bath)
        self.gamma = float(gamma)
        self.hyperfine = float(hyperfine)
        self.gate = gate if gate is not None else GateSpec.parse("w:1,2:pi/4")
        self.group = group
        self.error_model = error_model if error_model is not None else ControlErrorModel.none()
        self.tau_grid = list(tau_grid) if tau_grid is not None else []
        self.hyperfine_grid = list(hyperfine_grid) if hyperfine_grid else [self.hyperfine]
        self.gamma_grid = list(gamma_grid) if gamma_grid else [self.gamma]
        self.epsilon_grid = list(epsilon_grid) if epsilon_grid else [self.error_model.epsilon]
        self.fit_window = fit_window
        self.seeds = [int(s) for s in seeds] if seeds else []
        self.output_dir = output_dir
        self.settings = settings if settings is not None else Settings()
        if dimension_cap is not None:
            self.settings = Settings.from_dict({**self.settings.to_dict(), "dimension_cap": int(dimension_cap)})
        self.jobs = int(jobs)
        if self.jobs < 1:
            raise ConfigError("jobs muss mindestens 1 sein.")
        if group not in ("linear", "dephasing"):
            raise ConfigError(f"Unbekannte Gruppe: {group}")
        if fit_window != "auto" and (not isinstance(fit_window, (list, tuple)) or len(fit_window) != 2):
            raise ConfigError("fit_window ist 'auto' oder [τ_min, τ_max].")
        self.gate.check_register(self.n)

    @property
    def dimension_cap(self) -> int:
        return self.settings.dimension_cap

    def require_seeds(self) -> list[int]:
        if not self.seeds:
            raise ConfigError("Zufällige Rechnungen brauchen mindestens einen expliziten Seed.")
        return self.seeds

    def require_grid(self) -> list[float]:
        if not self.tau_grid:
            raise ConfigError("Das τ-Gitter ist leer.")
        if any(t <= 0 for t in self.tau_grid):
            raise ConfigError("Alle τ müssen positiv sein.")
        return self.tau_grid

    def points(self) -> list[SweepPoint]:
        """Gitterpunkte in fester Reihenfolge: Seed, A, Γ, ε, τ."""
        taus = self.require_grid()
        combos = itertools.product(self.require_seeds(), self.hyperfine_grid, self.gamma_grid,
                                   self.epsilon_grid, taus)
        return [SweepPoint(i, tau, a, g, eps, seed) for i, (seed, a, g, eps, tau) in enumerate(combos)]

    def error_model_for(self, epsilon: float) -> ControlErrorModel:
        em = self.error_model
        if epsilon == em.epsilon:
            return em
        kind = em.kind if em.kind != "none" else "fixed_systematic"
        return ControlErrorModel(kind, epsilon, em.sigma, em.deviation)

    def with_overrides(self, **changes) -> ExperimentConfig:
        """Kopie mit geänderten Feldern (für CLI-Flags)."""
        d = self.to_dict()
        for key, value in changes.items():
            if value is None:
                continue
            if key in ("n", "n_B", "Gamma", "A"):
                d["model"][key] = value
            elif key == "tau":
                d["sweep"]["tau"] = value
            elif key in TOP_LEVEL_KEYS:
                d[key] = value
            else:
                raise ConfigError(f"Unbekannte Überschreibung: {key}")
        return ExperimentConfig.from_dict(d)

    def to_dict(self) -> dict:
        return {
            "model": {"n": self.n, "n_B": self.n_bath, "Gamma": self.gamma, "A": self.hyperfine},
            "gate": self.gate.to_text(),
            "group": self.group,
            "error_model": self.error_model.to_dict(),
            "sweep": {
                "tau": list(self.tau_grid),
                "A": list(self.hyperfine_grid),
                "Gamma": list(self.gamma_grid),
                "epsilon": list(self.epsilon_grid),
                "fit_window": self.fit_window if self.fit_window == "auto" else list(self.fit_window),
            },
            "seeds": list(self.seeds),
            "output_dir": self.output_dir,
            "dimension_cap": self.dimension_cap,
            "jobs": self.jobs,
            "settings": self.settings.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        """ Baut die Konfiguration aus einem (TOML/JSON-)Dictionary.

        Parameters
        ----------
        d : dict
            Blöcke wie in ``to_dict``; alle Felder optional.

        Returns
        -------
        ExperimentConfig
            Die Konfiguration; unbekannte Felder führen zu ConfigError.
        """
        _check_keys(d, TOP_LEVEL_KEYS, "der Konfiguration")
        model = d.get("model", {})
        _check_keys(model, MODEL_KEYS, "model")
        sweep = d.get("sweep", {})
        _check_keys(sweep, SWEEP_KEYS, "sweep")

        gate = d.get("gate")
        if isinstance(gate, str):
            gate = GateSpec.parse(gate)
        elif isinstance(gate, dict):
            gate = GateSpec.from_dict(gate)

        error_model = d.get("error_model")
        if isinstance(error_model, dict):
            error_model = ControlErrorModel.from_dict(error_model)

        settings = Settings.from_dict(d["settings"]) if "settings" in d else None

        def grid(name):
            return parse_grid(sweep[name], name) if name in sweep else None

        return cls(
            n=model.get("n", 2), n_bath=model.get("n_B", 4),
            gamma=model.get("Gamma", 1.0), hyperfine=model.get("A", 1.0),
            gate=gate, group=d.get("group", "linear"), error_model=error_model,
            tau_grid=grid("tau"), hyperfine_grid=grid("A"), gamma_grid=grid("Gamma"),
            epsilon_grid=grid("epsilon"), fit_window=sweep.get("fit_window", "auto"),
            seeds=d.get("seeds"), output_dir=d.get("output_dir", "results"),
            dimension_cap=d.get("dimension_cap"), jobs=d.get("jobs", 1), settings=settings,
        )

    def __str__(self) -> str:
        return (f"ExperimentConfig(n={self.n}, n_B={self.n_bath}, gate={self.gate}, "
                f"{len(self.tau_grid)} τ-Werte, seeds={self.seeds})")

    def __repr__(self) -> str:
        return self.__str__()


if __name__ == "__main__":
    cfg = ExperimentConfig.from_dict({
        "model": {"n": 2, "n_B": 2},
        "gate": "x:1:pi/4",
        "sweep": {"tau": {"logspace": [-3, -2, 3]}},
        "seeds": [1],
    })
    print(cfg)
    print(cfg.points()[0])
