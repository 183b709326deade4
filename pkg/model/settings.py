from __future__ import annotations

from model.errors import ConfigError


class Settings:
    """Numerische Toleranzen und Konventionen, die alle Module teilen."""

    NORMS = ("spectral", "frobenius")
    MAGNUS_CRITERIA = ("conservative", "toggling")
    PRECISIONS = ("double",)

    def __init__(
        self,
        dimension_cap: int = 1024,
        hermitian_tol: float = 1e-12,
        unitary_tol: float = 1e-10,
        simulation_unitary_tol: float = 1e-9,
        infidelity_floor: float = 1e-13,
        branch_margin: float = 1e-6,
        spin_scale: float = 0.5,
        norm: str = "spectral",
        magnus_criterion: str = "conservative",
        precision: str = "double",
    ):
        """Erstellt einen Satz von Einstellungen.

        Parameters
        ----------
        dimension_cap : int
            Maximale Dimension des Gesamtraums System ⊗ Bad.
        hermitian_tol, unitary_tol : float
            Toleranzen für die Prüfung von Hermitezität und Unitarität.
        simulation_unitary_tol : float
            Ab diesem Unitaritätsresiduum bricht eine Simulation ab.
        infidelity_floor : float
            Untergrenze für 1-f, darunter gilt ein Punkt als gesättigt.
        branch_margin : float
            Abstand der Eigenphasen von ±π, unterhalb dessen der Logarithmus abgelehnt wird.
        spin_scale : float
            Spin-Konvention S = spin_scale · σ in H_B, H_SB und der Heisenberg-Drift.
        norm : str
            "spectral" oder "frobenius".
        magnus_criterion : str
            "conservative" prüft ‖H_e‖T < π, "toggling" prüft ‖H_SB‖T < π.
        precision : str
            Nur "double" wird unterstützt.
        """
        if norm not in self.NORMS:
            raise ConfigError(f"Unbekannte Norm: {norm}")
        if magnus_criterion not in self.MAGNUS_CRITERIA:
            raise ConfigError(f"Unbekanntes Magnus-Kriterium: {magnus_criterion}")
        if precision not in self.PRECISIONS:
            raise ConfigError(f"Präzision '{precision}' wird nicht unterstützt (nur double).")
        assert dimension_cap >= 1, "Dimensionsgrenze muss positiv sein."
        assert spin_scale > 0, "Spin-Skala muss positiv sein."

        self.dimension_cap = int(dimension_cap)
        self.hermitian_tol = float(hermitian_tol)
        self.unitary_tol = float(unitary_tol)
        self.simulation_unitary_tol = float(simulation_unitary_tol)
        self.infidelity_floor = float(infidelity_floor)
        self.branch_margin = float(branch_margin)
        self.spin_scale = float(spin_scale)
        self.norm = norm
        self.magnus_criterion = magnus_criterion
        self.precision = precision

    @classmethod
    def defaults(cls) -> Settings:
        return cls()

    def to_dict(self) -> dict:
        return {
            "dimension_cap": self.dimension_cap,
            "hermitian_tol": self.hermitian_tol,
            "unitary_tol": self.unitary_tol,
            "simulation_unitary_tol": self.simulation_unitary_tol,
            "infidelity_floor": self.infidelity_floor,
            "branch_margin": self.branch_margin,
            "spin_scale": self.spin_scale,
            "norm": self.norm,
            "magnus_criterion": self.magnus_criterion,
            "precision": self.precision,
        }

    @classmethod
    def from_dict(cls, d: dict) -> Settings:
        """Erstellt Einstellungen aus einem Dictionary, fehlende Werte bleiben Standard.

        Parameters
        ----------
        d : dict
            Teilmenge der Felder aus ``to_dict``.

        Returns
        -------
        Settings
            Die Einstellungen.
        """
        unknown = set(d) - set(cls().to_dict())
        if unknown:
            raise ConfigError(f"Unbekannte Einstellungen: {sorted(unknown)}")
        return cls(**d)

    def __str__(self) -> str:
        return (f"Settings(cap={self.dimension_cap}, norm={self.norm}, "
                f"spin_scale={self.spin_scale}, precision={self.precision})")

    def __repr__(self) -> str:
        return self.__str__()


DEFAULT_SETTINGS = Settings.defaults()
