"""Fehlerklassen, die Aufrufer gezielt abfangen können.

Einfache Vorbedingungen werden wie im restlichen Code per ``assert`` geprüft.
"""


class DimensionError(ValueError):
    """Dimensionen passen nicht zusammen oder überschreiten die Obergrenze."""


class HermiticityError(ValueError):
    """Operator ist nicht hermitesch bzw. Dichteoperator nicht positiv semidefinit."""


class GroupError(ValueError):
    """Gruppe, Erzeuger oder Cayley-Graph sind für die Konstruktion ungeeignet."""


class ScheduleParseError(ValueError):
    """Sequenz- oder Schedule-Datei ist fehlerhaft."""


class ConfigError(ValueError):
    """Experiment-Konfiguration ist unvollständig oder ungültig."""


class BranchCutError(ArithmeticError):
    """Eigenphase liegt zu nahe an -1, der Logarithmus ist nicht eindeutig."""


class PropagationError(RuntimeError):
    """Propagator verletzt die Unitarität oberhalb der Toleranz."""
