import csv
import json
import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from model.chain import DriftSchedule
from model.errors import ConfigError, ScheduleParseError
from model.hamiltonian import HamiltonianSpec
from model.schedule import ROLES, ControlSchedule, ControlSegment, SequenceSpec
from model.spin_bath import SimulationResult


def _ensure_parent(filepath: str) -> None:
    parent = os.path.dirname(os.path.abspath(filepath))
    os.makedirs(parent, exist_ok=True)


class IOHandler:
    """Kümmert sich um das Speichern und Laden von Schedules, Sequenzen, Konfigurationen und Ergebnissen."""

    VERSION = 1
    SNAPSHOT_NAME = "config_snapshot.json"

    @staticmethod
    def schedule_to_text(schedule: ControlSchedule) -> str:
        """Textform: Kopfzeilen mit ``#``, danach ein Segment pro Zeile.

        Spalten: role token layer amplitude duration control static; leere
        Hamiltonians stehen als ``0``.
        """
        lines = [
            f"# name: {schedule.name}",
            f"# n_qubits: {schedule.n_qubits}",
            "# role token layer amplitude duration control static",
        ]
        for seg in schedule:
            lines.append(" ".join([
                seg.role,
                seg.token or "-",
                str(seg.layer),
                format(seg.amplitude, ".17g"),
                format(seg.duration, ".17g"),
                seg.hamiltonian.render() or "0",
                seg.static.render() or "0",
            ]))
        return "\n".join(lines) + "\n"

    @staticmethod
    def schedule_from_text(text: str) -> ControlSchedule:
        """ Liest die Textform von ``schedule_to_text``.

        Parameters
        ----------
        text : str
            Dateiinhalt.

        Returns
        -------
        ControlSchedule
            Der Schedule (ohne Zielgatter).
        """
        name, n_qubits, segments = "", None, []
        for lineno, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, sep, value = line[1:].partition(":")
                if sep and key.strip() == "name":
                    name = value.strip()
                elif sep and key.strip() == "n_qubits":
                    try:
                        n_qubits = int(value)
                    except ValueError:
                        raise ScheduleParseError(f"Zeile {lineno}: ungültige Qubitzahl {value.strip()!r}") from None
                continue
            parts = line.split()
            if len(parts) != 7:
                raise ScheduleParseError(f"Zeile {lineno}: erwartet 7 Spalten, erhalten {len(parts)}")
            role, token, layer, amplitude, duration, control, static = parts
            if role not in ROLES:
                raise ScheduleParseError(f"Zeile {lineno}: unbekannte Rolle {role!r}")
            try:
                seg = ControlSegment(
                    HamiltonianSpec.parse(control), float(amplitude), float(duration),
                    role=role, token="" if token == "-" else token, layer=int(layer),
                    static=HamiltonianSpec.parse(static),
                )
            except (ValueError, AssertionError) as exc:
                raise ScheduleParseError(f"Zeile {lineno}: {exc}") from None
            segments.append(seg)

        if n_qubits is None:
            lengths = {s.hamiltonian.n_qubits() for s in segments} - {None}
            if len(lengths) != 1:
                raise ScheduleParseError("Qubitzahl fehlt und lässt sich nicht ableiten.")
            n_qubits = lengths.pop()
        if not segments:
            raise ScheduleParseError("Schedule enthält keine Segmente.")
        try:
            return ControlSchedule(segments, n_qubits, name)
        except AssertionError as exc:
            raise ScheduleParseError(str(exc)) from None

    @staticmethod
    def save_schedule(schedule, filepath: str) -> None:
        """Speichert einen Schedule (oder DriftSchedule) als Text (.txt) oder JSON (.json).

        Parameters
        ----------
        schedule : ControlSchedule | DriftSchedule
            Der Schedule.
        filepath : str
            Zieldatei; die Endung bestimmt das Format.
        """
        _ensure_parent(filepath)
        if filepath.endswith(".json"):
            data = {"version": IOHandler.VERSION, **schedule.to_dict()}
            if isinstance(schedule, DriftSchedule):
                data["kind"] = "drift"
            IOHandler.save_json(data, filepath)
            return
        if isinstance(schedule, DriftSchedule):
            schedule = schedule.merged()
        with open(filepath, "w", encoding="utf-8") as f:
            f.write(IOHandler.schedule_to_text(schedule))

    @staticmethod
    def load_schedule(filepath: str) -> ControlSchedule:
        """ Lädt einen Schedule aus Text oder JSON.

        Parameters
        ----------
        filepath : str
            Pfad zur Datei.

        Returns
        -------
        ControlSchedule
            Bei Drift-Blöcken der zusammengeführte Schedule.
        """
        if not os.path.exists(filepath):
            raise ScheduleParseError(f"Datei nicht gefunden: {filepath}")
        with open(filepath, "r", encoding="utf-8") as f:
            text = f.read()
        if not filepath.endswith(".json"):
            return IOHandler.schedule_from_text(text)

        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScheduleParseError(f"Ungültiges JSON: {exc}") from None
        if data.get("version") != IOHandler.VERSION:
            raise ScheduleParseError(f"Unbekannte Dateiversion: {data.get('version')}")
        if data.get("kind") == "drift":
            data = data["merged"]
        try:
            return ControlSchedule.from_dict(data)
        except (KeyError, TypeError, ValueError, AssertionError) as exc:
            raise ScheduleParseError(f"Schedule unvollständig: {exc}") from None

    @staticmethod
    def save_sequence(sequence: SequenceSpec, filepath: str) -> None:
        _ensure_parent(filepath)
        with open(filepath, "w", encoding="utf-8") as f:
            f.write(sequence.to_text())

    @staticmethod
    def load_sequence(filepath: str) -> SequenceSpec:
        with open(filepath, "r", encoding="utf-8") as f:
            text = f.read()
        try:
            return SequenceSpec.from_text(text, os.path.basename(filepath))
        except ValueError as exc:
            raise ScheduleParseError(str(exc)) from None

    @staticmethod
    def load_config(filepath: str) -> dict:
        """ Lädt eine TOML- oder JSON-Konfiguration.

        Parameters
        ----------
        filepath : str
            Pfad mit Endung .toml oder .json.

        Returns
        -------
        dict
            Rohes Dictionary für ExperimentConfig.from_dict.
        """
        if not os.path.exists(filepath):
            raise ConfigError(f"Konfiguration nicht gefunden: {filepath}")
        try:
            if filepath.endswith(".toml"):
                with open(filepath, "rb") as f:
                    return tomllib.load(f)
            if filepath.endswith(".json"):
                with open(filepath, "r", encoding="utf-8") as f:
                    return json.load(f)
        except (tomllib.TOMLDecodeError, json.JSONDecodeError) as exc:
            raise ConfigError(f"Konfiguration {filepath} ist fehlerhaft: {exc}") from None
        raise ConfigError(f"Unbekanntes Konfigurationsformat: {filepath}")

    @staticmethod
    def save_json(data: dict, filepath: str) -> None:
        """JSON mit sortierten Schlüsseln, damit gleiche Läufe bytegleiche Dateien liefern."""
        _ensure_parent(filepath)
        with open(filepath, "w", encoding="utf-8") as f:
            json.dump(data, f, indent=2, sort_keys=True, ensure_ascii=False)
            f.write("\n")

    @staticmethod
    def save_config_snapshot(config: dict, directory: str) -> str:
        path = os.path.join(directory, IOHandler.SNAPSHOT_NAME)
        IOHandler.save_json(config, path)
        return path

    @staticmethod
    def save_results_csv(results: list[SimulationResult], filepath: str) -> None:
        """Schreibt die Ergebnistabelle mit festem Kopf und 17 signifikanten Stellen."""
        _ensure_parent(filepath)
        with open(filepath, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(SimulationResult.CSV_FIELDS)
            for r in results:
                writer.writerow(r.to_row())

    @staticmethod
    def load_results_csv(filepath: str) -> list[dict]:
        with open(filepath, "r", encoding="utf-8", newline="") as f:
            return list(csv.DictReader(f))


if __name__ == "__main__":
    import tempfile

    from model.gates import GateSpec
    from synthesis.schedules import dcg_schedule_for

    sched = dcg_schedule_for(GateSpec.parse("x:1:pi/4"), 0.01, 2)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "dcg.txt")
        IOHandler.save_schedule(sched, path)
        print(IOHandler.load_schedule(path))
