"""Batch-Oberfläche: Synthese, Prüfung, Einzelsimulation und Sweeps.

Aufruf aus dem Projektverzeichnis::

    python view/cli.py synth --model linear --gate x:1:pi/4
    python view/cli.py verify results/dcg_linear.txt
    python view/cli.py sweep config.toml --jobs 4
"""
import argparse
import json
import logging
import os
import sys
from typing import List, Optional

sys.path.insert(0, os.path.join(os.path.dirname(os.path.abspath(__file__)), ".."))

from analysis.subspaces import ErrorSubspace
from analysis.validators import ErrorValidator
from experiments.sweep import run_point, sweep
from model.chain import ChainModel
from model.errors import ConfigError
from model.experiment import ExperimentConfig
from model.gates import GateSpec
from model.settings import Settings
from persistence.io_handler import IOHandler
from synthesis.drift import gnn_group, single_qubit_drift_dcg, two_qubit_drift_dcg
from synthesis.schedules import dcg_schedule_for, edd_schedule_for, group_for_model
from synthesis.sequences import synthesize_dcg, synthesize_edd
from view.summary import format_schedule_summary, format_sweep_summary, format_verify_report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _load_config(args: argparse.Namespace) -> ExperimentConfig:
    raw = IOHandler.load_config(args.config) if args.config else {}
    config = ExperimentConfig.from_dict(raw)
    overrides = {
        "jobs": getattr(args, "jobs", None),
        "output_dir": getattr(args, "output_dir", None),
        "seeds": [args.seed] if getattr(args, "seed", None) is not None else None,
        "tau": [args.tau] if getattr(args, "tau", None) is not None else None,
    }
    return config.with_overrides(**overrides)


def cmd_synth(args: argparse.Namespace) -> int:
    """Schreibt Schedule (Text und JSON) und, wo vorhanden, die symbolische Sequenz."""
    out = args.output_dir or "results"
    sequence = None
    if args.drift is not None:
        chain_n = args.n or 4
        if args.pair is not None:
            schedule = two_qubit_drift_dcg(ChainModel(chain_n, args.lam, args.pair), args.pair, args.tau)
            group, rep = gnn_group(chain_n, args.pair)
            sequence = synthesize_edd(group, rep)
            stem = f"drift2q_k{args.pair}"
        elif args.gate is not None:
            gate = GateSpec.parse(args.gate)
            if len(gate.qubits) != 1:
                raise ConfigError("Der Einzelqubit-Driftblock braucht ein Gatter x:k:φ oder y:k:φ.")
            k = gate.qubits[0]
            schedule = single_qubit_drift_dcg(ChainModel(chain_n, args.lam, k), k, gate.theta,
                                              gate.kind, args.tau)
            group, rep = gnn_group(chain_n)
            sequence = synthesize_dcg(group, rep)
            stem = f"drift1q_k{k}"
        else:
            raise ConfigError("--drift braucht --pair K oder --gate.")
        print(format_schedule_summary(schedule.merged(), sequence))
    else:
        if args.noop == (args.gate is not None):
            raise ConfigError("Genau eines von --gate und --noop angeben.")
        gate = GateSpec("noop") if args.noop else GateSpec.parse(args.gate)
        n = args.n or max(gate.qubits, default=1)
        group, rep = group_for_model(args.model, n)
        if args.noop:
            schedule = edd_schedule_for(args.model, args.tau, n)
            sequence = synthesize_edd(group, rep)
            stem = f"edd_{args.model}"
        else:
            schedule = dcg_schedule_for(gate, args.tau, n, args.model)
            sequence = synthesize_dcg(group, rep)
            stem = f"dcg_{args.model}"
        print(format_schedule_summary(schedule, sequence))

    stem = args.name or stem
    IOHandler.save_schedule(schedule, os.path.join(out, f"{stem}.txt"))
    IOHandler.save_schedule(schedule, os.path.join(out, f"{stem}.json"))
    if sequence is not None:
        IOHandler.save_sequence(sequence, os.path.join(out, f"{stem}.seq"))
    logger.info("Schedule %s nach %s geschrieben", stem, out)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    """Lädt einen Schedule, führt alle Prüfungen aus und meldet das Ergebnis als JSON."""
    schedule = IOHandler.load_schedule(args.schedule)
    subspace = ErrorSubspace.from_name(args.subspace, schedule.n_qubits)
    raw = IOHandler.load_config(args.config) if args.config else {}
    settings = Settings.from_dict(raw.get("settings", {}))
    report = ErrorValidator.run_suites(schedule, subspace, args.bath_dimension, args.samples,
                                       args.tol, args.seed, settings)
    if args.output:
        IOHandler.save_json(report, args.output)
    print(json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False))
    print(format_verify_report(report), file=sys.stderr)
    return EXIT_OK if report["pass"] else EXIT_FAILED


def cmd_simulate(args: argparse.Namespace) -> int:
    """Rechnet den ersten Gitterpunkt der Konfiguration."""
    config = _load_config(args)
    point = config.points()[0]
    result = run_point(point, config)
    IOHandler.save_config_snapshot(config.to_dict(), config.output_dir)
    IOHandler.save_json(result.to_dict(), os.path.join(config.output_dir, "simulate.json"))
    print(json.dumps(result.to_dict(), indent=2, sort_keys=True, ensure_ascii=False))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    """Vollständiger Sweep mit CSV, Zusammenfassung und Konfigurationsabzug."""
    config = _load_config(args)
    result = sweep(config)
    IOHandler.save_config_snapshot(config.to_dict(), config.output_dir)
    IOHandler.save_results_csv(result.results, os.path.join(config.output_dir, "results.csv"))
    summary = result.summary()
    IOHandler.save_json(summary, os.path.join(config.output_dir, "summary.json"))
    print(format_sweep_summary(summary))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Synthese und Prüfung von DCG- und EDD-Sequenzen mit Spinbad-Simulation.")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v: INFO, -vv: DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="Sequenz synthetisieren und als Schedule schreiben")
    p.add_argument("--model", choices=("linear", "dephasing"), default="linear", help="Fehlermodell / Gruppe")
    p.add_argument("--gate", help="Zielgatter, z.B. x:1:pi/4 oder w:1,2:pi/4")
    p.add_argument("--noop", action="store_true", help="EDD statt DCG")
    p.add_argument("--drift", choices=("heisenberg",), help="Blöcke für den Heisenberg-Drift")
    p.add_argument("--pair", type=int, help="Zielpaar (k, k+1) des Zweiqubit-Driftblocks")
    p.add_argument("--n", type=int, help="Anzahl Qubits (Kettenlänge bei --drift, Standard 4)")
    p.add_argument("--lam", type=float, default=1.0, help="Driftstärke λ")
    p.add_argument("--tau", type=float, default=1.0, help="minimale Gatterdauer τ")
    p.add_argument("--output-dir", help="Ausgabeverzeichnis (Standard: results)")
    p.add_argument("--name", help="Dateiname ohne Endung")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("verify", help="Schedule-Datei prüfen")
    p.add_argument("schedule", help="Schedule als .txt oder .json")
    p.add_argument("--config", help="Konfiguration für numerische Einstellungen")
    p.add_argument("--subspace", choices=("linear", "dephasing", "nearest_neighbor"), default="linear")
    p.add_argument("--bath-dimension", type=int, default=4)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", help="Bericht zusätzlich in diese Datei schreiben")
    p.set_defaults(func=cmd_verify)

    for name, func, text in (("simulate", cmd_simulate, "einen Spinbad-Punkt rechnen"),
                             ("sweep", cmd_sweep, "Parameter-Sweep rechnen")):
        p = sub.add_parser(name, help=text)
        p.add_argument("config", nargs="?", help="TOML- oder JSON-Konfiguration")
        p.add_argument("--output-dir", help="überschreibt output_dir")
        p.add_argument("--seed", type=int, help="überschreibt die Seed-Liste")
        p.add_argument("--tau", type=float, help="überschreibt das τ-Gitter mit einem Wert")
        p.add_argument("--jobs", type=int, help="Anzahl Prozesse")
        p.set_defaults(func=func)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.func(args)
    except ValueError as exc:
        logger.error("%s", exc)
        print(f"Fehler: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
