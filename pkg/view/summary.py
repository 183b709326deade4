from model.group import dephasing_group, linear_group
from model.schedule import ControlSchedule, SequenceSpec
from synthesis.sequences import synthesize_dcg, synthesize_edd


def overhead_table(n: int = 1) -> dict[str, int]:
    """Dauer in Einheiten von τ für EDD und DCG über 𝒢_LD und 𝒢_Z."""
    table = {}
    for suffix, factory in (("lin", linear_group), ("Z", dephasing_group)):
        group, rep = factory(n)
        table[f"EDD^{suffix}"] = synthesize_edd(group, rep).total_multiplier
        table[f"DCG^{suffix}"] = synthesize_dcg(group, rep).total_multiplier
    return table


def format_overhead_table(n: int = 1) -> str:
    rows = [f"{name:<8} {mult:>3}τ" for name, mult in overhead_table(n).items()]
    return "\n".join(["Sequenz   Dauer", *rows])


def format_schedule_summary(schedule: ControlSchedule, sequence: SequenceSpec | None = None) -> str:
    """ Kurzbericht über einen synthetisierten Schedule.

    Parameters
    ----------
    schedule : ControlSchedule
        Der Schedule.
    sequence : SequenceSpec | None
        Die symbolische Sequenz, falls vorhanden.

    Returns
    -------
    str
        Mehrzeiliger Text.
    """
    lines = [f"{schedule.name}: {len(schedule)} Segmente, T = {schedule.total_duration:.6g}"]
    if sequence is not None:
        lines.append(f"Sequenz: {sequence.render()}")
        lines.append(f"Dauer: {sequence.total_multiplier}τ")
    roles: dict[str, int] = {}
    for r in schedule.roles():
        roles[r] = roles.get(r, 0) + 1
    lines.append("Rollen: " + ", ".join(f"{k}={v}" for k, v in sorted(roles.items())))
    return "\n".join(lines)


def format_verify_report(report: dict) -> str:
    lines = [f"Schedule {report['schedule_id']}: {'BESTANDEN' if report['pass'] else 'FEHLGESCHLAGEN'}"]
    for name, suite in sorted(report.get("suites", {}).items()):
        status = "ok" if suite.get("pass", True) else "FEHLER"
        lines.append(f"  {name:<12} {status}")
    cancellation = report.get("suites", {}).get("cancellation", {})
    if cancellation.get("drift"):
        lines.append(f"  Driftschedule: Auslöschung gegen {cancellation['tolerance']:.2e} (‖H_drift‖·T) geprüft")
    return "\n".join(lines)


def format_sweep_summary(summary: dict) -> str:
    lines = [f"{summary['points']} Punkte"]
    for c in summary["curves"]:
        slope = "-" if c["slope"] is None else f"{c['slope']:.4f} ± {c['slope_stderr']:.1e}"
        star = "-" if c["tau_star"] is None else f"{c['tau_star']:.4g}"
        lines.append(f"  A={c['A']:g} Γ={c['Gamma']:g} ε={c['epsilon']:g} seed={c['seed']}: "
                     f"Steigung {slope}, τ* {star}")
    return "\n".join(lines)


if __name__ == "__main__":
    print(format_overhead_table())
