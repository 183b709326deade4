from __future__ import annotations

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.stats

from analysis.metrics import gate_infidelity, ratio_from_infidelities
from model.experiment import ExperimentConfig, SweepPoint
from model.spin_bath import SimulationResult, sample_bath_model
from solver.bath_hamiltonian import build_internal_hamiltonian
from solver.operators import operator_norm
from solver.propagation import reference_input_state, simulate
from synthesis.schedules import dcg_schedule_for, primitive_schedule_for

logger = logging.getLogger(__name__)

# Höchstens 15 % Abweichung der lokalen Steigung vom Wert bei kleinstem τ
AUTO_WINDOW_TOLERANCE = 0.15


def run_point(point: SweepPoint, config: ExperimentConfig) -> SimulationResult:
    """ Simuliert primitives Gatter und DCG an einem Gitterpunkt.

    Parameters
    ----------
    point : SweepPoint
        τ, A, Γ, ε und Seed des Punktes.
    config : ExperimentConfig
        Modell, Gatter und Einstellungen.

    Returns
    -------
    SimulationResult
        Fidelities, Verhältnis r und Flags.
    """
    settings = config.settings
    model = sample_bath_model(config.n, config.n_bath, point.Gamma, point.A, point.seed, settings.dimension_cap)
    internal = build_internal_hamiltonian(model, settings)
    error_model = config.error_model_for(point.epsilon)
    rng = np.random.default_rng([point.seed, point.index])

    gate = config.gate
    psi = reference_input_state(config.n)
    target = gate.target(config.n)
    prim = primitive_schedule_for(gate, point.tau, config.n)
    dcg = dcg_schedule_for(gate, point.tau, config.n, config.group)

    rho_prim = simulate(prim, model, error_model, rng, psi, settings, internal)
    rho_dcg = simulate(dcg, model, error_model, rng, psi, settings, internal)
    e_prim = gate_infidelity(rho_prim, target, psi)
    e_dcg = gate_infidelity(rho_dcg, target, psi)
    r, saturated = ratio_from_infidelities(e_prim, e_dcg, settings.infidelity_floor)

    notes = []
    h_norm = operator_norm(internal[0] + internal[1], settings.norm)
    converged = h_norm * dcg.total_duration < np.pi
    if not converged:
        notes.append("‖H_e‖T ≥ π")
    if saturated:
        notes.append("1-f_dcg unter der Untergrenze")
    logger.info("Punkt %d: τ=%.4g A=%g Γ=%g ε=%g seed=%d r=%.4g", point.index, point.tau,
                point.A, point.Gamma, point.epsilon, point.seed, r)
    return SimulationResult(point.tau, point.A, point.Gamma, point.epsilon, point.seed,
                            1.0 - e_prim, 1.0 - e_dcg, r, saturated, converged, notes)


def local_slopes(taus: np.ndarray, ratios: np.ndarray) -> np.ndarray:
    """-d log r / d log τ zwischen benachbarten Punkten (τ aufsteigend)."""
    return -np.diff(np.log(ratios)) / np.diff(np.log(taus))


def auto_fit_window(taus, ratios) -> tuple[float, float] | None:
    """ Größter zusammenhängender Bereich kleiner τ mit nahezu konstanter Steigung.

    Parameters
    ----------
    taus, ratios : array_like
        Kurve r(τ), beliebig sortiert.

    Returns
    -------
    tuple[float, float] | None
        (τ_min, τ_max) des Fensters oder None bei weniger als zwei Punkten.
    """
    order = np.argsort(taus)
    taus = np.asarray(taus, dtype=float)[order]
    ratios = np.asarray(ratios, dtype=float)[order]
    if len(taus) < 2:
        return None
    slopes = local_slopes(taus, ratios)
    limit = slopes[0]
    end = 1
    for s in slopes[1:]:
        if abs(s - limit) > AUTO_WINDOW_TOLERANCE * abs(limit):
            break
        end += 1
    return float(taus[0]), float(taus[end])


def fit_slope(taus, ratios, window: tuple[float, float] | None = None,
              ) -> tuple[float, float, tuple[float, float]] | None:
    """ Steigung von log r gegen log τ mit Vorzeichen so, dass r ∝ τ^{-s} s liefert.

    Parameters
    ----------
    taus, ratios : array_like
        Kurve r(τ).
    window : tuple[float, float] | None
        Fitbereich, Standard ``auto_fit_window``.

    Returns
    -------
    tuple[float, float, tuple[float, float]] | None
        (Steigung, Standardfehler, Fenster) oder None ohne Fit.
    """
    taus = np.asarray(taus, dtype=float)
    ratios = np.asarray(ratios, dtype=float)
    window = auto_fit_window(taus, ratios) if window is None else window
    if window is None:
        return None
    lo, hi = window
    mask = (taus >= lo * (1 - 1e-12)) & (taus <= hi * (1 + 1e-12))
    if mask.sum() < 2:
        return None
    if mask.sum() == 2:
        i, j = np.flatnonzero(mask)
        slope = -np.log(ratios[j] / ratios[i]) / np.log(taus[j] / taus[i])
        return float(slope), 0.0, (float(lo), float(hi))
    fit = scipy.stats.linregress(np.log(taus[mask]), np.log(ratios[mask]))
    return float(-fit.slope), float(fit.stderr), (float(lo), float(hi))


def tau_star(taus, ratios) -> float | None:
    """Größtes Gitter-τ mit r > 1 dort und bei allen kleineren τ."""
    order = np.argsort(taus)
    best = None
    for tau, r in zip(np.asarray(taus, dtype=float)[order], np.asarray(ratios, dtype=float)[order]):
        if r <= 1.0:
            break
        best = float(tau)
    return best


def plateau(taus, ratios, rel_tol: float = 0.1) -> tuple[bool, float]:
    """ Vergleicht r an den beiden kleinsten τ.

    Returns
    -------
    tuple[bool, float]
        (Plateau erreicht, r(τ_1)/r(τ_2) mit τ_1 < τ_2).
    """
    order = np.argsort(taus)
    assert len(order) >= 2, "Plateau-Prüfung braucht mindestens zwei Punkte."
    r = np.asarray(ratios, dtype=float)[order]
    ratio = float(r[0] / r[1])
    return abs(ratio - 1.0) < rel_tol, ratio


@dataclass
class CurveFit:
    """Auswertung einer Kurve r(τ) bei festem (A, Γ, ε, Seed)."""
    A: float
    Gamma: float
    epsilon: float
    seed: int
    slope: float | None = None
    slope_stderr: float | None = None
    fit_window: tuple[float, float] | None = None
    tau_star: float | None = None
    plateau_ratio: float | None = None
    excluded: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["fit_window"] = list(self.fit_window) if self.fit_window is not None else None
        return d


class SweepResult:
    def __init__(self, results: list[SimulationResult], curves: list[CurveFit]):
        """Alle Punkte in Gitterreihenfolge plus Auswertung je Kurve."""
        self.results = results
        self.curves = curves

    def curve(self, A: float | None = None, Gamma: float | None = None,
              epsilon: float | None = None, seed: int | None = None) -> CurveFit:
        for c in self.curves:
            if all(v is None or v == getattr(c, k) for k, v in
                   (("A", A), ("Gamma", Gamma), ("epsilon", epsilon), ("seed", seed))):
                return c
        raise KeyError(f"Keine Kurve für A={A}, Γ={Gamma}, ε={epsilon}, seed={seed}")

    def rows(self, curve: CurveFit) -> list[SimulationResult]:
        return [r for r in self.results
                if (r.A, r.Gamma, r.epsilon, r.seed) == (curve.A, curve.Gamma, curve.epsilon, curve.seed)]

    def summary(self) -> dict:
        """JSON-Zusammenfassung; die oberste Ebene beschreibt die erste Kurve."""
        first = self.curves[0] if self.curves else CurveFit(0.0, 0.0, 0.0, 0)
        return {
            "slope": first.slope,
            "slope_stderr": first.slope_stderr,
            "tau_star": first.tau_star,
            "curves": [c.to_dict() for c in self.curves],
            "points": len(self.results),
        }

    def __str__(self) -> str:
        return f"SweepResult({len(self.results)} Punkte, {len(self.curves)} Kurven)"

    def __repr__(self) -> str:
        return self.__str__()


def analyse_curves(results: list[SimulationResult], fit_window="auto") -> list[CurveFit]:
    """Gruppiert nach (A, Γ, ε, Seed) und fittet jede Kurve."""
    key = lambda r: (r.seed, r.A, r.Gamma, r.epsilon)
    curves = []
    for (seed, a, g, eps), group in itertools.groupby(sorted(results, key=key), key=key):
        group = list(group)
        curve = CurveFit(a, g, eps, seed)
        taus = np.array([r.tau for r in group])
        ratios = np.array([r.r for r in group])
        curve.tau_star = tau_star(taus, ratios)
        if len(group) >= 2:
            curve.plateau_ratio = plateau(taus, ratios)[1]

        usable = [r for r in group if not r.saturated]
        curve.excluded = [r.tau for r in group if r.saturated]
        if curve.excluded:
            logger.warning("%d gesättigte Punkte vom Fit ausgeschlossen (A=%g, Γ=%g, ε=%g)",
                           len(curve.excluded), a, g, eps)
        window = None if fit_window == "auto" else tuple(fit_window)
        fit = fit_slope([r.tau for r in usable], [r.r for r in usable], window) if len(usable) >= 2 else None
        if fit is not None:
            curve.slope, curve.slope_stderr, curve.fit_window = fit
        curves.append(curve)
    return curves


def sweep(config: ExperimentConfig, jobs: int | None = None) -> SweepResult:
    """ Rechnet alle Gitterpunkte und fittet die Kurven.

    Parameters
    ----------
    config : ExperimentConfig
        Gitter, Seeds und Modell.
    jobs : int | None
        Anzahl Prozesse, Standard config.jobs; die Ausgabe folgt immer der Gitterreihenfolge.

    Returns
    -------
    SweepResult
        Ergebnisse und Kurvenauswertung.
    """
    points = config.points()
    jobs = config.jobs if jobs is None else jobs
    logger.info("Sweep über %d Punkte mit %d Prozess(en)", len(points), jobs)
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run_point, points, itertools.repeat(config)))
    else:
        results = [run_point(p, config) for p in points]
    return SweepResult(results, analyse_curves(results, config.fit_window))


if __name__ == "__main__":
    cfg = ExperimentConfig.from_dict({
        "model": {"n": 1, "n_B": 2, "Gamma": 0.0, "A": 1.0},
        "gate": "x:1:pi/4",
        "sweep": {"tau": {"logspace": [-2, -1, 4]}},
        "seeds": [1],
    })
    res = sweep(cfg)
    for row in res.results:
        print(row.to_row())
    print(res.summary())
