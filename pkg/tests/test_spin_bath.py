import unittest
import numpy as np

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from analysis.metrics import gate_fidelity, gate_infidelity, improvement_ratio, ratio_from_infidelities
from analysis.rotating_frame import (rotating_frame_transform, rotating_period, stroboscopic_tau,
                                     time_average_over_period)
from analysis.subspaces import ErrorSubspace, pauli_components
from model.errors import ConfigError, DimensionError
from model.gates import GateSpec
from model.hamiltonian import HamiltonianSpec
from model.pauli import PauliString
from model.space import JointSpace
from model.spin_bath import ControlErrorModel, sample_bath_model
from solver.bath_hamiltonian import build_internal_hamiltonian
from solver.operators import assemble, mod_b_reduce, operator_norm
from solver.propagation import reference_input_state, simulate
from synthesis.control_errors import apply_control_error
from synthesis.schedules import dcg_schedule_for, primitive_schedule_for


class TestBathModel(unittest.TestCase):
    """Testet das Ziehen der Kopplungen des Spinbads."""

    def test_deterministic(self):
        a = sample_bath_model(2, 3, 1.0, 2.0, seed=5)
        b = sample_bath_model(2, 3, 1.0, 2.0, seed=5)
        np.testing.assert_array_equal(a.gamma_couplings, b.gamma_couplings)
        np.testing.assert_array_equal(a.hyperfine_couplings, b.hyperfine_couplings)
        c = sample_bath_model(2, 3, 1.0, 2.0, seed=6)
        self.assertFalse(np.array_equal(a.hyperfine_couplings, c.hyperfine_couplings))

    def test_shapes_and_ranges(self):
        m = sample_bath_model(2, 4, 0.5, 3.0, seed=1)
        self.assertEqual(m.gamma_couplings.shape, (4, 4))
        self.assertEqual(m.hyperfine_couplings.shape, (2, 4))
        self.assertTrue(np.allclose(np.tril(m.gamma_couplings), 0.0))
        self.assertLessEqual(np.max(np.abs(m.gamma_couplings)), 0.5)
        self.assertLessEqual(np.max(np.abs(m.hyperfine_couplings)), 3.0)
        self.assertEqual(m.bath_dimension, 16)

    def test_negative_scale(self):
        with self.assertRaises(ConfigError):
            sample_bath_model(1, 1, -1.0, 1.0, seed=0)


class TestInternalHamiltonian(unittest.TestCase):
    """Testet H_B und H_SB des Spinbads."""

    def test_bath_term_is_pure_bath(self):
        h_b, h_sb = build_internal_hamiltonian(sample_bath_model(2, 3, 1.0, 1.0, seed=2))
        self.assertGreater(operator_norm(h_b), 0.0)
        self.assertLess(operator_norm(mod_b_reduce(h_b)), 1e-12)
        np.testing.assert_allclose(mod_b_reduce(h_sb).matrix, h_sb.matrix, atol=1e-12)

    def test_single_pair_coupling(self):
        # H_SB = A S⃗·I⃗ mit S = σ/2
        m = sample_bath_model(1, 1, 0.0, 1.0, seed=1)
        h_b, h_sb = build_internal_hamiltonian(m)
        a = m.hyperfine_couplings[0, 0]
        expected = sum(np.kron(PauliString(p).to_matrix(), PauliString(p).to_matrix()) for p in "XYZ") * a / 4
        np.testing.assert_allclose(h_sb.matrix, expected, atol=1e-14)
        self.assertLess(operator_norm(h_b), 1e-14)


class TestSimulation(unittest.TestCase):
    """Testet die exakte Propagation und die Fidelity."""

    def test_reference_state(self):
        np.testing.assert_allclose(reference_input_state(2), np.array([1, 1, 0, 0]) / np.sqrt(2))

    def test_reduced_state(self):
        m = sample_bath_model(2, 2, 1.0, 1.0, seed=4)
        sched = dcg_schedule_for(GateSpec.parse("w:1,2:pi/4"), 0.01, 2)
        rho = simulate(sched, m)
        self.assertEqual(rho.shape, (4, 4))
        self.assertAlmostEqual(np.trace(rho).real, 1.0)
        np.testing.assert_allclose(rho, rho.conj().T, atol=1e-12)

    def test_without_bath_coupling(self):
        m = sample_bath_model(1, 1, 0.0, 0.0, seed=0)
        sched = dcg_schedule_for(GateSpec.parse("x:1:pi/4"), 0.05, 1)
        rho = simulate(sched, m)
        f = gate_fidelity(rho, sched.target, reference_input_state(1))
        self.assertAlmostEqual(f, 1.0, places=6)

    def test_qubit_mismatch(self):
        m = sample_bath_model(1, 1, 1.0, 1.0, seed=0)
        sched = primitive_schedule_for(GateSpec.parse("w:1,2:pi/4"), 0.1, 2)
        with self.assertRaises(DimensionError):
            simulate(sched, m)


class TestControlErrors(unittest.TestCase):
    """Testet die drei Kontrollfehlermodelle."""

    def setUp(self):
        self.sched = primitive_schedule_for(GateSpec.parse("x:1:pi/2"), 1.0, 1)

    def test_model_validation(self):
        with self.assertRaises(ConfigError):
            ControlErrorModel("drift", 0.1)
        with self.assertRaises(ConfigError):
            ControlErrorModel("fixed_systematic", -0.1)
        with self.assertRaises(ConfigError):
            ControlErrorModel("scaled_systematic", 0.1)

    def test_trivial_returns_original(self):
        self.assertIs(apply_control_error(self.sched, ControlErrorModel("fixed_systematic", 0.0)), self.sched)

    def test_fixed_systematic(self):
        bad = apply_control_error(self.sched, ControlErrorModel("fixed_systematic", 0.01))
        self.assertAlmostEqual(bad[0].amplitude, self.sched[0].amplitude * 1.01)

    def test_scaled_systematic(self):
        dev = HamiltonianSpec().add(PauliString("Z"), 1.0)
        bad = apply_control_error(self.sched, ControlErrorModel("scaled_systematic", 0.1, deviation=dev))
        self.assertEqual(len(bad[0].static), 1)
        self.assertAlmostEqual(bad[0].static.terms[0].weight, 0.1)
        self.assertAlmostEqual(bad[0].amplitude, self.sched[0].amplitude)

    def test_random_needs_rng(self):
        model = ControlErrorModel("random_overrotation", 0.01, sigma=0.01)
        with self.assertRaises(ConfigError):
            apply_control_error(self.sched, model)
        a = apply_control_error(self.sched, model, np.random.default_rng(3))
        b = apply_control_error(self.sched, model, np.random.default_rng(3))
        self.assertEqual(a[0].amplitude, b[0].amplitude)


class TestRotatingFrame(unittest.TestCase):
    """Testet den mit Ω_c rotierenden Rahmen."""

    def setUp(self):
        self.space = JointSpace(1, 2)
        self.b = np.array([[0.2, 0.1], [0.1, -0.2]])
        self.h = assemble(HamiltonianSpec().add(PauliString("X"), 1.0, self.b)
                          .add(PauliString("Z"), 0.5, self.b), self.space)

    def test_average_keeps_only_z(self):
        avg = time_average_over_period(self.h, 10.0)
        expected = assemble(HamiltonianSpec().add(PauliString("Z"), 0.5, self.b), self.space)
        np.testing.assert_allclose(avg.matrix, expected.matrix, atol=1e-12)

    def test_full_period_is_identity(self):
        moved = rotating_frame_transform(self.h, 4.0, rotating_period(4.0))
        np.testing.assert_allclose(moved.matrix, self.h.matrix, atol=1e-12)

    def test_average_random_linear_errors(self):
        rng = np.random.default_rng(17)
        space = JointSpace(2, 2)
        for _ in range(10):
            h = ErrorSubspace.linear(2).sample(space, rng)
            before = pauli_components(h)
            after = pauli_components(time_average_over_period(h, float(rng.uniform(1.0, 10.0))))
            for labels, block in after.items():
                if set(labels) <= {"I", "Z"}:
                    np.testing.assert_allclose(block, before[labels], atol=1e-12, err_msg=labels)
                else:
                    self.assertLess(np.linalg.norm(block, 2), 1e-10, labels)

    def test_stroboscopic_tau(self):
        self.assertAlmostEqual(stroboscopic_tau(2.0, 3), 1.5 * np.pi)


class TestMetrics(unittest.TestCase):
    """Testet Infidelity und Verbesserungsfaktor."""

    def test_infidelity_matches_fidelity(self):
        psi = np.array([1.0, 1.0]) / np.sqrt(2.0)
        rho = np.array([[0.5, 0.45], [0.45, 0.5]])
        f = gate_fidelity(rho, np.eye(2), psi)
        self.assertAlmostEqual(gate_infidelity(rho, np.eye(2), psi), 1.0 - f)

    def test_infidelity_small_values(self):
        psi = np.array([1.0, 0.0])
        eps = 1e-15
        rho = np.diag([1.0 - eps, eps])
        self.assertAlmostEqual(gate_infidelity(rho, np.eye(2), psi) / eps, 0.5, places=6)

    def test_ratio(self):
        r, saturated = improvement_ratio(0.98, 0.99)
        self.assertAlmostEqual(r, 2.0)
        self.assertFalse(saturated)

    def test_ratio_saturates(self):
        r, saturated = ratio_from_infidelities(1e-3, 0.0, floor=1e-13)
        self.assertTrue(saturated)
        self.assertAlmostEqual(r / 1e10, 1.0)


if __name__ == "__main__":
    unittest.main()
