import unittest
import numpy as np
from scipy.stats import unitary_group

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from model.errors import ConfigError, DimensionError, HermiticityError
from model.gates import GateSpec
from model.hamiltonian import HamiltonianSpec
from model.pauli import PauliString
from model.settings import Settings
from model.space import DenseOperator, JointSpace
from solver.operators import (assemble, mod_b_reduce, operator_norm, partial_trace_bath, phase_distance,
                              segment_integral, uhlmann_fidelity, unitary_exponential)


class TestPauliString(unittest.TestCase):
    """Testet Produkte und Matrizen von Pauli-Strings."""

    def test_product_phase(self):
        # XY = iZ
        p = PauliString("X") * PauliString("Y")
        self.assertEqual(p.labels, "Z")
        self.assertAlmostEqual(p.coefficient, 1j)

    def test_qubit_one_is_leftmost(self):
        m = PauliString.on(2, {1: "Z"}).to_matrix()
        np.testing.assert_allclose(np.diag(m).real, [1, 1, -1, -1])

    def test_commutation(self):
        self.assertFalse(PauliString("XI").commutes_with(PauliString("ZI")))
        self.assertTrue(PauliString("XX").commutes_with(PauliString("ZZ")))


class TestJointSpace(unittest.TestCase):
    """Testet Raumdimensionen und die Dimensionsgrenze."""

    def test_dimensions(self):
        space = JointSpace(2, 4)
        self.assertEqual(space.system_dimension, 4)
        self.assertEqual(space.total_dimension, 16)

    def test_cap_exceeded(self):
        with self.assertRaises(DimensionError):
            JointSpace(6, 64, dimension_cap=1024)

    def test_non_hermitian_flag_rejected(self):
        with self.assertRaises(HermiticityError):
            DenseOperator(np.array([[0, 1], [0, 0]]), JointSpace(1, 1), hermitian=True)


class TestAssembly(unittest.TestCase):
    """Testet die Assemblierung S ⊗ B und die mod-B-Reduktion."""

    def setUp(self):
        self.space = JointSpace(1, 2)
        self.b = np.array([[0.3, 0.1], [0.1, -0.3]])

    def test_kron_order(self):
        h = assemble(HamiltonianSpec().add(PauliString("Z"), 2.0, self.b), self.space)
        np.testing.assert_allclose(h.matrix, 2.0 * np.kron(np.diag([1.0, -1.0]), self.b))

    def test_wrong_qubit_count(self):
        with self.assertRaises(DimensionError):
            assemble(HamiltonianSpec().add(PauliString("ZZ"), 1.0), self.space)

    def test_mod_b_removes_pure_bath(self):
        spec = HamiltonianSpec().add(PauliString("I"), 1.0, self.b).add(PauliString("X"), 0.5, self.b)
        reduced = mod_b_reduce(assemble(spec, self.space))
        expected = assemble(HamiltonianSpec().add(PauliString("X"), 0.5, self.b), self.space)
        np.testing.assert_allclose(reduced.matrix, expected.matrix, atol=1e-14)

    def test_mod_b_idempotent(self):
        rng = np.random.default_rng(3)
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        op = DenseOperator(a + a.conj().T, self.space, hermitian=True)
        once = mod_b_reduce(op)
        twice = mod_b_reduce(once)
        np.testing.assert_allclose(once.matrix, twice.matrix, atol=1e-13)

    def test_partial_trace_bath(self):
        rho = np.kron(np.diag([0.25, 0.75]), np.eye(2) / 2)
        op = DenseOperator(rho, self.space, hermitian=True)
        np.testing.assert_allclose(partial_trace_bath(op), np.diag([0.25, 0.75]))


class TestExponentials(unittest.TestCase):
    """Testet exp(-iHt) und das exakte Segmentintegral."""

    def test_pi_half_pulse(self):
        space = JointSpace(1, 1)
        x = assemble(HamiltonianSpec().add(PauliString("X"), 1.0), space)
        u = unitary_exponential(x, np.pi / 2)
        np.testing.assert_allclose(u.matrix, -1j * x.matrix, atol=1e-14)

    def test_segment_integral_closed_form(self):
        # ∫_0^τ e^{iZs} X e^{-iZs} ds = X sin(2τ)/2 - Y (1 - cos 2τ)/2
        space = JointSpace(1, 1)
        z = assemble(HamiltonianSpec().add(PauliString("Z"), 1.0), space)
        x = assemble(HamiltonianSpec().add(PauliString("X"), 1.0), space)
        tau = 0.7
        got = segment_integral(z, x, tau)
        expected = (np.sin(2 * tau) / 2) * PauliString("X").to_matrix() \
            - ((1 - np.cos(2 * tau)) / 2) * PauliString("Y").to_matrix()
        np.testing.assert_allclose(got, expected, atol=1e-13)

    def test_segment_integral_commuting(self):
        space = JointSpace(1, 1)
        z = assemble(HamiltonianSpec().add(PauliString("Z"), 3.0), space)
        got = segment_integral(z, z, 0.4)
        np.testing.assert_allclose(got, 0.4 * z.matrix, atol=1e-13)


class TestNormsAndFidelity(unittest.TestCase):
    """Testet Normen, Phasenabstand und Uhlmann-Fidelity."""

    def test_norms(self):
        z = PauliString("ZZ").to_matrix()
        self.assertAlmostEqual(operator_norm(z, "spectral"), 1.0)
        self.assertAlmostEqual(operator_norm(z, "frobenius"), 2.0)

    def test_norms_unitarily_invariant(self):
        rng = np.random.default_rng(9)
        for _ in range(5):
            a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
            h = a + a.conj().T
            u = unitary_group.rvs(4, random_state=rng)
            for kind in ("spectral", "frobenius"):
                self.assertAlmostEqual(operator_norm(u.conj().T @ h @ u, kind), operator_norm(h, kind), places=12)

    def test_fidelity_with_ancilla(self):
        rng = np.random.default_rng(10)

        def random_state(d: int) -> np.ndarray:
            a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            rho = a @ a.conj().T
            return rho / np.trace(rho).real

        for _ in range(5):
            rho1, rho2, sigma = random_state(2), random_state(2), random_state(3)
            self.assertAlmostEqual(uhlmann_fidelity(np.kron(rho1, sigma), np.kron(rho2, sigma)),
                                   uhlmann_fidelity(rho1, rho2), delta=1e-10)

    def test_phase_distance_ignores_global_phase(self):
        u = PauliString("XY").to_matrix()
        self.assertLess(phase_distance(u, np.exp(0.3j) * u), 1e-12)

    def test_fidelity_pure_vs_mixed(self):
        # Nicht quadrierte Fidelity: √(1/2)
        f = uhlmann_fidelity(np.diag([1.0, 0.0]), np.eye(2) / 2)
        self.assertAlmostEqual(f, np.sqrt(0.5))

    def test_fidelity_mixed_states(self):
        f = uhlmann_fidelity(np.diag([0.5, 0.5]), np.diag([0.5, 0.5]))
        self.assertAlmostEqual(f, 1.0)

    def test_fidelity_rejects_bad_trace(self):
        with self.assertRaises(HermiticityError):
            uhlmann_fidelity(np.diag([1.0, 1.0]), np.eye(2) / 2)


class TestGates(unittest.TestCase):
    """Testet Gatterangaben und Zielunitäre."""

    def test_w_quarter_pi_is_sqrt_swap(self):
        sqrt_swap = np.array([
            [1, 0, 0, 0],
            [0, (1 + 1j) / 2, (1 - 1j) / 2, 0],
            [0, (1 - 1j) / 2, (1 + 1j) / 2, 0],
            [0, 0, 0, 1],
        ])
        target = GateSpec.parse("w:1,2:pi/4").target(2)
        self.assertLess(phase_distance(target, sqrt_swap), 1e-10)

    def test_negative_angle(self):
        gate = GateSpec.parse("x:1:-pi/2")
        self.assertAlmostEqual(gate.angle, -np.pi / 2)

    def test_bad_gate(self):
        with self.assertRaises(ConfigError):
            GateSpec.parse("q:1:pi")
        with self.assertRaises(ConfigError):
            GateSpec.parse("w:1,1:pi/4")

    def test_register_check(self):
        with self.assertRaises(ConfigError):
            GateSpec.parse("x:3:pi/4").target(2)


class TestSettings(unittest.TestCase):
    """Testet die Validierung der Einstellungen."""

    def test_unknown_key(self):
        with self.assertRaises(ConfigError):
            Settings.from_dict({"foo": 1})

    def test_unsupported_precision(self):
        with self.assertRaises(ConfigError):
            Settings(precision="quad")

    def test_roundtrip(self):
        s = Settings(norm="frobenius", dimension_cap=256)
        self.assertEqual(Settings.from_dict(s.to_dict()).to_dict(), s.to_dict())


if __name__ == "__main__":
    unittest.main()
