import unittest
import numpy as np

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from analysis.error_actions import closed_system_deviation, exact_error_action, first_order_magnus, split_layer_errors
from analysis.subspaces import ErrorSubspace, random_bath_operator
from analysis.validators import ErrorValidator
from model.chain import ChainModel
from model.errors import GroupError
from model.space import JointSpace
from solver.operators import assemble, operator_norm
from synthesis.drift import (drift_error_terms, gnn_group, odd_even_sets, single_qubit_drift_dcg, tau_for_angle,
                             two_qubit_drift_dcg)


def _bath_ops(qubits, rng) -> dict:
    return {(q, a): random_bath_operator(2, rng) for q in qubits for a in "XYZ"}


class TestNearestNeighborGroup(unittest.TestCase):
    """Testet 𝒢_NN und die gerade/ungerade Aufteilung."""

    def test_sets(self):
        self.assertEqual(odd_even_sets(5), ([1, 3, 5], [2, 4]))
        self.assertEqual(odd_even_sets(5, 2), ([1, 5], [4]))

    def test_group(self):
        group, rep = gnn_group(4, 1)
        self.assertEqual(group.order, 16)
        self.assertEqual(group.generator_names, ["Xo", "Yo", "Xe", "Ye"])
        self.assertTrue(rep.is_faithful())

    def test_invalid_chains(self):
        with self.assertRaises(GroupError):
            gnn_group(2)
        with self.assertRaises(GroupError):
            gnn_group(3, 1)
        with self.assertRaises(GroupError):
            gnn_group(4, 4)


class TestTwoQubitBlock(unittest.TestCase):
    """Testet den korrigierten Verschränkungsblock der Dauer 64τ."""

    def setUp(self):
        self.chain = ChainModel(4, 1.0, 1)
        self.tau = 1e-3
        self.drift = two_qubit_drift_dcg(self.chain, 1, self.tau)

    def test_layout(self):
        self.assertEqual(len(self.drift.layer1), 64)
        self.assertEqual(len(self.drift.layer2), 8)
        self.assertEqual(len(self.drift.merged()), 64)
        self.assertAlmostEqual(self.drift.total_duration, 64 * self.tau)

    def test_target(self):
        self.assertLess(closed_system_deviation(self.drift.merged(), self.drift.target), 1e-9)

    def test_zero_coupling_is_identity(self):
        drift = two_qubit_drift_dcg(ChainModel(4, 0.0, 2), 2, self.tau)
        self.assertLess(closed_system_deviation(drift.merged(), np.eye(16)), 1e-9)

    def test_needs_four_qubits(self):
        with self.assertRaises(GroupError):
            two_qubit_drift_dcg(ChainModel(3, 1.0, 1), 1, self.tau)

    def test_divided_control(self):
        self.assertTrue(ErrorValidator.check_divided_control(self.drift))

    def test_drift_tolerance_scales_with_tau(self):
        full = ErrorValidator.drift_tolerance(self.drift.merged(), 1e-9)
        half = ErrorValidator.drift_tolerance(two_qubit_drift_dcg(self.chain, 1, self.tau / 2).merged(), 1e-9)
        self.assertGreater(full, 1e-9)
        self.assertAlmostEqual(full / half, 2.0)
        # Schicht 1 allein ist ein EDD ohne Driftsegmente
        self.assertEqual(ErrorValidator.drift_tolerance(self.drift.layer1, 1e-9), 1e-9)

    def test_gating_commutes_with_bond(self):
        bond = assemble(self.chain.bond_spec(1, 2), JointSpace(4, 1))
        self.assertLess(ErrorValidator.check_gating_symmetry(self.drift.merged(), bond), 1e-11)

    def _layer_errors(self, seed: int = 0):
        rng = np.random.default_rng(seed)
        space = JointSpace(4, 2)
        e1, e2, boundary = drift_error_terms(self.chain, 1, _bath_ops(range(1, 5), rng))
        return assemble(e1, space), assemble(e2, space), boundary

    def test_boundary_terms(self):
        _, _, boundary = self._layer_errors()
        # nur die Bindung (2, 3) überbrückt Paar und Schicht 1
        self.assertEqual(len(boundary), 3)
        self.assertEqual({tuple(t.pauli.support) for t in boundary.terms}, {(2, 3)})

    def test_layer_commutation(self):
        h_e1, h_e2, _ = self._layer_errors()
        worst = ErrorValidator.check_layer_commutation(self.drift, h_e1, h_e2)
        for key, value in worst.items():
            self.assertLess(value, 1e-10, key)

    def test_split_additivity(self):
        h_e1, h_e2, _ = self._layer_errors()
        phi_1, phi_2 = split_layer_errors(self.drift, h_e1, h_e2)
        joint = first_order_magnus(self.drift.merged(), h_e1 + h_e2)
        np.testing.assert_allclose(joint.phi.matrix, phi_1.phi.matrix + phi_2.phi.matrix, atol=1e-12)

    def test_residual_scales_quadratically(self):
        h_e1, h_e2, _ = self._layer_errors(3)
        h_e = h_e1 + h_e2
        residuals = []
        for tau in (1e-3, 5e-4):
            drift = two_qubit_drift_dcg(self.chain, 1, tau)
            residuals.append(operator_norm(exact_error_action(drift.merged(), h_e).mod_b()))
        exponent = np.log2(residuals[0] / residuals[1])
        self.assertGreater(exponent, 1.7)
        self.assertLess(exponent, 2.3)


class TestSingleQubitBlock(unittest.TestCase):
    """Testet den Einzelqubit-Block der Dauer 96τ."""

    def test_layout_and_target(self):
        chain = ChainModel(3, 1.0, 2)
        block = single_qubit_drift_dcg(chain, 2, np.pi / 8, "x", 1e-3)
        merged = block.merged()
        self.assertEqual(len(merged), 96)
        self.assertAlmostEqual(merged.total_duration, 96e-3)
        self.assertLess(closed_system_deviation(merged, block.target), 1e-9)

    def test_cancels_nearest_neighbor_errors(self):
        chain = ChainModel(3, 1.0, 1)
        block = single_qubit_drift_dcg(chain, 1, np.pi / 6, "y", 1e-3)
        passed, worst = ErrorValidator.verify_first_order_cancellation(
            block.merged(), ErrorSubspace.nearest_neighbor(3), bath_dimension=2, samples=3)
        self.assertTrue(passed, worst)

    def test_zero_angle(self):
        block = single_qubit_drift_dcg(ChainModel(3, 1.0, 1), 1, 0.0, "x", 1e-3)
        self.assertLess(closed_system_deviation(block.merged(), np.eye(8)), 1e-9)

    def test_bad_axis(self):
        with self.assertRaises(GroupError):
            single_qubit_drift_dcg(ChainModel(3, 1.0, 1), 1, 0.1, "z", 1e-3)


class TestAngleHelper(unittest.TestCase):
    """Testet die Umrechnung Winkel -> τ."""

    def test_value(self):
        self.assertAlmostEqual(tau_for_angle(0.64, 1.0), 0.01)

    def test_warns_below_minimum(self):
        with self.assertLogs("synthesis.drift", level="WARNING"):
            tau = tau_for_angle(0.01, 1.0, tau_min=1e-3)
        self.assertLess(tau, 1e-3)


if __name__ == "__main__":
    unittest.main()
