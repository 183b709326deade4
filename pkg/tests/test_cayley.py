import unittest
import numpy as np

import sys
import os
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from analysis.subspaces import random_bath_operator
from model.errors import GroupError
from model.group import DecouplingGroup, dephasing_group, linear_group, trivial_group
from model.hamiltonian import HamiltonianSpec
from model.pauli import PauliString
from model.space import JointSpace
from solver.operators import assemble, mod_b_reduce, operator_norm
from synthesis.cayley import build_cayley_graph, find_eulerian_cycle, is_valid_cycle, random_eulerian_cycle
from synthesis.sequences import bang_bang_sequence, projection_superop, synthesize_dcg, synthesize_edd
from view.summary import overhead_table


class TestGroups(unittest.TestCase):
    """Testet die vordefinierten Entkopplungsgruppen und ihre Darstellungen."""

    def test_linear_group(self):
        group, rep = linear_group(2)
        self.assertEqual(group.order, 4)
        self.assertEqual(group.generator_names, ["X", "Y"])
        self.assertTrue(rep.is_faithful())
        self.assertEqual(rep["11"].labels, "ZZ")

    def test_dephasing_group(self):
        group, rep = dephasing_group(3)
        self.assertEqual(group.order, 2)
        self.assertEqual(rep["1"].labels, "XXX")

    def test_generators_must_generate(self):
        group = DecouplingGroup.z2_power(2, [(1, 0)], ["X"], name="halb")
        with self.assertRaises(GroupError):
            build_cayley_graph(group)


class TestCayleyGraph(unittest.TestCase):
    """Testet Cayley-Graphen und Euler-Kreise."""

    def test_edge_counts(self):
        group, _ = linear_group(1)
        g = build_cayley_graph(group)
        self.assertEqual(g.n_vertices, 4)
        self.assertEqual(g.n_edges, 8)
        with_loops = build_cayley_graph(group, self_loops=True)
        self.assertEqual(with_loops.n_edges, 12)
        self.assertTrue(with_loops.has_self_loops())

    def test_canonical_cycle_valid(self):
        for factory in (linear_group, dephasing_group):
            group, _ = factory(1)
            for loops in (False, True):
                g = build_cayley_graph(group, self_loops=loops)
                self.assertTrue(is_valid_cycle(g, find_eulerian_cycle(g)))

    def test_random_cycle_valid(self):
        group, _ = linear_group(1)
        g = build_cayley_graph(group, self_loops=True)
        for seed in range(5):
            cycle = random_eulerian_cycle(g, seed)
            self.assertTrue(is_valid_cycle(g, cycle))
            # Schleife am neutralen Element steht am Ende
            self.assertEqual(cycle[-1][2]["kind"], "loop")
            self.assertEqual(cycle[-1][0], group.identity)


class TestSequences(unittest.TestCase):
    """Testet die expliziten EDD- und DCG-Sequenzen und die Dauertabelle."""

    def test_edd_linear(self):
        group, rep = linear_group(1)
        seq = synthesize_edd(group, rep)
        self.assertEqual(seq.labels(), ["X", "Y", "X", "Y", "Y", "X", "Y", "X"])
        self.assertEqual(seq.total_multiplier, 8)

    def test_edd_dephasing(self):
        group, rep = dephasing_group(1)
        seq = synthesize_edd(group, rep)
        self.assertEqual(seq.labels(), ["X", "X"])
        self.assertEqual(seq.total_multiplier, 2)

    def test_dcg_linear(self):
        group, rep = linear_group(1)
        seq = synthesize_dcg(group, rep)
        self.assertEqual(len(seq), 12)
        self.assertEqual(seq.total_multiplier, 16)
        self.assertEqual(seq.labels(), ["X", "I_Q", "Y", "I_Q", "X", "I_Q", "Y", "Y", "X", "Y", "X", "Q_half"])
        self.assertEqual(seq.labels().count("I_Q"), 3)

    def test_dcg_dephasing_render(self):
        group, rep = dephasing_group(1)
        seq = synthesize_dcg(group, rep)
        self.assertEqual(seq.render(), "Q_half X I_Q X")
        self.assertEqual(seq.total_multiplier, 6)

    def test_trivial_group(self):
        group, rep = trivial_group(2)
        self.assertEqual(len(synthesize_edd(group, rep)), 0)
        self.assertEqual(synthesize_dcg(group, rep).labels(), ["Q_half"])

    def test_dcg_random_cycle_same_length(self):
        group, rep = linear_group(1)
        cycle = random_eulerian_cycle(build_cayley_graph(group, self_loops=True), seed=11)
        seq = synthesize_dcg(group, rep, cycle=cycle)
        self.assertEqual(seq.total_multiplier, 16)
        self.assertEqual(seq.labels()[-1], "Q_half")

    def test_overhead_table(self):
        self.assertEqual(overhead_table(1), {"EDD^lin": 8, "DCG^lin": 16, "EDD^Z": 2, "DCG^Z": 6})

    def test_sequence_text_format(self):
        group, rep = dephasing_group(1)
        text = synthesize_dcg(group, rep).to_text()
        self.assertEqual(text.splitlines(), ["generator:X:1", "I_Q:I_Q:2", "generator:X:1", "Q_half:Q_half:2"])


class TestProjection(unittest.TestCase):
    """Testet die Gruppenmittelung und die idealen BB-Pulse."""

    def setUp(self):
        self.rng = np.random.default_rng(5)
        self.space = JointSpace(2, 2)

    def _op(self, labels):
        b = random_bath_operator(2, self.rng)
        return assemble(HamiltonianSpec().add(PauliString(labels), 1.0, b), self.space)

    def test_linear_group_kills_single_qubit_terms(self):
        _, rep = linear_group(2)
        for labels in ("XI", "IY", "ZI", "IZ"):
            proj = projection_superop(rep, self._op(labels))
            self.assertLess(operator_norm(mod_b_reduce(proj)), 1e-12, labels)

    def test_linear_group_kills_all_single_qubit_generators(self):
        _, rep = linear_group(2)
        for q in (1, 2):
            for a in "XYZ":
                for _ in range(2):
                    labels = PauliString.on(2, {q: a}).labels
                    proj = projection_superop(rep, self._op(labels))
                    self.assertLess(operator_norm(mod_b_reduce(proj)), 1e-12, labels)

    def test_linear_group_bilinear_terms(self):
        _, rep = linear_group(2)
        for a in "XYZ":
            for b in "XYZ":
                proj = projection_superop(rep, self._op(a + b))
                if a == b:
                    # homogene Terme sind invariant: Π(E) = 4E
                    self.assertGreater(operator_norm(proj), 0.1, a + b)
                else:
                    self.assertLess(operator_norm(mod_b_reduce(proj)), 1e-12, a + b)

    def test_dephasing_group_keeps_x(self):
        _, rep = dephasing_group(2)
        self.assertLess(operator_norm(mod_b_reduce(projection_superop(rep, self._op("ZI")))), 1e-12)
        self.assertGreater(operator_norm(projection_superop(rep, self._op("XI"))), 0.1)

    def test_bang_bang_product_identity(self):
        _, rep = linear_group(1)
        u = np.eye(2, dtype=complex)
        for q in bang_bang_sequence(rep):
            u = q @ u
        overlap = abs(np.trace(u)) / 2
        self.assertAlmostEqual(overlap, 1.0)


if __name__ == "__main__":
    unittest.main()
