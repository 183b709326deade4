import unittest
import numpy as np

import sys
import os
import json
import tempfile
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from model.chain import ChainModel
from model.errors import ConfigError, ScheduleParseError
from model.gates import GateSpec
from model.group import dephasing_group
from model.spin_bath import SimulationResult
from persistence.io_handler import IOHandler
from solver.propagation import closed_system_unitary
from synthesis.drift import two_qubit_drift_dcg
from synthesis.schedules import dcg_schedule_for, edd_schedule_for
from synthesis.sequences import synthesize_dcg


class TestScheduleFiles(unittest.TestCase):
    """Testet Text- und JSON-Dateien für Schedules."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name
        self.sched = dcg_schedule_for(GateSpec.parse("w:1,2:pi/4"), 0.01, 2)

    def tearDown(self):
        self.tmp.cleanup()

    def _write(self, name: str, text: str) -> str:
        path = os.path.join(self.dir, name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        return path

    def test_text_roundtrip(self):
        path = os.path.join(self.dir, "dcg.txt")
        IOHandler.save_schedule(self.sched, path)
        loaded = IOHandler.load_schedule(path)
        self.assertEqual(loaded.n_qubits, 2)
        self.assertEqual(loaded.roles(), self.sched.roles())
        self.assertEqual([s.amplitude for s in loaded], [s.amplitude for s in self.sched])
        np.testing.assert_allclose(closed_system_unitary(loaded), closed_system_unitary(self.sched), atol=1e-14)

    def test_free_segments_in_text(self):
        path = os.path.join(self.dir, "edd.txt")
        IOHandler.save_schedule(edd_schedule_for("dephasing", 0.1, 1), path)
        with open(path, encoding="utf-8") as f:
            body = [line for line in f if not line.startswith("#")]
        self.assertEqual(len(body), 2)
        self.assertEqual(len(IOHandler.load_schedule(path)), 2)

    def test_json_keeps_target(self):
        path = os.path.join(self.dir, "dcg.json")
        IOHandler.save_schedule(self.sched, path)
        loaded = IOHandler.load_schedule(path)
        np.testing.assert_allclose(loaded.target, self.sched.target, atol=1e-15)

    def test_drift_json_loads_merged(self):
        drift = two_qubit_drift_dcg(ChainModel(4, 1.0, 1), 1, 1e-3)
        path = os.path.join(self.dir, "drift.json")
        IOHandler.save_schedule(drift, path)
        loaded = IOHandler.load_schedule(path)
        self.assertEqual(len(loaded), 64)
        self.assertEqual(set(s.role for s in loaded), {"drift"})

    def test_malformed_text(self):
        cases = {
            "columns.txt": "# n_qubits: 1\nQ Q 1 0.5 0.1 +1*X\n",
            "role.txt": "# n_qubits: 1\npulse Q 1 0.5 0.1 +1*X 0\n",
            "duration.txt": "# n_qubits: 1\nQ Q 1 0.5 -0.1 +1*X 0\n",
            "qubits.txt": "# n_qubits: 1\nQ Q 1 0.5 0.1 +1*XX 0\n",
            "empty.txt": "# n_qubits: 1\n",
        }
        for name, text in cases.items():
            with self.assertRaises(ScheduleParseError, msg=name):
                IOHandler.load_schedule(self._write(name, text))

    def test_malformed_json(self):
        path = os.path.join(self.dir, "old.json")
        IOHandler.save_json({"version": 0, **self.sched.to_dict()}, path)
        with self.assertRaises(ScheduleParseError):
            IOHandler.load_schedule(path)
        with self.assertRaises(ScheduleParseError):
            IOHandler.load_schedule(self._write("broken.json", "{"))

    def test_missing_file(self):
        with self.assertRaises(ScheduleParseError):
            IOHandler.load_schedule(os.path.join(self.dir, "nichts.txt"))

    def test_sequence_roundtrip(self):
        group, rep = dephasing_group(1)
        seq = synthesize_dcg(group, rep)
        path = os.path.join(self.dir, "dcg.seq")
        IOHandler.save_sequence(seq, path)
        self.assertEqual(IOHandler.load_sequence(path).labels(), seq.labels())
        with self.assertRaises(ScheduleParseError):
            IOHandler.load_sequence(self._write("bad.seq", "generator:X\n"))


class TestConfigAndResults(unittest.TestCase):
    """Testet Konfigurationsdateien, CSV und Abzüge."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def test_toml(self):
        path = os.path.join(self.dir, "cfg.toml")
        with open(path, "w", encoding="utf-8") as f:
            f.write('gate = "x:1:pi/4"\nseeds = [1]\n[model]\nn = 1\n[sweep]\ntau = [0.01, 0.02]\n')
        d = IOHandler.load_config(path)
        self.assertEqual(d["model"]["n"], 1)
        self.assertEqual(d["sweep"]["tau"], [0.01, 0.02])

    def test_bad_config(self):
        path = os.path.join(self.dir, "cfg.toml")
        with open(path, "w", encoding="utf-8") as f:
            f.write("[model\n")
        with self.assertRaises(ConfigError):
            IOHandler.load_config(path)
        with self.assertRaises(ConfigError):
            IOHandler.load_config(os.path.join(self.dir, "cfg.yaml"))

    def test_csv(self):
        rows = [SimulationResult(0.01, 1.0, 0.0, 0.0, 3, 0.99, 0.9999, 100.0)]
        path = os.path.join(self.dir, "results.csv")
        IOHandler.save_results_csv(rows, path)
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
        self.assertEqual(lines[0], "tau,A,Gamma,epsilon,seed,f_prim,f_dcg,r,saturated")
        self.assertTrue(lines[1].endswith(",3,0.98999999999999999,0.99990000000000001,100,false"))
        self.assertEqual(IOHandler.load_results_csv(path)[0]["seed"], "3")

    def test_numpy_scalars(self):
        row = SimulationResult(np.float64(0.01), 1.0, 0.0, 0.0, np.int64(2), np.float64(0.99),
                               np.float64(1.0), np.float64(1e11), np.bool_(True), np.bool_(True))
        self.assertIs(row.saturated, True)
        self.assertEqual(row.to_row()[-1], "true")
        self.assertEqual(json.loads(json.dumps(row.to_dict()))["seed"], 2)

    def test_snapshot(self):
        path = IOHandler.save_config_snapshot({"b": 1, "a": [1, 2]}, self.dir)
        self.assertTrue(path.endswith("config_snapshot.json"))
        with open(path, encoding="utf-8") as f:
            text = f.read()
        self.assertLess(text.index('"a"'), text.index('"b"'))
        self.assertEqual(json.loads(text), {"a": [1, 2], "b": 1})


if __name__ == "__main__":
    unittest.main()
