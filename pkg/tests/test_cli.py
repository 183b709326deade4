import unittest

import sys
import os
import io
import json
import tempfile
from contextlib import redirect_stderr, redirect_stdout
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from model.gates import GateSpec
from persistence.io_handler import IOHandler
from synthesis.schedules import primitive_schedule_for
from view.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, main


def _run(argv: list[str]) -> tuple[int, str, str]:
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(argv)
    return code, out.getvalue(), err.getvalue()


def _segment_lines(path: str) -> int:
    with open(path, encoding="utf-8") as f:
        return sum(1 for line in f if line.strip() and not line.startswith("#"))


class TestSynth(unittest.TestCase):
    """Testet den Befehl synth."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def test_dcg_linear(self):
        code, out, _ = _run(["synth", "--model", "linear", "--gate", "x:1:pi/4", "--tau", "0.01",
                             "--output-dir", self.dir])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(_segment_lines(os.path.join(self.dir, "dcg_linear.txt")), 16)
        for ext in (".json", ".seq"):
            self.assertTrue(os.path.exists(os.path.join(self.dir, "dcg_linear" + ext)))
        self.assertIn("Dauer", out)

    def test_edd_dephasing(self):
        code, _, _ = _run(["synth", "--model", "dephasing", "--noop", "--output-dir", self.dir])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(_segment_lines(os.path.join(self.dir, "edd_dephasing.txt")), 2)

    def test_drift_pair(self):
        code, _, _ = _run(["synth", "--drift", "heisenberg", "--pair", "1", "--n", "4", "--tau", "0.001",
                           "--output-dir", self.dir])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(_segment_lines(os.path.join(self.dir, "drift2q_k1.txt")), 64)

    def test_gate_and_noop_conflict(self):
        code, _, err = _run(["synth", "--gate", "x:1:pi/4", "--noop", "--output-dir", self.dir])
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("Fehler", err)

    def test_bad_gate(self):
        code, _, _ = _run(["synth", "--gate", "q:1:pi", "--output-dir", self.dir])
        self.assertEqual(code, EXIT_USAGE)


class TestVerify(unittest.TestCase):
    """Testet den Befehl verify und seine Rückgabewerte."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def _verify(self, path: str) -> tuple[int, str]:
        code, out, _ = _run(["verify", path, "--samples", "3", "--bath-dimension", "2"])
        return code, out

    def test_dcg_passes(self):
        _run(["synth", "--gate", "x:1:pi/4", "--tau", "0.01", "--output-dir", self.dir])
        code, out = self._verify(os.path.join(self.dir, "dcg_linear.txt"))
        self.assertEqual(code, EXIT_OK)
        report = json.loads(out)
        self.assertTrue(report["pass"])
        self.assertTrue(report["suites"]["balance_pair"]["pass"])

    def test_primitive_fails(self):
        path = os.path.join(self.dir, "prim.txt")
        IOHandler.save_schedule(primitive_schedule_for(GateSpec.parse("x:1:pi/4"), 0.01, 1), path)
        code, out = self._verify(path)
        self.assertEqual(code, EXIT_FAILED)
        self.assertFalse(json.loads(out)["suites"]["cancellation"]["pass"])

    def test_malformed_file(self):
        path = os.path.join(self.dir, "bad.txt")
        with open(path, "w", encoding="utf-8") as f:
            f.write("# n_qubits: 1\nQ Q 1 0.5\n")
        code, _ = self._verify(path)
        self.assertEqual(code, EXIT_USAGE)

    def test_report_file(self):
        _run(["synth", "--model", "dephasing", "--gate", "x:1:pi/4", "--tau", "0.01", "--output-dir", self.dir])
        report_path = os.path.join(self.dir, "report.json")
        code, _, _ = _run(["verify", os.path.join(self.dir, "dcg_dephasing.txt"), "--subspace", "dephasing",
                           "--samples", "2", "--bath-dimension", "2", "--output", report_path])
        self.assertEqual(code, EXIT_OK)
        with open(report_path, encoding="utf-8") as f:
            self.assertEqual(json.load(f)["subspace"], "dephasing")

    def test_drift_block_tolerance(self):
        _run(["synth", "--drift", "heisenberg", "--pair", "1", "--n", "4", "--tau", "0.001",
              "--output-dir", self.dir])
        _, out, err = _run(["verify", os.path.join(self.dir, "drift2q_k1.txt"), "--subspace", "nearest_neighbor",
                            "--samples", "2", "--bath-dimension", "2"])
        cancellation = json.loads(out)["suites"]["cancellation"]
        self.assertTrue(cancellation["drift"])
        self.assertGreater(cancellation["tolerance"], 1e-9)
        self.assertLess(cancellation["worst_residual"], cancellation["tolerance"])
        self.assertTrue(cancellation["pass"])
        self.assertIn("Driftschedule", err)


class TestSweepCommand(unittest.TestCase):
    """Testet simulate und sweep über Konfigurationsdateien."""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name
        self.out = os.path.join(self.dir, "out")

    def tearDown(self):
        self.tmp.cleanup()

    def _config(self, tau) -> str:
        path = os.path.join(self.dir, "cfg.json")
        IOHandler.save_json({
            "model": {"n": 1, "n_B": 1, "Gamma": 0.0, "A": 1.0},
            "gate": "y:1:pi/4",
            "sweep": {"tau": tau},
            "seeds": [1],
            "output_dir": self.out,
        }, path)
        return path

    def _read(self, name: str) -> bytes:
        with open(os.path.join(self.out, name), "rb") as f:
            return f.read()

    def test_sweep_outputs_reproducible(self):
        cfg = self._config([1e-3, 2e-3, 4e-3])
        code, _, _ = _run(["sweep", cfg])
        self.assertEqual(code, EXIT_OK)
        first = {name: self._read(name) for name in ("results.csv", "summary.json", "config_snapshot.json")}
        self.assertEqual(len(first["results.csv"].decode().splitlines()), 4)
        _run(["sweep", cfg])
        for name, content in first.items():
            self.assertEqual(self._read(name), content, name)

    def test_seed_override(self):
        code, _, _ = _run(["sweep", self._config([1e-3, 2e-3]), "--seed", "7"])
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(self._read("config_snapshot.json"))["seeds"], [7])

    def test_empty_grid(self):
        code, _, err = _run(["sweep", self._config([])])
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("leer", err)

    def test_simulate(self):
        code, out, _ = _run(["simulate", self._config([1e-3, 2e-3])])
        self.assertEqual(code, EXIT_OK)
        result = json.loads(out)
        self.assertEqual(result["tau"], 1e-3)
        self.assertTrue(os.path.exists(os.path.join(self.out, "simulate.json")))


if __name__ == "__main__":
    unittest.main()
