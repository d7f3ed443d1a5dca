import io
import json
import os
import tempfile
import unittest
import numpy as np
from unittest import mock
from nested_dynamics.common import (ConfigError, InvalidProfile, NotAPartition,
                                    BoundaryState, SupportMismatch, NotGESS,
                                    PositivityLoss)
from nested_dynamics.dynamics import Trajectory
from nested_dynamics.cli import main
from nested_dynamics.cli.config import ExperimentConfig, load_config, list_presets
from nested_dynamics.cli.commands import (cmd_convert, cmd_classify, build_suite,
                                          EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME)

def commuting_block(**dynamics):
    return {
        "game": {"preset": "commuting"},
        "tree": {"levels": [[["bus1", "bus2"], ["car"]]]},
        "dynamics": dict({"kind": "nrd", "rates": [0.25, 0.75]}, **dynamics)
    }

class CliTestCase(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def writeConfig(self, data, name="config.json"):
        path = os.path.join(self.dir, name)
        with open(path, "w") as f:
            json.dump(data, f)
        return path

    def readJson(self, name):
        with open(os.path.join(self.dir, name)) as f:
            return json.load(f)

class ConvertTest(CliTestCase):
    def testRates(self):
        stream = io.StringIO()
        self.assertEqual(cmd_convert(rates="0.25,0.75", stream=stream), EXIT_OK)
        profiles = json.loads(stream.getvalue())
        np.testing.assert_allclose(profiles["temps"], [4.0, 1.0])
        np.testing.assert_allclose(profiles["nkl_weights"], [3.0, 1.0])
        np.testing.assert_allclose(profiles["entropy_weights"], [0.0, 3.0, 1.0])
        self.assertAlmostEqual(profiles["time_scale"], 1.0)
        self.assertLessEqual(profiles["round_trip_error"], 1e-12)

    def testTemps(self):
        stream = io.StringIO()
        self.assertEqual(cmd_convert(temps="2,1", stream=stream), EXIT_OK)
        np.testing.assert_allclose(json.loads(stream.getvalue())["rates"], [0.5, 0.5])

    def testInvalidProfiles(self):
        self.assertEqual(main(["convert", "--rates", "0,1"]), EXIT_CONFIG)
        self.assertEqual(main(["convert", "--temps", "1,2"]), EXIT_CONFIG)
        self.assertEqual(main(["convert", "--rates", "0.5,x"]), EXIT_CONFIG)

    def testMissingCommand(self):
        with self.assertRaises(SystemExit):
            main([])

class SimulateTest(CliTestCase):
    def testPreset(self):
        code = main(["simulate", "--config", "commuting_nrd", "--out", self.dir])
        self.assertEqual(code, EXIT_OK)

        with open(os.path.join(self.dir, "commuting_nrd.csv")) as f:
            self.assertTrue(f.readline().startswith("t,x_0,x_1,x_2,mean_payoff"))

        manifest = self.readJson("commuting_nrd_manifest.json")
        self.assertEqual(manifest["status"], "ok")
        self.assertEqual(manifest["config"]["dynamics"]["temps"], [4.0, 1.0])
        self.assertEqual(manifest["config"]["tree"]["depth"], 2)
        self.assertGreater(manifest["terminal"][2], 0.99)

    def testDeterministic(self):
        data = commuting_block()
        data["integrator"] = {"step": 0.01, "t_end": 5.0, "sample_stride": 5}
        data["init"] = {"preset": "random", "seed": 11}
        path = self.writeConfig(data)
        outputs = []

        for _ in range(2):
            self.assertEqual(main(["simulate", "--config", path, "--out", self.dir]), EXIT_OK)

            with open(os.path.join(self.dir, "trajectory.csv"), "rb") as f:
                csv = f.read()

            manifest = self.readJson("manifest.json")
            del manifest["wall_clock"]
            outputs.append((csv, manifest))

        self.assertEqual(outputs[0][0], outputs[1][0])
        self.assertEqual(outputs[0][1], outputs[1][1])

        self.assertEqual(main(["simulate", "--config", path, "--out", self.dir, "--seed", "12"]), EXIT_OK)
        self.assertNotEqual(self.readJson("manifest.json")["terminal"], outputs[0][1]["terminal"])

    def testZeroGameIsConstant(self):
        path = self.writeConfig({
            "game": {"kind": "zero", "n": 3},
            "dynamics": {"kind": "nrd", "rates": [1.0]},
            "integrator": {"step": 0.1, "t_end": 1.0, "sample_stride": 1},
            "init": {"x0": [0.2, 0.3, 0.5]}
        })
        self.assertEqual(main(["simulate", "--config", path, "--out", self.dir]), EXIT_OK)

        trajectory = Trajectory.from_csv(os.path.join(self.dir, "trajectory.csv"))
        self.assertEqual(len(trajectory), 11)
        np.testing.assert_allclose(trajectory.states, np.tile([0.2, 0.3, 0.5], (11, 1)), atol=1e-15)

    def testBlowupIsReported(self):
        path = self.writeConfig({
            "game": {"kind": "matrix", "A": [[1000.0, 0.0], [0.0, 0.0]]},
            "dynamics": {"kind": "rd"},
            "integrator": {"step": 1.0, "t_end": 5.0, "sample_stride": 1},
            "init": {"x0": [0.5, 0.5]}
        })
        self.assertEqual(main(["simulate", "--config", path, "--out", self.dir]), EXIT_RUNTIME)

        manifest = self.readJson("manifest.json")
        self.assertEqual(manifest["status"], "error")
        self.assertEqual(manifest["error"]["step"], 1)
        self.assertFalse(os.path.exists(os.path.join(self.dir, "trajectory.csv")))

    def testNestedDynamicsNeedInteriorStart(self):
        data = commuting_block()
        data["integrator"] = {"step": 0.1, "t_end": 1.0, "sample_stride": 1}
        data["init"] = {"x0": [0.0, 0.5, 0.5]}
        self.assertEqual(main(["simulate", "--config", self.writeConfig(data), "--out", self.dir]),
                         EXIT_CONFIG)

        data["dynamics"] = {"kind": "rd"}
        self.assertEqual(main(["simulate", "--config", self.writeConfig(data), "--out", self.dir]),
                         EXIT_OK)
        trajectory = Trajectory.from_csv(os.path.join(self.dir, "trajectory.csv"))
        self.assertTrue(np.all(trajectory.states[:, 0] == 0.0))

    def testShowTimes(self):
        data = commuting_block()
        data["integrator"] = {"step": 0.1, "t_end": 0.5, "sample_stride": 1}
        path = self.writeConfig(data)

        with self.assertLogs("nested_dynamics.dynamics.env", level="INFO") as cm:
            code = main(["simulate", "--config", path, "--out", self.dir, "--show-times"])

        self.assertEqual(code, EXIT_OK)
        self.assertEqual(sum("Advanced to" in line for line in cm.output), 5)

    def testScoreDynamics(self):
        self.assertEqual(main(["simulate", "--config", "red_bus_new", "--out", self.dir]), EXIT_OK)
        terminal = self.readJson("red_bus_new_manifest.json")["terminal"]
        self.assertAlmostEqual(terminal[0] / (terminal[1] + terminal[2]),
                               np.exp(0.5 - 0.05 * np.log(2)), places=9)

class VerifyTest(CliTestCase):
    def testCommutingSuitePasses(self):
        code = main(["verify", "--config", "commuting_nrd", "--out", self.dir, "--jobs", "2"])
        report = self.readJson("commuting_nrd_report.json")
        failed = [c for c in report["checks"] if c["status"] != "pass"]
        self.assertEqual(failed, [])
        self.assertEqual(code, EXIT_OK)

        names = [c["name"] for c in report["checks"]]
        self.assertIn("extinction_bound_bus1", names)
        self.assertIn("nrd_equals_new", names)
        self.assertNotIn("potential_ascent", names)

    def testCorruptedRates(self):
        path = self.writeConfig(commuting_block(rates=[0.5, 0.6]))
        self.assertEqual(main(["verify", "--config", path, "--out", self.dir]), EXIT_CONFIG)

    def suiteNames(self, preset):
        data = dict(load_config(preset).raw)
        data["integrator"] = {"step": 0.01, "t_end": 1.0, "sample_stride": 10}
        return [check.name for check in build_suite(ExperimentConfig(data)).checks]

    def testSuiteFollowsGame(self):
        names = self.suiteNames("three_tier")
        self.assertIn("potential_ascent", names)
        self.assertNotIn("gess_attraction", names)

        names = self.suiteNames("good_rps_nrd")
        self.assertIn("gess_attraction", names)
        self.assertNotIn("potential_ascent", names)

class ClassifyTest(CliTestCase):
    def classify(self, **kwargs):
        stream = io.StringIO()
        code = cmd_classify(load_config("commuting_nrd"), stream=stream, **kwargs)
        self.assertEqual(code, EXIT_OK)
        return json.loads(stream.getvalue())

    def testCarIsStrict(self):
        output = self.classify(point="car")
        point = output["points"][0]
        self.assertTrue(point["is_nash"])
        self.assertTrue(point["is_strict"])
        self.assertEqual(point["support"], ["car"])
        self.assertEqual(output["dominated_pairs"],
                         [{"action": "bus1", "dominator": "car", "margin": 1.0}])

    def testVertices(self):
        points = self.classify()["points"]
        self.assertEqual([p["is_nash"] for p in points], [False, True, True])
        self.assertAlmostEqual(points[0]["max_violation"], 4.0)

    def testInteriorPoint(self):
        point = self.classify(point="0,0.5,0.5")["points"][0]
        self.assertTrue(point["is_restricted_eq"])
        self.assertTrue(point["is_nash"])
        self.assertFalse(point["is_strict"])

    def testMalformedPoints(self):
        for point in ("0.5,abc", "0.5,0.6,0.1", "0.5,0.5"):
            self.assertEqual(main(["classify", "--config", "commuting_nrd", "--point", point]),
                             EXIT_CONFIG)

class ExitCodeTest(unittest.TestCase):
    def exitCode(self, error):
        with mock.patch("nested_dynamics.cli.run", side_effect=error):
            return main(["convert", "--rates", "1"])

    def testUsageErrors(self):
        for error in (ConfigError("bad block"), InvalidProfile("bad rates"),
                      NotAPartition("bad tree"), BoundaryState("bad point"),
                      ValueError("bad number")):
            self.assertEqual(self.exitCode(error), EXIT_CONFIG, error)

    def testDomainErrorsAreRuntimeFailures(self):
        for error in (SupportMismatch("outside support"), NotGESS("not stable"),
                      PositivityLoss("lost positivity", step=3, t=0.3)):
            self.assertEqual(self.exitCode(error), EXIT_RUNTIME, error)

class ConfigTest(unittest.TestCase):
    def testBothRatesAndTemps(self):
        with self.assertRaises(ConfigError):
            ExperimentConfig(commuting_block(temps=[4.0, 1.0]))

    def testWrongDepth(self):
        with self.assertRaises(InvalidProfile):
            ExperimentConfig(commuting_block(rates=[0.2, 0.3, 0.5]))

    def testRandomInitNeedsSeed(self):
        data = commuting_block()
        data["init"] = {"preset": "random"}

        with self.assertRaises(ConfigError):
            ExperimentConfig(data)

    def testUnknownPresets(self):
        with self.assertRaises(ConfigError):
            load_config("no_such_preset")

        with self.assertRaises(ConfigError):
            ExperimentConfig({"game": {"preset": "chess"}, "dynamics": {"kind": "rd"}})

    def testBadBlocks(self):
        with self.assertRaises(ConfigError):
            ExperimentConfig({"dynamics": {"kind": "rd"}})

        with self.assertRaises(ConfigError):
            ExperimentConfig({"game": {"kind": "matrix", "A": [[1, 2]]}, "dynamics": {"kind": "rd"}})

        with self.assertRaises(ConfigError):
            ExperimentConfig(dict(commuting_block(), tree={"levels": [[["bus1"], ["car"]]]}))

        with self.assertRaises(ConfigError):
            ExperimentConfig(commuting_block(kind="best_response"))

    def testNestedKlNeedsReference(self):
        data = commuting_block()
        data["outputs"] = {"diagnostics": ["nested_kl"]}

        with self.assertRaises(ConfigError):
            ExperimentConfig(data)

    def testTempsBecomeRates(self):
        config = ExperimentConfig({"game": {"preset": "commuting"},
                                   "tree": {"levels": [[["bus1", "bus2"], ["car"]]]},
                                   "dynamics": {"kind": "nrd", "temps": [8.0, 2.0]}})
        np.testing.assert_allclose(config.rates.rates, [0.25, 0.75])

    def testBundledPresets(self):
        self.assertEqual(list_presets(), ["commuting_nrd", "commuting_rd", "good_rps_nrd",
                                          "red_bus_new", "three_tier"])

        for name in list_presets():
            config = load_config(name)
            self.assertEqual(config.name, name)
            self.assertIsNotNone(config.resolved())

if __name__ == '__main__':
    unittest.main()
