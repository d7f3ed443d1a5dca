import unittest
import numpy as np
from nested_dynamics.common import NonFinitePayoff, UnsupportedKind, EmptyClassMass
from nested_dynamics.games import (MatrixGame, CustomGame, classify_point,
                                   dominated_pairs, sampled_domination,
                                   check_potential, check_monotone,
                                   class_mean_payoff, class_mean_payoffs,
                                   commuting_game, good_rps_game,
                                   standard_rps_game, zero_game,
                                   coordination_game)
from nested_dynamics.hierarchy import ClassId
from dummy_games import crowding_game, blowup_game, commuting_tree, random_matrix_game

class GameTestMixin:
    """Checks any game must pass: shapes, finiteness and consistency."""
    game_constructor = None

    def setUp(self):
        self.game = self.game_constructor()
        self.states = np.random.default_rng(7).dirichlet(np.ones(self.game.n), size=20)

    def testPayoffShape(self):
        for x in self.states:
            self.assertEqual(self.game.payoff(x).shape, (self.game.n,))

    def testMeanPayoff(self):
        x = self.states[0]
        self.assertAlmostEqual(self.game.mean_payoff(x), float(x @ self.game.payoff(x)))

    def testVerticesAreRestrictedEquilibria(self):
        for a in range(self.game.n):
            report = classify_point(self.game, np.eye(self.game.n)[a])
            self.assertTrue(report.is_restricted_eq)

    def testPotential(self):
        if not self.game.has_potential:
            with self.assertRaises(UnsupportedKind):
                self.game.potential(self.states[0])
        else:
            self.assertLessEqual(check_potential(self.game, samples=20,
                                                 rng=np.random.default_rng(0)), 1e-6)

class GameTestCommuting(GameTestMixin, unittest.TestCase):
    game_constructor = staticmethod(commuting_game)

class GameTestGoodRPS(GameTestMixin, unittest.TestCase):
    game_constructor = staticmethod(good_rps_game)

class GameTestCoordination(GameTestMixin, unittest.TestCase):
    game_constructor = staticmethod(lambda: coordination_game(5))

class GameTestCrowding(GameTestMixin, unittest.TestCase):
    game_constructor = staticmethod(crowding_game)

class GameTestSymmetricRandom(GameTestMixin, unittest.TestCase):
    game_constructor = staticmethod(lambda: random_matrix_game(4, seed=2, symmetric=True))

class CommutingEquilibriaTest(unittest.TestCase):
    def setUp(self):
        self.game = commuting_game()

    def testStrictEquilibria(self):
        for x in ([0, 1, 0], [0, 0, 1]):
            report = classify_point(self.game, x)
            self.assertTrue(report.is_nash)
            self.assertTrue(report.is_strict)
            self.assertLessEqual(report.max_violation, 1e-9)

    def testMixedEquilibrium(self):
        report = classify_point(self.game, [0, 0.5, 0.5])
        self.assertTrue(report.is_nash)
        self.assertFalse(report.is_strict)
        self.assertLessEqual(report.max_violation, 1e-9)

    def testBus1IsNotNash(self):
        report = classify_point(self.game, [1, 0, 0])
        self.assertTrue(report.is_restricted_eq)
        self.assertFalse(report.is_nash)
        self.assertAlmostEqual(report.max_violation, 4.0)

    def testDominatedPairs(self):
        pairs = dominated_pairs(self.game)
        self.assertEqual(len(pairs), 1)
        a, b, delta = pairs[0]
        self.assertEqual((self.game.labels[a], self.game.labels[b]), ("bus1", "car"))
        self.assertAlmostEqual(delta, 1.0, delta=1e-12)

    def testSampledDominationAgrees(self):
        pairs = sampled_domination(self.game, samples=200, rng=np.random.default_rng(0))
        self.assertEqual([(a, b) for a, b, _ in pairs], [(0, 2)])
        self.assertAlmostEqual(pairs[0][2], 1.0, delta=1e-12)

    def testReportLabels(self):
        report = classify_point(self.game, [0, 0, 1]).to_dict(self.game.labels)
        self.assertEqual(report["support"], ["car"])
        self.assertTrue(report["is_strict"])

class ClassMeanPayoffTest(unittest.TestCase):
    def testCommuting(self):
        game, tree = commuting_game(), commuting_tree()
        x = np.array([0.25, 0.25, 0.5])
        F = game.payoff(x)
        means, masses = class_mean_payoffs(game, tree, x, 1)
        np.testing.assert_allclose(masses, [0.5, 0.5])
        np.testing.assert_allclose(means, [(F[0] + F[1]) / 2, F[2]])
        self.assertAlmostEqual(class_mean_payoff(game, tree, x, ClassId(1, 0)), means[0])
        self.assertAlmostEqual(class_mean_payoff(game, tree, x, tree.root), game.mean_payoff(x))

    def testEmptyClass(self):
        game, tree = commuting_game(), commuting_tree()
        x = np.array([0.0, 0.0, 1.0])
        means, _ = class_mean_payoffs(game, tree, x, 1)
        self.assertTrue(np.isnan(means[0]))

        with self.assertRaises(EmptyClassMass):
            class_mean_payoff(game, tree, x, ClassId(1, 0))

class GameKindsTest(unittest.TestCase):
    def testNonFinitePayoff(self):
        with self.assertRaises(NonFinitePayoff):
            blowup_game(3).payoff([1 / 3, 1 / 3, 1 / 3])

    def testZeroGameUniform(self):
        report = classify_point(zero_game(4), np.full(4, 0.25))
        self.assertTrue(report.is_restricted_eq)
        self.assertTrue(report.is_nash)

    def testKinds(self):
        self.assertEqual(good_rps_game().kind, "matrix")
        self.assertEqual(commuting_game().kind, "affine")
        self.assertEqual(crowding_game().kind, "potential")
        self.assertEqual(blowup_game().kind, "custom")

    def testPotentialOnlyForSymmetric(self):
        self.assertTrue(coordination_game(3).has_potential)
        self.assertFalse(good_rps_game().has_potential)
        x = np.array([0.2, 0.3, 0.5])
        self.assertAlmostEqual(coordination_game(3).potential(x),
                               0.5 * (0.04 + 2 * 0.09 + 3 * 0.25))

    def testMonotonicity(self):
        _, worst = check_monotone(good_rps_game(), samples=200, rng=np.random.default_rng(0))
        self.assertLess(worst, 0.0)

        low, high = check_monotone(standard_rps_game(), samples=200, rng=np.random.default_rng(0))
        self.assertAlmostEqual(low, 0.0, places=12)
        self.assertAlmostEqual(high, 0.0, places=12)

    def testDominationNeedsAffineGame(self):
        with self.assertRaises(UnsupportedKind):
            dominated_pairs(crowding_game())

    def testMalformedMatrix(self):
        with self.assertRaises(ValueError):
            MatrixGame(np.ones((2, 3)))

    def testCustomPayoffShape(self):
        game = CustomGame(3, lambda x: np.ones(2))

        with self.assertRaises(ValueError):
            game.payoff([1 / 3, 1 / 3, 1 / 3])

if __name__ == '__main__':
    unittest.main()
