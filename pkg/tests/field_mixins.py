import numpy as np
from nested_dynamics.analysis import (check_tangency, check_protocol_consistency,
                                      check_class_aggregation, check_dkl_identity,
                                      check_paydiff_identity, potential_rate)
from nested_dynamics.dynamics import (make_field, nrd_field, rd_field, class_field,
                                      growth_rates)
from nested_dynamics.profiles import RateProfile
from nested_dynamics.common import vertex, BoundaryState
from nested_dynamics.games import class_mean_payoffs

class NestedFieldTestMixin:
    """
    Properties every nested replicator field has, whatever the game and
    the structure. Subclasses set game_constructor, tree_constructor and
    rates.
    """
    game_constructor = None
    tree_constructor = None
    rates = None
    num_samples = 50

    def setUp(self):
        self.game = self.game_constructor()
        self.tree = self.tree_constructor()
        self.rng = np.random.default_rng(1234)
        self.states = self.rng.dirichlet(np.ones(self.game.n), size=self.num_samples)

    def testTangency(self):
        field = make_field("nrd", self.game, self.tree, self.rates)
        self.assertLessEqual(check_tangency(field, self.states), 1e-12)

    def testProtocolConsistency(self):
        gap = check_protocol_consistency(self.game, self.tree, self.rates, self.states)
        self.assertLessEqual(gap, 1e-12)

    def testClassAggregation(self):
        gap = check_class_aggregation(self.game, self.tree, self.rates, self.states)
        self.assertLessEqual(gap, 1e-12)

    def testRootClassIsStationary(self):
        for x in self.states[:5]:
            velocity = class_field(self.game, self.tree, self.rates, x, 0)
            self.assertEqual(velocity.tolist(), [0.0])

    def testBoundaryStatesAreRejected(self):
        for a in range(self.game.n):
            with self.assertRaises(BoundaryState):
                nrd_field(self.game, self.tree, self.rates, vertex(self.game.n, a))

        face = self.states[0].copy()
        face[0] = 0.0
        face /= face.sum()

        with self.assertRaises(BoundaryState):
            growth_rates(self.game, self.tree, self.rates, face)

    def testPlainRatesGiveReplicator(self):
        plain = RateProfile.plain(self.tree.depth)

        for x in self.states[:10]:
            np.testing.assert_allclose(nrd_field(self.game, self.tree, plain, x),
                                       rd_field(self.game, x), atol=1e-14)

    def testGrowthRatesAverageToZero(self):
        # Σ_a x_a g_a = 0 is tangency written per capita
        for x in self.states[:10]:
            g = growth_rates(self.game, self.tree, self.rates, x)
            self.assertAlmostEqual(float(x @ g), 0.0, places=12)

    def testDklIdentity(self):
        for x, p in zip(self.states[:5], self.states[5:10]):
            residual = check_dkl_identity(self.game, self.tree, self.rates, x, p, h=1e-4)
            self.assertLessEqual(residual, 1e-6)

    def testPaydiffIdentity(self):
        x = self.states[0]
        residual = check_paydiff_identity(self.game, self.tree, self.rates, x, 0, 1, h=1e-4)
        self.assertLessEqual(residual, 1e-6)

    def testPotentialRate(self):
        if not self.game.has_potential:
            self.skipTest("The game has no potential.")

        for x in self.states[:10]:
            direct = self.game.payoff(x) @ nrd_field(self.game, self.tree, self.rates, x)
            self.assertAlmostEqual(direct, potential_rate(self.game, self.tree, self.rates, x),
                                   delta=1e-8)
            self.assertGreaterEqual(potential_rate(self.game, self.tree, self.rates, x), 0.0)

    def testSiblingGrowthFollowsPayoffs(self):
        finest = self.tree.depth - 1
        pairs = [(a, b) for a in range(self.game.n) for b in range(a + 1, self.game.n)
                 if self.tree.degree(a, b) == finest]

        if not len(pairs):
            self.skipTest("No two actions share a class at the finest level.")

        for x in self.states[:20]:
            F = self.game.payoff(x)
            g = growth_rates(self.game, self.tree, self.rates, x, F=F)

            for a, b in pairs:
                # siblings see the same class means at every level
                self.assertAlmostEqual(g[a] - g[b], F[a] - F[b], delta=1e-12)

                if abs(F[a] - F[b]) > 1e-9:
                    self.assertEqual(np.sign(g[a] - g[b]), np.sign(F[a] - F[b]))

    def testClassMeansAverageOverChildren(self):
        for x in self.states[:10]:
            F = self.game.payoff(x)

            for level in range(1, self.tree.depth + 1):
                fine, fine_masses = class_mean_payoffs(self.game, self.tree, x, level, F=F)
                coarse, coarse_masses = class_mean_payoffs(self.game, self.tree, x, level - 1, F=F)
                children = self.tree.child_matrix(level).astype(float)

                np.testing.assert_allclose(children @ fine_masses, coarse_masses, atol=1e-14)
                np.testing.assert_allclose(children @ (fine_masses * fine) / coarse_masses,
                                           coarse, atol=1e-12)

            self.assertAlmostEqual(class_mean_payoffs(self.game, self.tree, x, 0, F=F)[0][0],
                                   self.game.mean_payoff(x), delta=1e-12)
