import unittest
import numpy as np
from nested_dynamics.common import (NotAPartition, NotNested, EmptyClass,
                                    LevelOutOfRange, InvalidClass)
from nested_dynamics.hierarchy import (ClassId, ActionSet, SimilarityTree,
                                       build_tree, flat_tree, random_tree)
from dummy_games import commuting_tree, three_tier_tree

class SimilarityTreeTest(unittest.TestCase):
    def setUp(self):
        self.tree = three_tier_tree()

    def testShape(self):
        self.assertEqual(self.tree.n, 8)
        self.assertEqual(self.tree.depth, 3)
        self.assertEqual([self.tree.num_classes(level) for level in range(4)], [1, 2, 4, 8])

    def testDegree(self):
        self.assertEqual(self.tree.degree(0, 1), 2)
        self.assertEqual(self.tree.degree(0, 2), 1)
        self.assertEqual(self.tree.degree(0, 7), 0)
        self.assertEqual(self.tree.degree(5, 5), 2)
        self.assertEqual(self.tree.degree(3, 0), self.tree.degree(0, 3))

    def testParentsAndChildren(self):
        c = ClassId(2, 1)
        self.assertEqual(self.tree.class_members(c).tolist(), [2, 3])
        self.assertEqual(self.tree.parent(c), ClassId(1, 0))
        self.assertEqual(self.tree.children(c), [ClassId(3, 2), ClassId(3, 3)])
        self.assertIsNone(self.tree.parent(self.tree.root))
        self.assertEqual(self.tree.children(ClassId(3, 0)), [])

    def testLineage(self):
        self.assertEqual(self.tree.lineage(ClassId(3, 5)),
                         [ClassId(0, 0), ClassId(1, 1), ClassId(2, 2), ClassId(3, 5)])
        self.assertEqual(self.tree.action_lineage(5), self.tree.lineage(ClassId(3, 5)))
        self.assertEqual(self.tree.ancestor(6, 1), ClassId(1, 1))
        self.assertEqual(self.tree.singleton(6), ClassId(3, 6))

    def testChildMatrix(self):
        members = self.tree.child_matrix(2)
        self.assertEqual(members.shape, (2, 4))
        self.assertEqual(members.sum(axis=0).tolist(), [1, 1, 1, 1])
        self.assertTrue(members[1, 3])

    def testClassMasses(self):
        x = np.arange(1, 9) / 36.0
        np.testing.assert_allclose(self.tree.class_masses(x, 1), [10 / 36, 26 / 36])
        self.assertAlmostEqual(self.tree.class_mass(x, ClassId(2, 3)), 15 / 36)
        self.assertAlmostEqual(self.tree.class_masses(x, 0)[0], 1.0)

    def testErrors(self):
        with self.assertRaises(LevelOutOfRange):
            self.tree.assignment(4)

        with self.assertRaises(LevelOutOfRange):
            self.tree.child_matrix(0)

        with self.assertRaises(InvalidClass):
            self.tree.class_members(ClassId(1, 2))

        with self.assertRaises(InvalidClass):
            self.tree.parent("root")

class BuildTreeTest(unittest.TestCase):
    def testLabels(self):
        tree = commuting_tree()
        self.assertEqual(tree.partitions, [[[0, 1, 2]], [[0, 1], [2]], [[0], [1], [2]]])
        self.assertEqual(tree.label(ClassId(1, 0)), "{bus1,bus2}")
        self.assertEqual(tree.degree("bus1", "bus2"), 1)
        self.assertEqual(tree.degree("bus1", "car"), 0)

    def testFullAndInteriorLevelsAgree(self):
        interior = build_tree(3, [[[0, 1], [2]]])
        full = build_tree(3, [[[0, 1, 2]], [[0, 1], [2]], [[0], [1], [2]]])
        self.assertEqual(interior, full)
        self.assertEqual(hash(interior), hash(full))

    def testFlatTree(self):
        tree = flat_tree(4)
        self.assertEqual(tree.depth, 1)
        self.assertEqual(tree.degree(0, 3), 0)

    def testOverlap(self):
        with self.assertRaises(NotAPartition):
            build_tree(3, [[[0, 1], [1, 2]]])

    def testMissingAction(self):
        with self.assertRaises(NotAPartition):
            build_tree(3, [[[0, 1]]])

    def testNotNested(self):
        with self.assertRaises(NotNested):
            build_tree(4, [[[0, 1], [2, 3]], [[0], [1, 2], [3]]])

    def testEmptyClass(self):
        with self.assertRaises(EmptyClass):
            build_tree(3, [[[0, 1, 2], []]])

    def testUnknownLabel(self):
        with self.assertRaises(ValueError):
            build_tree(2, [], labels=["a", "b"]).degree("a", "c")

    def testDuplicateLabels(self):
        with self.assertRaises(ValueError):
            ActionSet(2, ["a", "a"])

class RandomTreeTest(unittest.TestCase):
    def testRefines(self):
        rng = np.random.default_rng(11)

        for _ in range(20):
            n = int(rng.integers(2, 13))
            tree = random_tree(n, int(rng.integers(1, 5)), rng)
            self.assertIsInstance(tree, SimilarityTree)
            table = tree.lineage_table

            for level in range(1, tree.depth + 1):
                # same class at level ℓ implies same class at level ℓ-1
                same = table[level][:, None] == table[level][None, :]
                coarser = table[level - 1][:, None] == table[level - 1][None, :]
                self.assertTrue(np.all(coarser[same]))

            self.assertEqual(table[tree.depth].tolist(), list(range(n)))

    def testDepthIsKept(self):
        # draws whose coarsest level is trivial and finest level is all
        # singletons must not be mistaken for a full list of levels
        for depth in (1, 2, 3, 4):
            for seed in range(300):
                n = 2 + seed % 6
                tree = random_tree(n, depth, np.random.default_rng(seed))
                self.assertEqual(tree.depth, depth)
                self.assertEqual(tree.n, n)

if __name__ == '__main__':
    unittest.main()
