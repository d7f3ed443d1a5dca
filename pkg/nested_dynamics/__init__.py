#!/usr/bin/env python3
# -*- coding: utf-8 -*-
VERSION = "0.1"

from .common import (NestedDynamicsError, InvalidTree, NotAPartition,
                     NotNested, EmptyClass, LevelOutOfRange, InvalidClass,
                     NonFinitePayoff, EmptyClassMass, UnsupportedKind,
                     BoundaryState, InvalidProfile, IntegrationError,
                     StepBlowup, PositivityLoss, NoConvergence,
                     SupportMismatch, WindowTooShort, NotDominated, NotGESS,
                     NotConverged, ConfigError)
from .hierarchy import (ActionSet, ClassId, SimilarityTree, build_tree,
                        flat_tree, random_tree)
from .games import (Game, MatrixGame, CustomGame, EquilibriumReport,
                    classify_point, dominated_pairs, class_mean_payoff,
                    class_mean_payoffs, commuting_game, good_rps_game,
                    standard_rps_game, zero_game, coordination_game)
from .profiles import (RateProfile, TempProfile, ExtrinsicProfile,
                       WeightProfile, convert)
from .tracker import (DiagnosticTracker, PotentialTracker, MeanPayoffTracker,
                      DivergenceTracker, ClassShareTracker, TrackerGroup)
