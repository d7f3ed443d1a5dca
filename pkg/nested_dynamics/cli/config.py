import json
import logging
import os
import numpy as np
from gymnasium.utils import seeding
from ..common import ConfigError, InvalidProfile, as_state, uniform_state
from ..games import MatrixGame, zero_game, PRESETS as GAME_PRESETS
from ..hierarchy import build_tree
from ..profiles import (RateProfile, TempProfile, ExtrinsicProfile,
                        rates_to_temps, rates_to_nkl_weights,
                        temps_to_entropy_weights)

PRESET_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), "presets")

DYNAMICS_KINDS = ("rd", "nrd", "nrd_extr", "new", "nrl")
DIAGNOSTICS = ("potential", "mean_payoff", "nested_kl", "class_shares")

DEFAULT_INTEGRATOR = {
    "step": 1e-3,
    "t_end": 10.0,
    "sample_stride": 10,
    "renormalize": True
}

DEFAULT_OUTPUTS = {
    "trajectory": "trajectory.csv",
    "report": "report.json",
    "manifest": "manifest.json",
    "diagnostics": []
}

def list_presets():
    return sorted(name[:-5] for name in os.listdir(PRESET_DIR) if name.endswith(".json"))

def resolve_config_path(path):
    """
    Returns path itself if it exists, or the bundled preset of that name.
    """
    if os.path.exists(path):
        return path

    name = path if path.endswith(".json") else path + ".json"
    preset = os.path.join(PRESET_DIR, os.path.basename(name))

    if os.path.exists(preset):
        return preset

    logging.error("Configuration file not found at %s", path)
    raise ConfigError("No configuration file or preset '{}'.".format(path))

def load_config(path):
    path = resolve_config_path(path)

    try:
        with open(path) as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        logging.error("Error parsing configuration file %s: %s", path, e)
        raise ConfigError("Malformed JSON in '{}': {}".format(path, e))
    except OSError as e:
        logging.error("Could not read configuration file %s: %s", path, e)
        raise ConfigError("Cannot read '{}'.".format(path))

    return ExperimentConfig(data, source=path)

def _block(data, name, required=False):
    block = data.get(name)

    if block is None:
        if required:
            raise ConfigError("Missing '{}' block.".format(name))
        return {}

    if not isinstance(block, dict):
        raise ConfigError("The '{}' block must be an object.".format(name))

    return block

def build_game(block):
    if "preset" in block:
        try:
            return GAME_PRESETS[block["preset"]]()
        except KeyError:
            raise ConfigError("Unknown game preset '{}'.".format(block["preset"]))

    kind = block.get("kind", "matrix")
    labels = block.get("labels")

    try:
        if kind == "zero":
            return zero_game(int(block["n"]), labels=labels)
        elif kind in ("matrix", "affine"):
            if kind == "affine" and not "b" in block:
                raise ConfigError("An affine game needs 'b'.")
            return MatrixGame(block["A"], block.get("b"), labels=labels)
        else:
            raise ConfigError("Unsupported game kind '{}'.".format(kind))
    except KeyError as e:
        raise ConfigError("Missing game field {}.".format(e))
    except ConfigError:
        raise
    except (TypeError, ValueError, ArithmeticError) as e:
        raise ConfigError("Malformed game block: {}".format(e))

class ExperimentConfig:
    """
    A validated experiment description.

    Arguments:
        - data: The parsed JSON document.
        - source: Where it was loaded from (for the manifest).
    """
    def __init__(self, data, source=None):
        if not isinstance(data, dict):
            raise ConfigError("A configuration must be a JSON object.")

        self.raw = data
        self.source = source
        self.name = data.get("name", os.path.splitext(os.path.basename(source or "experiment"))[0])

        self.game = build_game(_block(data, "game", required=True))
        labels = self.game.labels

        tree_block = _block(data, "tree")
        try:
            self.tree = build_tree(self.game.n, tree_block.get("levels", []), labels=labels)
        except ValueError as e:
            raise ConfigError("Invalid tree: {}".format(e))

        self._parse_dynamics(_block(data, "dynamics", required=True))

        self.integrator = dict(DEFAULT_INTEGRATOR)
        self.integrator.update(_block(data, "integrator"))

        if not self.integrator["step"] > 0 or not self.integrator["t_end"] >= 0:
            raise ConfigError("The integrator needs step > 0 and t_end >= 0, got '{}'.".format(self.integrator))

        self.init = _block(data, "init") or {"preset": "uniform"}
        self.seed = self.init.get("seed", data.get("seed"))

        if self.init.get("preset") == "random" and self.seed is None:
            raise ConfigError("Random initialization needs a seed.")

        self.outputs = dict(DEFAULT_OUTPUTS)
        self.outputs.update(_block(data, "outputs"))

        for name in self.outputs["diagnostics"]:
            if not name in DIAGNOSTICS:
                raise ConfigError("Unknown diagnostic '{}'.".format(name))

        self.analysis = _block(data, "analysis")

        if "potential" in self.outputs["diagnostics"] and not self.game.has_potential:
            raise ConfigError("The game has no potential to track.")

        if "nested_kl" in self.outputs["diagnostics"] and not "reference" in self.analysis:
            raise ConfigError("Tracking the nested KL divergence needs 'analysis.reference'.")

        for key in ("reference", "x_star"):
            if key in self.analysis:
                try:
                    as_state(self.analysis[key], self.game.n, tol=1e-9)
                except ValueError as e:
                    raise ConfigError("Invalid '{}': {}".format(key, e))

    def _parse_dynamics(self, block):
        kind = block.get("kind")

        if not kind in DYNAMICS_KINDS:
            raise ConfigError("Dynamics kind must be one of {}, got '{}'.".format(DYNAMICS_KINDS, kind))

        self.kind = kind
        self.etas = None
        depth = self.tree.depth

        if kind == "nrd_extr":
            if not "etas" in block:
                raise ConfigError("Extrinsic dynamics need 'etas'.")
            self.etas = ExtrinsicProfile(block["etas"])
            self.rates = RateProfile.plain(depth)
        elif kind == "rd":
            self.rates = RateProfile.plain(depth)
        else:
            has_rates, has_temps = "rates" in block, "temps" in block

            if has_rates == has_temps:
                raise ConfigError("Exactly one of 'rates' and 'temps' must be given.")

            if has_rates:
                self.rates = RateProfile(block["rates"])
            else:
                self.rates = TempProfile(block["temps"]).to_rates()

        if self.rates.depth != depth or (self.etas is not None and self.etas.depth != depth):
            raise InvalidProfile("Expected {} levels of parameters for a tree of depth {}.".format(depth, depth))

        if kind in ("new", "nrl") and "temps" in block:
            self.temps = TempProfile(block["temps"])
        else:
            self.temps = self.rates.to_temps()

        self.solver_tol = float(block.get("solver_tol", 1e-10))

    @property
    def profile(self):
        """The profile the vector field of the configured kind takes."""
        return self.etas if self.kind == "nrd_extr" else self.rates

    def initial_state(self, seed=None):
        """
        Resolves the initial population state. Random states are drawn from
        a seeded generator, so that a seed reproduces them exactly.
        """
        seed = self.seed if seed is None else seed
        n = self.game.n

        if "x0" in self.init:
            try:
                return as_state(self.init["x0"], n, tol=1e-9)
            except ValueError as e:
                raise ConfigError("Invalid 'x0': {}".format(e))

        if "y0" in self.init:
            return None

        preset = self.init.get("preset", "uniform")

        if preset == "uniform":
            return uniform_state(n)
        elif preset == "random":
            if seed is None:
                raise ConfigError("Random initialization needs a seed.")
            generator, _ = seeding.np_random(int(seed))
            return generator.dirichlet(np.ones(n))
        else:
            raise ConfigError("Unknown initialization preset '{}'.".format(preset))

    def initial_scores(self):
        if not "y0" in self.init:
            return None

        y0 = np.asarray(self.init["y0"], dtype=float)

        if y0.shape != (self.game.n,) or not np.all(np.isfinite(y0)):
            raise ConfigError("Invalid 'y0': '{}'.".format(self.init["y0"]))

        return y0

    def resolved(self):
        """Every derived quantity of the run, for the manifest."""
        game = {"kind": self.game.kind, "n": self.game.n, "labels": self.game.labels}

        if isinstance(self.game, MatrixGame):
            game.update(A=self.game.A.tolist(), b=self.game.b.tolist())

        dynamics = {
            "kind": self.kind,
            "rates": self.rates.rates.tolist(),
            "temps": self.temps.temps.tolist(),
            "nkl_weights": rates_to_nkl_weights(self.rates.rates).tolist(),
            "entropy_weights": temps_to_entropy_weights(self.temps.temps).tolist(),
            "normalized_temps": rates_to_temps(self.rates.rates).tolist(),
            "time_scale": float(self.temps.time_scale)
        }

        if self.etas is not None:
            dynamics["etas"] = self.etas.etas.tolist()

        if self.kind == "nrl":
            dynamics["solver_tol"] = self.solver_tol

        return {
            "name": self.name,
            "source": self.source,
            "game": game,
            "tree": {"depth": self.tree.depth, "partitions": self.tree.partitions},
            "dynamics": dynamics,
            "integrator": self.integrator,
            "init": self.init,
            "outputs": self.outputs,
            "analysis": self.analysis
        }
