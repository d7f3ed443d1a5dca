"""
The four subcommands. Each returns a process exit code:

    0 success, 1 failed checks, 2 configuration error, 3 runtime error.

Usage errors (ConfigError, InvalidProfile, InvalidTree, InvalidClass and
BoundaryState) are raised and mapped to exit code 2 by main(); every other
NestedDynamicsError maps to exit code 3.
"""
import json
import logging
import os
import sys
import time
import datetime
import numpy as np
from .. import VERSION
from ..common import (NestedDynamicsError, IntegrationError, ConfigError,
                      is_interior, parse_vector, uniform_state, vertex)
from ..games import classify_point, dominated_pairs, MatrixGame
from ..profiles import convert, round_trip_error
from ..tracker import (PotentialTracker, MeanPayoffTracker, DivergenceTracker,
                       ClassShareTracker)
from ..dynamics import make_field, integrate
from ..choice import mirror_scores, new_integrate, nrl_integrate
from ..analysis import (DivergenceSpec, CheckSuite, report_json, summarize,
                        random_interior_states, check_tangency,
                        check_protocol_consistency, check_class_aggregation,
                        check_dkl_identity, check_paydiff_integral,
                        check_class_score_derivative, check_class_probabilities,
                        check_nlc_argmax, compare_nrd_new,
                        check_potential_ascent, check_gess_attraction,
                        check_nash_limit, extinction_report)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECKS = 1
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

def write_json(path, data):
    directory = os.path.dirname(path)
    if len(directory):
        os.makedirs(directory, exist_ok=True)

    with open(path, "w") as f:
        json.dump(data, f, indent=2)
        f.write("\n")

def _output_path(out_dir, name):
    return name if os.path.isabs(name) else os.path.join(out_dir, name)

def _trackers(config):
    trackers = []

    for name in config.outputs["diagnostics"]:
        if name == "potential":
            trackers.append(PotentialTracker(config.game))
        elif name == "mean_payoff":
            trackers.append(MeanPayoffTracker(config.game))
        elif name == "nested_kl":
            spec = DivergenceSpec.from_rates(config.tree, config.rates,
                                             config.analysis["reference"])
            trackers.append(DivergenceTracker(spec))
        elif name == "class_shares":
            trackers.append(ClassShareTracker(config.tree, level=1))

    return trackers

def _start_scores(config, seed):
    y0 = config.initial_scores()

    if y0 is not None:
        return y0

    x0 = config.initial_state(seed)

    if not is_interior(x0):
        raise ConfigError("Score dynamics need 'y0' or an interior initial state.")

    return mirror_scores(config.tree, config.temps, x0)

def run_experiment(config, seed=None, trackers=None, show_times=False):
    """
    Integrates the configured dynamics and returns the Trajectory.
    """
    integrator = config.integrator
    trackers = _trackers(config) if trackers is None else trackers
    common = dict(step=integrator["step"], t_end=integrator["t_end"],
                  sample_stride=integrator["sample_stride"], trackers=trackers,
                  show_times=show_times)

    if config.kind in ("rd", "nrd", "nrd_extr"):
        x0 = config.initial_state(seed)

        if x0 is None:
            raise ConfigError("Dynamics of kind '{}' need a population state, not 'y0'.".format(config.kind))

        if config.kind != "rd" and not is_interior(x0):
            raise ConfigError("Dynamics of kind '{}' need an interior initial state, got '{}'.".format(
                config.kind, x0.tolist()))

        field = make_field(config.kind, config.game, config.tree, config.profile)
        return integrate(field, x0, renormalize=integrator["renormalize"],
                         reward_function=config.game.mean_payoff, **common)

    y0 = _start_scores(config, seed)

    if config.kind == "new":
        trajectory, _ = new_integrate(config.game, config.tree, config.temps, y0, **common)
    else:
        trajectory, _ = nrl_integrate(config.game, config.tree, config.temps, y0,
                                      solver_tol=config.solver_tol, **common)

    return trajectory

def _manifest(config, command, seed, started, seconds, **extra):
    manifest = {
        "tool": "nested_dynamics",
        "version": VERSION,
        "command": command,
        "seed": seed,
        "config": config.resolved(),
        # excluded when comparing manifests of repeated runs
        "wall_clock": {"started": started, "seconds": seconds}
    }
    manifest.update(extra)
    return manifest

def _now():
    return datetime.datetime.now().isoformat(timespec="seconds")

def cmd_simulate(config, out_dir=".", seed=None, show_times=False):
    """
    Integrates the configured dynamics, writes the trajectory as CSV and a
    manifest describing the run.
    """
    seed = config.seed if seed is None else seed
    started, start = _now(), time.perf_counter()
    manifest_path = _output_path(out_dir, config.outputs["manifest"])

    try:
        trajectory = run_experiment(config, seed=seed, show_times=show_times)
    except IntegrationError as e:
        logger.error("Integration failed at step %s (t=%s): %s", e.step, e.t, e)
        write_json(manifest_path, _manifest(
            config, "simulate", seed, started, time.perf_counter() - start,
            status="error",
            error={"type": type(e).__name__, "message": str(e), "step": e.step, "t": e.t}))
        return EXIT_RUNTIME
    except ConfigError:
        raise
    except NestedDynamicsError as e:
        logger.error("Simulation failed: %s", e)
        write_json(manifest_path, _manifest(
            config, "simulate", seed, started, time.perf_counter() - start,
            status="error", error={"type": type(e).__name__, "message": str(e)}))
        return EXIT_RUNTIME

    trajectory_path = _output_path(out_dir, config.outputs["trajectory"])
    os.makedirs(os.path.dirname(trajectory_path) or ".", exist_ok=True)
    trajectory.to_csv(trajectory_path)

    write_json(manifest_path, _manifest(
        config, "simulate", seed, started, time.perf_counter() - start,
        status="ok", trajectory=trajectory_path, columns=trajectory.header(),
        samples=len(trajectory), terminal=trajectory.terminal.tolist()))

    logger.info("Wrote %d samples to %s.", len(trajectory), trajectory_path)
    return EXIT_OK

class _SharedRun:
    """
    A nested replicator run computed once up front and read by several
    checks. A failure is stored and re-raised by every check that needs it.
    """
    def __init__(self, config, seed, t_end):
        self.trajectory = None
        self.error = None
        x0 = config.initial_state(seed)

        if x0 is None or not is_interior(x0):
            x0 = uniform_state(config.game.n)

        integrator = config.integrator

        try:
            self.trajectory = integrate(
                make_field("nrd", config.game, config.tree, config.rates), x0,
                step=integrator["step"], t_end=t_end,
                sample_stride=integrator["sample_stride"],
                renormalize=integrator["renormalize"])
        except NestedDynamicsError as e:
            logger.error("The reference run failed: %s", e)
            self.error = e

    def get(self):
        if self.error is not None:
            raise self.error
        return self.trajectory

def build_suite(config, seed=0, jobs=1):
    """
    Assembles the invariant checks that apply to the configured game,
    structure and parameters. Every check draws from its own generator.
    """
    seed = 0 if seed is None else int(seed)
    game, tree, rates, temps = config.game, config.tree, config.rates, config.temps
    analysis = config.analysis
    samples = int(analysis.get("samples", 100))
    suite = CheckSuite(jobs=jobs)

    def rng(index):
        return np.random.default_rng([seed, index])

    def states(index, count=samples):
        return random_interior_states(game.n, count, rng(index))

    field = make_field(config.kind if config.kind in ("rd", "nrd", "nrd_extr") else "nrd",
                       game, tree, config.profile if config.kind == "nrd_extr" else rates)

    suite.add("tangency", lambda: check_tangency(field, states(0)), 1e-12)
    suite.add("nppi_mean_dynamics", lambda: check_protocol_consistency(game, tree, rates, states(1)), 1e-12)
    suite.add("class_aggregation", lambda: check_class_aggregation(game, tree, rates, states(2)), 1e-12)

    def dkl_identity():
        generator = rng(3)
        residuals, coarse, fine = [], 0.0, 0.0

        for _ in range(int(analysis.get("dkl_instances", 10))):
            x, p = random_interior_states(game.n, 2, generator)
            residuals.append(check_dkl_identity(game, tree, rates, x, p, h=1e-4))
            coarse += check_dkl_identity(game, tree, rates, x, p, h=1e-3)
            fine += check_dkl_identity(game, tree, rates, x, p, h=5e-4)

        ratio = coarse / fine if fine > 0 else np.inf
        ok = max(residuals) <= 1e-6 and ratio >= 3.5
        return ok, {"max_residual": max(residuals), "halving_ratio": ratio}

    suite.add("dkl_identity", dkl_identity)

    def nrd_new():
        x0 = config.initial_state(seed)
        if x0 is None or not is_interior(x0):
            x0 = uniform_state(game.n)
        t_end = min(20.0, config.integrator["t_end"])
        return compare_nrd_new(game, tree, rates, x0, step=config.integrator["step"],
                               t_end=t_end, sample_stride=config.integrator["sample_stride"])

    suite.add("nrd_equals_new", nrd_new, 1e-6)

    def score_derivative():
        generator = rng(5)
        return max(check_class_score_derivative(game, tree, temps, generator.normal(size=game.n))
                   for _ in range(10))

    suite.add("class_score_derivative", score_derivative, 1e-6)

    def probabilities():
        generator = rng(6)
        return max(check_class_probabilities(tree, temps, generator.normal(scale=3.0, size=game.n))
                   for _ in range(samples))

    suite.add("class_probabilities", probabilities, 1e-12)

    def nlc_argmax():
        generator = rng(7)
        gaps = [check_nlc_argmax(tree, temps, generator.normal(size=game.n),
                                 solver_tol=min(1e-10, config.solver_tol))
                for _ in range(int(analysis.get("argmax_instances", 20)))]
        choice_gap = max(g[0] for g in gaps)
        value_gap = max(g[1] for g in gaps)
        return choice_gap <= 1e-7 and value_gap <= 1e-9, {
            "choice_gap": choice_gap, "value_gap": value_gap}

    suite.add("nlc_equals_argmax", nlc_argmax)

    def conversions():
        generator = rng(8)
        profiles = [rates.rates] + list(generator.dirichlet(np.ones(tree.depth), size=samples))
        return max(round_trip_error(r) for r in profiles)

    suite.add("conversion_round_trip", conversions, 1e-12)

    run = _SharedRun(config, seed, float(analysis.get("t_end", config.integrator["t_end"])))

    if game.has_potential:
        def potential_ascent():
            report = check_potential_ascent(game, run.get(), tree, rates,
                                            samples=samples, rng=rng(9))
            return report.passed(), {"min_delta": report.min_delta,
                                     "rate_residual": report.rate_residual}

        suite.add("potential_ascent", potential_ascent)

    if "x_star" in analysis:
        def gess():
            report = check_gess_attraction(
                game, tree, rates, analysis["x_star"], run.get(),
                tol=float(analysis.get("gess_tol", 1e-10)),
                threshold=float(analysis.get("gess_threshold", 1e-4)),
                rng=rng(10))
            return report.passed, {"max_increase": report.max_increase,
                                   "terminal_distance": report.terminal_distance}

        suite.add("gess_attraction", gess)

    if analysis.get("nash_limit", False):
        suite.add("nash_limit", lambda: check_nash_limit(
            game, run.get(), tol=float(analysis.get("convergence_tol", 1e-6))))

    if isinstance(game, MatrixGame):
        pairs = dominated_pairs(game)

        for action in sorted(set(a for a, _, _ in pairs)):
            def extinction(action=action):
                report = extinction_report(game, tree, rates, run.get(), action,
                                           window=float(analysis.get("window", 0.5)))
                return report.bound_satisfied, report.to_dict()

            suite.add("extinction_bound_{}".format(game.labels[action] if game.labels else action),
                      extinction)

        if len(pairs):
            a, b, _ = pairs[0]
            suite.add("paydiff_integral",
                      lambda: check_paydiff_integral(game, tree, rates, run.get(), a, b), 1e-6)

    return suite

def cmd_verify(config, out_dir=".", seed=None, jobs=1):
    """
    Runs the invariant suite and writes the JSON report.
    """
    seed = config.seed if seed is None else seed
    started, start = _now(), time.perf_counter()

    results = build_suite(config, seed=seed, jobs=jobs).run()
    summary = summarize(results)

    for result in results:
        if not result.passed:
            logger.error("Check %s %s: residual=%s tolerance=%s %s", result.name,
                         result.status, result.residual, result.tolerance,
                         result.message or "")

    report_path = _output_path(out_dir, config.outputs["report"])
    os.makedirs(os.path.dirname(report_path) or ".", exist_ok=True)

    with open(report_path, "w") as f:
        f.write(report_json(results, tool="nested_dynamics", version=VERSION,
                            seed=seed, config=config.resolved(),
                            wall_clock={"started": started,
                                        "seconds": time.perf_counter() - start}))
        f.write("\n")

    logger.info("%d checks passed, %d failed; report in %s.",
                summary["passed"], summary["failed"], report_path)

    return EXIT_OK if summary["all_passed"] else EXIT_CHECKS

def cmd_convert(rates=None, temps=None, stream=None):
    """
    Prints the rates, temperatures, NKL weights and entropy weights that
    correspond to the given profile, as JSON.
    """
    stream = sys.stdout if stream is None else stream

    try:
        rates = None if rates is None else parse_vector(rates)
        temps = None if temps is None else parse_vector(temps)
    except ValueError as e:
        raise ConfigError(str(e))

    profiles = convert(rates=rates, temps=temps)
    profiles["round_trip_error"] = round_trip_error(profiles["rates"])

    json.dump(profiles, stream, indent=2)
    stream.write("\n")

    if profiles["round_trip_error"] > 1e-12:
        logger.error("Conversion round trip is off by %g.", profiles["round_trip_error"])
        return EXIT_CHECKS

    return EXIT_OK

def _parse_point(game, point):
    labels = game.labels or []

    if point in labels:
        return vertex(game.n, labels.index(point))

    try:
        return parse_vector(point)
    except ValueError as e:
        raise ConfigError("Malformed point: {}".format(e))

def cmd_classify(config, point=None, tol=1e-9, stream=None):
    """
    Classifies a point of the configured game (every vertex if no point is
    given) and lists the strictly dominated actions.
    """
    stream = sys.stdout if stream is None else stream
    game = config.game
    labels = game.labels

    if point is None:
        points = [vertex(game.n, a) for a in range(game.n)]
    else:
        points = [_parse_point(game, point)]

    try:
        reports = [classify_point(game, x, tol=tol).to_dict(labels) for x in points]
    except ValueError as e:
        raise ConfigError("Invalid point: {}".format(e))

    def name(a):
        return labels[a] if labels else a

    output = {
        "points": reports,
        "dominated_pairs": [{"action": name(a), "dominator": name(b), "margin": delta}
                            for a, b, delta in dominated_pairs(game)]
    }

    json.dump(output, stream, indent=2)
    stream.write("\n")
    return EXIT_OK
