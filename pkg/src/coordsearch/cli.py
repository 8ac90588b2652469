"""Command-line front end: `coordsearch binpack ...` and `coordsearch formats ...`.

Every flag can also be given in a flat key=value config file (--config);
explicit flags override the file, the file overrides built-in defaults.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import formats
from .harness import (
    BinPackSetup,
    ExperimentConfig,
    FormatsSetup,
    run_experiment,
    write_csv,
)
from .model import ConfigurationError, UtilityChoice
from .search import AlgorithmConfig

_TOPOLOGY_ALIASES = {
    "short": formats.SHORT_LINKS,
    "small": formats.SMALL_WORLDS,
    formats.SHORT_LINKS: formats.SHORT_LINKS,
    formats.SMALL_WORLDS: formats.SMALL_WORLDS,
}


def _bool(text):
    if isinstance(text, bool):
        return text
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# name -> (converter, built-in default); None defaults are resolved later
_COMMON_SCHEMA = {
    "algorithm": (str, "sa"),
    "utility": (str, None),
    "clamp": (str, None),
    "runs": (int, None),
    "horizon": (int, 200),
    "seed": (int, 0),
    "out": (str, "out"),
    "t_learn": (float, None),
    "t_exploit": (float, None),
    "anneal_factor": (float, None),
    "anneal_period": (int, 100),
    "warmup": (int, None),
    "stay_prob": (float, 0.75),
    "stay_final": (float, 0.95),
    "decay": (float, 0.95),
    "econ_rescale": (float, 1.0),
}

_BINPACK_SCHEMA = {
    "items": (int, 20),
    "capacity": (float, 12.0),
    "max_size": (float, None),
    "instance": (str, None),
}

_FORMATS_SCHEMA = {
    "nodes": (int, 100),
    "topology": (str, "short"),
    "hops": (int, 1),
    "extra_links": (float, 0.06),
    "dump_network": (_bool, False),
}

# problem-dependent defaults, applied when neither flag nor file sets the key
_PROBLEM_DEFAULTS = {
    "binpack": {"t_learn": 0.2, "t_exploit": 0.5, "anneal_factor": 0.8, "runs": 25},
    "formats": {"t_learn": 0.4, "t_exploit": 0.05, "anneal_factor": 1.0, "runs": 50},
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coordsearch",
        description="Collective coordinate search experiments (bin packing, format game)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="flat key=value config file; flags override it")
        p.add_argument("--algorithm", choices=["sa", "ic", "coin", "random"])
        p.add_argument("--utility", choices=["tg", "wlu", "au", "econ"])
        p.add_argument("--clamp", help="problem clamp kind for WLU")
        p.add_argument("--runs", type=int)
        p.add_argument("--horizon", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="output directory for CSV files")
        p.add_argument("--t-learn", dest="t_learn", type=float)
        p.add_argument("--t-exploit", dest="t_exploit", type=float)
        p.add_argument("--anneal-factor", dest="anneal_factor", type=float)
        p.add_argument("--anneal-period", dest="anneal_period", type=int)
        p.add_argument("--warmup", type=int)
        p.add_argument("--stay-prob", dest="stay_prob", type=float)
        p.add_argument("--stay-final", dest="stay_final", type=float)
        p.add_argument("--decay", type=float)
        p.add_argument("--econ-rescale", dest="econ_rescale", type=float)

    bp = sub.add_parser("binpack", help="bin-packing experiment")
    add_common(bp)
    bp.add_argument("--items", type=int)
    bp.add_argument("--capacity", type=float)
    bp.add_argument("--max-size", dest="max_size", type=float)
    bp.add_argument("--instance", help="instance file to load instead of generating")

    fm = sub.add_parser("formats", help="music-format choice experiment")
    add_common(fm)
    fm.add_argument("--nodes", type=int)
    fm.add_argument("--topology", choices=sorted(set(_TOPOLOGY_ALIASES)))
    fm.add_argument("--hops", type=int)
    fm.add_argument("--extra-links", dest="extra_links", type=float)
    fm.add_argument("--dump-network", dest="dump_network", action="store_const", const=True)

    return parser


def read_config_file(path: str, schema: dict) -> dict:
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in schema:
                raise ConfigurationError(f"{path}:{lineno}: unknown key {key!r}")
            convert = schema[key][0]
            try:
                values[key] = convert(value.strip())
            except ValueError as exc:
                raise ConfigurationError(f"{path}:{lineno}: {exc}") from exc
    return values


def resolve_settings(args: argparse.Namespace) -> dict:
    schema = dict(_COMMON_SCHEMA)
    schema.update(_BINPACK_SCHEMA if args.command == "binpack" else _FORMATS_SCHEMA)
    settings = {key: default for key, (_, default) in schema.items()}
    settings.update(_PROBLEM_DEFAULTS[args.command])
    if args.config:
        settings.update(read_config_file(args.config, schema))
    for key in schema:
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    if settings["utility"] is None:
        settings["utility"] = "wlu" if settings["algorithm"] in ("ic", "coin") else "tg"
    if settings["warmup"] is None:
        settings["warmup"] = 100 if settings["algorithm"] in ("ic", "coin") else 0
    return settings


def build_experiment(command: str, s: dict) -> ExperimentConfig:
    narrowing = None
    if s["algorithm"] == "sa" and s["stay_final"] != s["stay_prob"]:
        narrowing = (s["stay_prob"], s["stay_final"])
    algorithm = AlgorithmConfig(
        algorithm=s["algorithm"],
        utility=UtilityChoice(s["utility"], s["clamp"]),
        stay_probability=s["stay_prob"],
        t_exploit_initial=s["t_exploit"],
        anneal_factor=s["anneal_factor"],
        anneal_period=s["anneal_period"],
        t_learn=s["t_learn"],
        warmup_steps=s["warmup"],
        horizon=s["horizon"],
        stay_narrowing=narrowing,
        payoff_decay=s["decay"],
        econ_rescale=s["econ_rescale"],
    )
    if command == "binpack":
        problem = BinPackSetup(
            n_items=s["items"],
            capacity=s["capacity"],
            max_size=s["max_size"],
            instance_path=s["instance"],
        )
    else:
        problem = FormatsSetup(
            nodes=s["nodes"],
            topology=_TOPOLOGY_ALIASES[s["topology"]],
            hops=s["hops"],
            extra_link_fraction=s["extra_links"],
        )
    return ExperimentConfig(
        problem=problem,
        algorithm=algorithm,
        run_count=s["runs"],
        master_seed=s["seed"],
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = resolve_settings(args)
        config = build_experiment(args.command, settings)
        result = run_experiment(config)
        traj_path, final_path = write_csv(result, settings["out"])
        if args.command == "formats" and settings.get("dump_network"):
            for i, network in enumerate(result.networks):
                formats.dump_edges(
                    network, os.path.join(settings["out"], f"network_r{i:03d}.txt")
                )
        stats = result.stats
        print(
            f"{config.algorithm.algorithm} {config.algorithm.utility.label()}: "
            f"final G = {stats.final_mean:.4g} +/- {stats.final_stderr:.2g} "
            f"(best {stats.best:g}, worst {stats.worst:g}, "
            f"{stats.percent_optimum:.0f}% within one of best)"
        )
        print(f"wrote {traj_path} and {final_path}")
    except (ConfigurationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
