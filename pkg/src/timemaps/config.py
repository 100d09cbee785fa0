"""Run configuration and its ``key = value`` file grammar.

Example file::

    # analysis settings
    seed = 42
    bins = 50            # or bins_x / bins_y
    smoothing_sd = 1.0
    mass_threshold = 0.15
    taxonomy.x_cuts = 60, 3600, 36000     # seconds
    rule.R1 = coverage < 0.01 and n_points >= 200 -> BotUnique
    rule.R9 = true -> Indeterminate

Any ``rule.*`` key replaces the default rule list; rules keep file order.
"""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass, field, replace

from .features import DEFAULT_THRESHOLDS
from .regions import RegionTaxonomy, default_taxonomy
from .rules import Rule, default_rules, parse_rule
from .timemap import DEFAULT_BINS, DEFAULT_SMOOTHING_SD

SEED_ENV = "TIMEMAP_SEED"
DEFAULT_SEED = 0
RESAMPLE_MODES = ("uniform_events", "contiguous_window")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = DEFAULT_SEED
    bins_x: int = DEFAULT_BINS
    bins_y: int = DEFAULT_BINS
    smoothing_sd: float = DEFAULT_SMOOTHING_SD
    taxonomy: RegionTaxonomy = field(default_factory=default_taxonomy)
    thresholds: dict = field(default_factory=lambda: dict(DEFAULT_THRESHOLDS))
    custom_rules: tuple[Rule, ...] = ()
    resample_mode: str = "uniform_events"
    input: str = ""
    output: str = ""

    @property
    def rules(self) -> list[Rule]:
        return list(self.custom_rules) if self.custom_rules else default_rules(self.thresholds)

    def echo(self) -> dict:
        return {
            "seed": self.seed,
            "bins_x": self.bins_x,
            "bins_y": self.bins_y,
            "smoothing_sd": self.smoothing_sd,
            "thresholds": dict(self.thresholds),
            "taxonomy": {
                "x_cuts_log10_seconds": list(self.taxonomy.x_cuts),
                "y_cuts_log10_seconds": list(self.taxonomy.y_cuts),
                "labels": [list(r) for r in self.taxonomy.labels],
            },
            "rules": [
                {"id": r.rule_id, "predicate": r.predicate, "label": r.label.value}
                for r in self.rules
            ],
            "rules_source": "config" if self.custom_rules else "default",
            "resample_mode": self.resample_mode,
            "input": self.input,
            "output": self.output,
        }


def read_pairs(text: str) -> dict[str, str]:
    parser = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#",), delimiters=("=",)
    )
    parser.optionxform = str
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from None
    return dict(parser["run"])


def _cuts(text: str) -> tuple[float, float, float]:
    values = [float(v) for v in text.split(",")]
    if len(values) != 3 or any(v <= 0 for v in values):
        raise ConfigError(f"taxonomy cuts need three positive durations in seconds, got {text!r}")
    return tuple(math.log10(v) for v in values)


def apply_pairs(cfg: RunConfig, pairs: dict[str, str]) -> RunConfig:
    changes: dict = {}
    thresholds = dict(cfg.thresholds)
    rules: list[Rule] = []
    x_cuts, y_cuts = cfg.taxonomy.x_cuts, cfg.taxonomy.y_cuts
    try:
        for key, value in pairs.items():
            if key == "seed":
                changes["seed"] = int(value, 0)
            elif key == "bins":
                changes["bins_x"] = changes["bins_y"] = int(value)
            elif key in ("bins_x", "bins_y"):
                changes[key] = int(value)
            elif key == "smoothing_sd":
                changes["smoothing_sd"] = float(value)
            elif key in thresholds:
                thresholds[key] = type(DEFAULT_THRESHOLDS[key])(float(value))
            elif key == "taxonomy.x_cuts":
                x_cuts = _cuts(value)
            elif key == "taxonomy.y_cuts":
                y_cuts = _cuts(value)
            elif key.startswith("rule."):
                rules.append(parse_rule(key[5:], value))
            elif key == "resample_mode":
                if value not in RESAMPLE_MODES:
                    raise ConfigError(f"resample_mode must be one of {RESAMPLE_MODES}")
                changes["resample_mode"] = value
            elif key in ("input", "output"):
                changes[key] = value
            else:
                raise ConfigError(f"unknown config key {key!r}")
        if (x_cuts, y_cuts) != (cfg.taxonomy.x_cuts, cfg.taxonomy.y_cuts):
            changes["taxonomy"] = RegionTaxonomy(x_cuts, y_cuts, cfg.taxonomy.labels)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None
    changes["thresholds"] = thresholds
    if rules:
        changes["custom_rules"] = tuple(rules)
    return replace(cfg, **changes)


def load_config(path: str | None = None, overrides: dict[str, str] | None = None) -> RunConfig:
    """Defaults, then ``TIMEMAP_SEED``, then the file, then flag overrides."""
    cfg = RunConfig()
    env_seed = os.environ.get(SEED_ENV)
    if env_seed:
        try:
            cfg = replace(cfg, seed=int(env_seed, 0))
        except ValueError:
            raise ConfigError(f"{SEED_ENV} is not an integer: {env_seed!r}") from None
    if path:
        with open(path, encoding="utf-8") as fh:
            cfg = apply_pairs(cfg, read_pairs(fh.read()))
    if overrides:
        cfg = apply_pairs(cfg, {k: v for k, v in overrides.items() if v is not None})
    return cfg
