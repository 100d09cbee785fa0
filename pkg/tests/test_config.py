import math

import pytest

from timemaps.config import ConfigError, RunConfig, apply_pairs, load_config, read_pairs
from timemaps.rules import Label


def write(tmp_path, text):
    path = tmp_path / "run.cfg"
    path.write_text(text)
    return str(path)


def test_defaults(monkeypatch):
    monkeypatch.delenv("TIMEMAP_SEED", raising=False)
    cfg = load_config()
    assert cfg == RunConfig()
    assert cfg.seed == 0 and cfg.bins_x == cfg.bins_y == 50
    assert [r.rule_id for r in cfg.rules] == ["R1", "R2", "R3", "R4", "R5"]


def test_seed_precedence(tmp_path, monkeypatch):
    monkeypatch.setenv("TIMEMAP_SEED", "7")
    assert load_config().seed == 7
    path = write(tmp_path, "seed = 11\n")
    assert load_config(path).seed == 11
    assert load_config(path, {"seed": "13"}).seed == 13
    assert load_config(path, {"seed": None}).seed == 11


def test_bad_env_seed(monkeypatch):
    monkeypatch.setenv("TIMEMAP_SEED", "abc")
    with pytest.raises(ConfigError):
        load_config()


def test_file_grammar(tmp_path, monkeypatch):
    monkeypatch.delenv("TIMEMAP_SEED", raising=False)
    path = write(tmp_path, """
# comment line
bins = 20          # trailing comment
bins_y = 30
smoothing_sd = 2.5
mass_threshold = 0.2
min_points_unique = 50
taxonomy.x_cuts = 30, 3600, 86400
rule.A = coverage < 0.5 -> BotUnique
rule.B = true -> Indeterminate
resample_mode = contiguous_window
""")
    cfg = load_config(path)
    assert (cfg.bins_x, cfg.bins_y, cfg.smoothing_sd) == (20, 30, 2.5)
    assert cfg.thresholds["mass_threshold"] == 0.2
    assert cfg.thresholds["min_points_unique"] == 50 and isinstance(cfg.thresholds["min_points_unique"], int)
    assert cfg.taxonomy.x_cuts[0] == pytest.approx(math.log10(30))
    assert cfg.taxonomy.y_cuts[0] == pytest.approx(math.log10(60))
    assert [r.rule_id for r in cfg.rules] == ["A", "B"]
    assert cfg.rules[0].label is Label.BOT_UNIQUE
    assert cfg.resample_mode == "contiguous_window"
    echo = cfg.echo()
    assert echo["rules_source"] == "config" and echo["bins_x"] == 20


def test_thresholds_feed_default_rules():
    cfg = apply_pairs(RunConfig(), {"coverage_threshold": "0.1"})
    assert "0.1" in cfg.rules[0].predicate


@pytest.mark.parametrize(
    "text",
    [
        "nonsense_key = 1",
        "bins = many",
        "taxonomy.x_cuts = 1, 2",
        "taxonomy.y_cuts = 100, 10, 1000",
        "rule.X = coverage < -> Bot",
        "resample_mode = sideways",
        "no equals sign here",
    ],
)
def test_bad_config_rejected(tmp_path, text):
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, text + "\n"))


def test_read_pairs_keeps_case_and_order():
    assert list(read_pairs("rule.B = true -> Bot\nrule.A = true -> Bot\n")) == ["rule.B", "rule.A"]
