"""First-match rule engine that turns a :class:`FeatureProfile` into a verdict.

Predicates are small boolean expressions over profile fields, e.g.
``coverage < 0.02 and n_points >= 100``.  They are parsed with :mod:`ast`
and evaluated by walking a whitelisted subset of nodes; nothing is passed
to ``eval``.
"""

from __future__ import annotations

import ast
import enum
import operator
from dataclasses import dataclass, field, fields

from .errors import InvalidRule
from .features import DEFAULT_THRESHOLDS, FeatureProfile


class Label(str, enum.Enum):
    HUMAN_SPONTANEOUS = "HumanSpontaneous"
    HUMAN_SCHEDULED_HYBRID = "HumanScheduledHybrid"
    BOT = "Bot"
    BOT_UNIQUE = "BotUnique"
    INDETERMINATE = "Indeterminate"


PROFILE_FIELDS = frozenset(f.name for f in fields(FeatureProfile)) - {"occupancy", "nearest_dgp"}

_COMPARE = {
    ast.Lt: operator.lt,
    ast.LtE: operator.le,
    ast.Gt: operator.gt,
    ast.GtE: operator.ge,
    ast.Eq: operator.eq,
    ast.NotEq: operator.ne,
}


def _check(node: ast.AST, text: str) -> None:
    if isinstance(node, ast.Expression):
        _check(node.body, text)
    elif isinstance(node, ast.BoolOp):
        for v in node.values:
            _check(v, text)
    elif isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.Not, ast.USub)):
        _check(node.operand, text)
    elif isinstance(node, ast.Compare):
        if any(type(op) not in _COMPARE for op in node.ops):
            raise InvalidRule(f"unsupported comparison in {text!r}")
        for v in (node.left, *node.comparators):
            _check(v, text)
    elif isinstance(node, ast.Name):
        if node.id not in PROFILE_FIELDS and node.id not in ("true", "false"):
            raise InvalidRule(f"unknown field {node.id!r} in {text!r}")
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float, bool)):
            raise InvalidRule(f"only numeric and boolean constants allowed in {text!r}")
    else:
        raise InvalidRule(f"unsupported syntax {type(node).__name__} in {text!r}")


def _eval(node: ast.AST, env: dict):
    if isinstance(node, ast.Expression):
        return _eval(node.body, env)
    if isinstance(node, ast.BoolOp):
        if isinstance(node.op, ast.And):
            return all(_eval(v, env) for v in node.values)
        return any(_eval(v, env) for v in node.values)
    if isinstance(node, ast.UnaryOp):
        value = _eval(node.operand, env)
        return (not value) if isinstance(node.op, ast.Not) else -value
    if isinstance(node, ast.Compare):
        left = _eval(node.left, env)
        for op, right_node in zip(node.ops, node.comparators):
            right = _eval(right_node, env)
            if left is None or right is None or not _COMPARE[type(op)](left, right):
                return False
            left = right
        return True
    if isinstance(node, ast.Name):
        if node.id in ("true", "false"):
            return node.id == "true"
        return env[node.id]
    return node.value


@dataclass(frozen=True)
class Rule:
    rule_id: str
    predicate: str
    label: Label
    note: str = ""
    _tree: ast.Expression = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        try:
            label = Label(self.label)
        except ValueError:
            raise InvalidRule(f"rule {self.rule_id}: unknown label {self.label!r}") from None
        object.__setattr__(self, "label", label)
        text = self.predicate.replace("&&", " and ").replace("||", " or ")
        try:
            tree = ast.parse(text.strip(), mode="eval")
        except SyntaxError as exc:
            raise InvalidRule(f"rule {self.rule_id}: cannot parse {self.predicate!r}: {exc.msg}") from None
        _check(tree, self.predicate)
        object.__setattr__(self, "_tree", tree)

    def matches(self, profile: FeatureProfile) -> bool:
        return bool(_eval(self._tree, profile.to_dict()))


@dataclass(frozen=True)
class Verdict:
    label: Label
    fired_rules: tuple[str, ...]
    profile: FeatureProfile
    trace: tuple[tuple[str, bool], ...] = ()

    def to_dict(self) -> dict:
        return {
            "verdict": self.label.value,
            "fired_rules": list(self.fired_rules),
            "trace": [{"rule": r, "matched": m} for r, m in self.trace],
        }


def default_rules(thresholds: dict | None = None) -> list[Rule]:
    th = {**DEFAULT_THRESHOLDS, **(thresholds or {})}
    lines = "(vertical_detected or horizontal_detected)"
    return [
        Rule(
            "R1",
            f"coverage < {th['coverage_threshold']!r} and n_points >= {th['min_points_unique']!r}",
            Label.BOT_UNIQUE,
            "very limited variability",
        ),
        Rule("R2", f"{lines} and not diurnal_gap_detected", Label.BOT, "line features, no sleep gap"),
        Rule("R3", f"{lines} and diurnal_gap_detected", Label.HUMAN_SCHEDULED_HYBRID,
             "line features with a sleep gap"),
        Rule("R4", "not vertical_detected and not horizontal_detected and diurnal_gap_detected",
             Label.HUMAN_SPONTANEOUS, "no line features, sleep gap present"),
        Rule("R5", "true", Label.INDETERMINATE, "fallback"),
    ]


def classify(profile: FeatureProfile, rules: list[Rule] | None = None) -> Verdict:
    """Evaluate ``rules`` in order; the first match decides the label."""
    rules = default_rules() if rules is None else rules
    trace: list[tuple[str, bool]] = []
    for rule in rules:
        hit = rule.matches(profile)
        trace.append((rule.rule_id, hit))
        if hit:
            return Verdict(rule.label, (rule.rule_id,), profile, tuple(trace))
    return Verdict(Label.INDETERMINATE, (), profile, tuple(trace))


def parse_rule(rule_id: str, text: str) -> Rule:
    """Parse ``"<predicate> -> <Label>"``."""
    predicate, sep, label = text.rpartition("->")
    if not sep or not predicate.strip():
        raise InvalidRule(f"rule {rule_id}: expected '<predicate> -> <label>', got {text!r}")
    return Rule(rule_id, predicate.strip(), label.strip())
