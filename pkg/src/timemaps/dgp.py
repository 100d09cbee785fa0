"""Seeded generators for idealised interarrival distributions.

All draws come from :class:`timemaps.rng.Stream`, so a given
``(spec, n, seed)`` produces the same series everywhere.  Draws are returned
raw: Gaussian and mixture samples can be zero or negative and are only
discarded later, when a map is prepared for log axes.

Specs have a compact text form used in config files and on the command
line, e.g. ``exponential(mean=1)``, ``uniform(min=0, max=24)`` or
``mixture(0.5:1:0.1, 0.5:10:2)`` (weight:mean:sd per component).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpec
from .events import UNITS, InterarrivalSeries
from .rng import Stream


@dataclass(frozen=True)
class Exponential:
    mean: float = 1.0
    unit: str = "hours"

    def validate(self) -> None:
        if not self.mean > 0:
            raise InvalidSpec(f"exponential mean must be > 0, got {self.mean}")


@dataclass(frozen=True)
class Uniform:
    min: float = 0.0
    max: float = 24.0
    unit: str = "hours"

    def validate(self) -> None:
        if not self.min < self.max:
            raise InvalidSpec(f"uniform requires min < max, got [{self.min}, {self.max})")


@dataclass(frozen=True)
class Gaussian:
    mean: float = 12.0
    sd: float = 3.0
    unit: str = "hours"

    def validate(self) -> None:
        if not self.sd > 0:
            raise InvalidSpec(f"gaussian sd must be > 0, got {self.sd}")


@dataclass(frozen=True)
class LogNormal:
    log_mean: float = 0.0
    log_sd: float = 1.0
    unit: str = "hours"

    def validate(self) -> None:
        if not self.log_sd > 0:
            raise InvalidSpec(f"lognormal log_sd must be > 0, got {self.log_sd}")


@dataclass(frozen=True)
class Mixture:
    """Gaussian mixture; ``components`` holds ``(weight, mean, sd)`` triples."""

    components: tuple[tuple[float, float, float], ...]
    unit: str = "hours"

    def validate(self) -> None:
        if not self.components:
            raise InvalidSpec("mixture needs at least one component")
        weights = [w for w, _, _ in self.components]
        if any(not w > 0 for w in weights):
            raise InvalidSpec("mixture weights must be > 0")
        if abs(math.fsum(weights) - 1.0) > 1e-9:
            raise InvalidSpec(f"mixture weights sum to {math.fsum(weights)!r}, not 1")
        if any(not sd > 0 for _, _, sd in self.components):
            raise InvalidSpec("every mixture component needs sd > 0")


DgpSpec = Exponential | Uniform | Gaussian | LogNormal | Mixture

_THIRD = 1.0 / 3.0


def default_specs() -> dict[str, DgpSpec]:
    """The five reference processes, all in hours."""
    return {
        "exponential": Exponential(mean=1.0),
        "uniform": Uniform(min=0.0, max=24.0),
        "gaussian": Gaussian(mean=12.0, sd=3.0),
        "lognormal": LogNormal(log_mean=0.0, log_sd=1.0),
        "mixture": Mixture(
            components=(
                (_THIRD, 0.12, math.sqrt(0.03)),
                (_THIRD, 2.0, math.sqrt(0.2)),
                (_THIRD, 18.0, math.sqrt(3.0)),
            )
        ),
    }


def sample(spec: DgpSpec, n: int, seed: int) -> InterarrivalSeries:
    """Draw ``n`` i.i.d. interarrivals from ``spec``."""
    spec.validate()
    if spec.unit not in UNITS:
        raise InvalidSpec(f"unknown unit {spec.unit!r}")
    if n < 0:
        raise InvalidSpec(f"n must be >= 0, got {n}")
    rng = Stream(seed)
    if isinstance(spec, Exponential):
        values = -spec.mean * np.log(rng.uniform_open(n))
    elif isinstance(spec, Uniform):
        values = spec.min + (spec.max - spec.min) * rng.uniform(n)
        # guard the rare rounding of min + span*u up to max
        values = np.minimum(values, np.nextafter(spec.max, spec.min))
    elif isinstance(spec, Gaussian):
        values = spec.mean + spec.sd * rng.normal(n)
    elif isinstance(spec, LogNormal):
        values = np.exp(spec.log_mean + spec.log_sd * rng.normal(n))
    elif isinstance(spec, Mixture):
        values = _sample_mixture(spec, n, rng)
    else:
        raise InvalidSpec(f"unsupported spec {spec!r}")
    return InterarrivalSeries(values, spec.unit)


def _sample_mixture(spec: Mixture, n: int, rng: Stream) -> np.ndarray:
    comp = mixture_components(spec, rng.uniform(n))
    means = np.array([m for _, m, _ in spec.components])
    sds = np.array([s for _, _, s in spec.components])
    return means[comp] + sds[comp] * rng.normal(n)


def mixture_components(spec: Mixture, u: np.ndarray) -> np.ndarray:
    """Map uniforms in [0, 1) to component indices by cumulative weight."""
    cum = np.cumsum([w for w, _, _ in spec.components])
    idx = np.searchsorted(cum, u, side="right")
    return np.minimum(idx, len(spec.components) - 1)


# -- text form -------------------------------------------------------------------

_CALL = re.compile(r"^\s*([a-z_]+)\s*(?:\((.*)\))?\s*$", re.IGNORECASE | re.DOTALL)
_FIELDS = {
    "exponential": (Exponential, ("mean",)),
    "uniform": (Uniform, ("min", "max")),
    "gaussian": (Gaussian, ("mean", "sd")),
    "lognormal": (LogNormal, ("log_mean", "log_sd")),
}
_ALIASES = {"normal": "gaussian", "exp": "exponential", "mixed": "mixture"}


def parse_dgp(text: str) -> DgpSpec:
    """Parse ``name`` or ``name(args)``; a bare name gives the default spec."""
    m = _CALL.match(text)
    if not m:
        raise InvalidSpec(f"cannot parse DGP {text!r}")
    name = _ALIASES.get(m.group(1).lower(), m.group(1).lower())
    args = (m.group(2) or "").strip()
    defaults = default_specs()
    if name not in defaults:
        raise InvalidSpec(f"unknown DGP {name!r}; choose from {', '.join(defaults)}")
    if not args:
        return defaults[name]
    if name == "mixture":
        return _parse_mixture(args)
    cls, fields = _FIELDS[name]
    kwargs: dict[str, object] = {}
    for i, part in enumerate(p.strip() for p in args.split(",")):
        key, sep, value = part.partition("=")
        if not sep:
            if i >= len(fields):
                raise InvalidSpec(f"too many arguments for {name}")
            key, value = fields[i], part
        key = key.strip()
        if key not in (*fields, "unit"):
            raise InvalidSpec(f"unknown parameter {key!r} for {name}")
        kwargs[key] = value.strip() if key == "unit" else _num(value)
    spec = cls(**kwargs)
    spec.validate()
    return spec


def _parse_mixture(args: str) -> Mixture:
    comps, unit = [], "hours"
    for part in (p.strip() for p in args.split(",")):
        if part.startswith("unit="):
            unit = part[5:].strip()
            continue
        bits = part.split(":")
        if len(bits) != 3:
            raise InvalidSpec(f"mixture component must be weight:mean:sd, got {part!r}")
        comps.append(tuple(_num(b) for b in bits))
    spec = Mixture(tuple(comps), unit=unit)
    spec.validate()
    return spec


def _num(text: str) -> float:
    text = text.strip()
    m = re.fullmatch(r"sqrt\((.+)\)", text)
    try:
        return math.sqrt(float(m.group(1))) if m else float(text)
    except ValueError:
        raise InvalidSpec(f"not a number: {text!r}") from None


def format_dgp(spec: DgpSpec) -> str:
    if isinstance(spec, Mixture):
        parts = [f"{w!r}:{m!r}:{s!r}" for w, m, s in spec.components]
        return f"mixture({', '.join(parts)}, unit={spec.unit})"
    for name, (cls, fields) in _FIELDS.items():
        if isinstance(spec, cls):
            inner = ", ".join(f"{f}={getattr(spec, f)!r}" for f in fields)
            return f"{name}({inner}, unit={spec.unit})"
    raise InvalidSpec(f"unsupported spec {spec!r}")


def dgp_name(spec: DgpSpec) -> str:
    return format_dgp(spec).split("(", 1)[0]


# Analytic moments, used by the nearest-DGP tag and by tests.


def analytic_mean_var(spec: DgpSpec) -> tuple[float, float]:
    if isinstance(spec, Exponential):
        return spec.mean, spec.mean**2
    if isinstance(spec, Uniform):
        return (spec.min + spec.max) / 2, (spec.max - spec.min) ** 2 / 12
    if isinstance(spec, Gaussian):
        return spec.mean, spec.sd**2
    if isinstance(spec, LogNormal):
        s2 = spec.log_sd**2
        return math.exp(spec.log_mean + s2 / 2), (math.exp(s2) - 1) * math.exp(2 * spec.log_mean + s2)
    mean = math.fsum(w * m for w, m, _ in spec.components)
    second = math.fsum(w * (s * s + m * m) for w, m, s in spec.components)
    return mean, second - mean * mean
