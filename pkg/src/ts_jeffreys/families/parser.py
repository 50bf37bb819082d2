"""Text grammar for families: ``kind[:key=value{,key=value}]``.

Arms add the conventional parameter λ after ``@``, e.g. ``pareto:xm=1.0@3``.
"""

from __future__ import annotations

import re

from ts_jeffreys.errors import ConfigError, DomainError
from ts_jeffreys.families.base import ExponentialFamily, NaturalParam
from ts_jeffreys.families.catalog import (
    Bernoulli,
    GammaShape,
    Gaussian,
    Pareto,
    Poisson,
    Weibull,
)

# (kind, class, parameter keys with defaults, grammar shown by list-families)
FAMILY_GRAMMARS: list[tuple[str, type[ExponentialFamily], dict[str, float], str]] = [
    ("bernoulli", Bernoulli, {}, "bernoulli"),
    ("gaussian", Gaussian, {"sigma2": 1.0}, "gaussian:sigma2=<positive real>"),
    ("gamma", GammaShape, {"k": 1.0}, "gamma:k=<positive real>"),
    ("poisson", Poisson, {}, "poisson"),
    ("pareto", Pareto, {"xm": 1.0}, "pareto:xm=<positive real>"),
    ("weibull", Weibull, {"k": 1.0}, "weibull:k=<positive real>"),
]

_REGISTRY = {kind: (cls, keys) for kind, cls, keys, _ in FAMILY_GRAMMARS}

_KIND_RE = re.compile(r"^[a-z]+$")


def parse_family(text: str) -> ExponentialFamily:
    """Build a family from its spec string, e.g. ``gaussian:sigma2=1.0``."""
    kind, _, params = text.strip().partition(":")
    kind = kind.strip().lower()
    if not _KIND_RE.match(kind) or kind not in _REGISTRY:
        known = ", ".join(_REGISTRY)
        raise ConfigError(f"unknown family {kind!r} in {text!r} (known: {known})")

    cls, defaults = _REGISTRY[kind]
    values = dict(defaults)
    if params.strip():
        for item in params.split(","):
            key, sep, raw = item.partition("=")
            key = key.strip()
            if not sep or key not in defaults:
                allowed = ", ".join(defaults) or "none"
                raise ConfigError(
                    f"bad parameter {item.strip()!r} for {kind} (allowed: {allowed})"
                )
            try:
                values[key] = float(raw)
            except ValueError as e:
                raise ConfigError(f"{kind}: {key}={raw!r} is not a number") from e

    try:
        return cls(**values)
    except DomainError as e:
        raise ConfigError(f"{text!r}: {e}") from e


def parse_arm(text: str) -> tuple[ExponentialFamily, NaturalParam]:
    """Parse ``<family spec>@<λ>`` into a family and its natural parameter."""
    family_text, sep, lam_text = text.strip().rpartition("@")
    if not sep:
        raise ConfigError(f"arm {text!r} must look like '<family>@<lambda>'")
    family = parse_family(family_text)
    try:
        lam = float(lam_text)
    except ValueError as e:
        raise ConfigError(f"arm {text!r}: λ={lam_text!r} is not a number") from e
    try:
        theta = family.to_natural(lam)
        family.check_theta(theta)
    except DomainError as e:
        raise ConfigError(f"arm {text!r}: {e}") from e
    return family, theta


def format_arm(family: ExponentialFamily, theta: NaturalParam) -> str:
    return f"{family.spec_string()}@{family.from_natural(theta)!r}"
