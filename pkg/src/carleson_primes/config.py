"""Flat ``key = value`` run configuration.

Lines are ``key = value``; ``#`` starts a comment. Rational values such as
``1/64`` are accepted. Lists are comma separated. Unknown keys and bad
values raise :class:`ConfigError` naming the file, line and field.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .smooth import CutoffConstants

__all__ = ["RunConfig", "ConfigError", "load_config", "parse_config_text"]


class ConfigError(ValueError):
    pass


def _num(text: str) -> float:
    return float(Fraction(text.strip()))


def _int(text: str) -> int:
    v = Fraction(text.strip())
    if v.denominator != 1:
        raise ValueError(f"{text!r} is not an integer")
    return int(v)


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"{text!r} is not a boolean")


def _list(conv):
    return lambda text: [conv(x) for x in text.split(",") if x.strip()]


@dataclass
class RunConfig:
    # cutoff constants
    c: float = 1 / 64
    a: float = 1 / 4
    N: int = 16
    alpha: float = 20.0
    strict: bool = True
    # truncation of the prime sum and the j range of the decay experiment
    j_min: int = 12
    j_max: int = 18
    lambda_points: int = 64
    # operator experiments
    grid_size: int = 2**14
    trials: int = 50
    p_list: list = field(default_factory=lambda: [2.0, 5 / 3, 3.0])
    k_list: list = field(default_factory=lambda: [2, 4, 8, 16, 32])
    s_list: list = field(default_factory=lambda: [0, 1, 2, 3])
    lambda_grid: int = 17
    theta_spacing: float = 0.3
    # modulation sets
    rho: float = 2.0
    k_max: int = 30
    fit_j_max: int = 64
    fit_k_max: int = 200
    # variation
    r_list: list = field(default_factory=lambda: [2.5, 3.0, 4.0])

    def constants(self) -> CutoffConstants:
        return CutoffConstants(c=self.c, a=self.a, N=self.N, alpha=self.alpha, strict=self.strict)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        cfg = cls(**d)
        cfg.constants()
        return cfg


_PARSERS = {
    "c": _num,
    "a": _num,
    "N": _int,
    "alpha": _num,
    "strict": _bool,
    "j_min": _int,
    "j_max": _int,
    "lambda_points": _int,
    "grid_size": _int,
    "trials": _int,
    "p_list": _list(_num),
    "k_list": _list(_int),
    "s_list": _list(_int),
    "lambda_grid": _int,
    "theta_spacing": _num,
    "rho": _num,
    "k_max": _int,
    "fit_j_max": _int,
    "fit_k_max": _int,
    "r_list": _list(_num),
}


def parse_config_text(text: str, source: str = "<string>") -> RunConfig:
    values = {}
    lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, val = (x.strip() for x in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError(f"{source}:{lineno}: unknown field {key!r}")
        try:
            values[key] = _PARSERS[key](val)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"{source}:{lineno}: field {key!r}: {exc}") from None
        lines[key] = lineno
    cfg = RunConfig(**values)

    def fail(key, msg):
        raise ConfigError(f"{source}:{lines.get(key, 0)}: field {key!r}: {msg}")

    if not 0 < cfg.c < 1:
        fail("c", f"{cfg.c} not in (0, 1)")
    if not cfg.c < cfg.a < 1:
        fail("a" if "a" in lines else "c", f"need c < a < 1 (c={cfg.c}, a={cfg.a})")
    if cfg.N < 2 or cfg.N & (cfg.N - 1):
        fail("N", f"{cfg.N} is not a power of two >= 2")
    if cfg.alpha <= 0 or (cfg.strict and cfg.alpha <= 16):
        fail("alpha", f"{cfg.alpha} must exceed 16 (set strict = false to relax)")
    cfg.constants()
    if cfg.j_min < 2 or cfg.j_max < cfg.j_min:
        raise ConfigError(f"{source}:{lines.get('j_max', 0)}: field 'j_max': need 2 <= j_min <= j_max")
    return cfg


def load_config(path) -> RunConfig:
    path = Path(path)
    return parse_config_text(path.read_text(), str(path))
