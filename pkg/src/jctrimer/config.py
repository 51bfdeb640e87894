"""``key=value`` configuration files.

Recognized keys: omega0, g1, j, theta (system) and n_random, max_iter,
tol_residual, seed (solver). Blank lines and ``#`` comments are ignored.
"""
from __future__ import annotations

from pathlib import Path

from .errors import ValidationError
from .meanfield.solver import SolverOptions
from .model import SystemParams

PARAM_KEYS = ("omega0", "g1", "j", "theta")
SOLVER_KEYS = {"n_random": int, "max_iter": int, "tol_residual": float, "seed": int}
DEFAULTS = {"omega0": 1000.0, "g1": 1.2, "j": 0.05, "theta": 0.0}


def parse_config(text: str) -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"line {lineno}", f"expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in PARAM_KEYS:
            convert = float
        elif key in SOLVER_KEYS:
            convert = SOLVER_KEYS[key]
        else:
            raise ValidationError(key, f"unknown config key on line {lineno}")
        try:
            values[key] = convert(value)
        except ValueError:
            raise ValidationError(key, f"cannot parse {value!r}") from None
    return values


def load_config(path) -> dict:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def params_from(values: dict, **overrides) -> SystemParams:
    merged = dict(DEFAULTS)
    merged.update({k: v for k, v in values.items() if k in PARAM_KEYS})
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return SystemParams(**merged)


def options_from(values: dict, base: SolverOptions | None = None, **overrides) -> SolverOptions:
    fields = {k: v for k, v in values.items() if k in SOLVER_KEYS}
    fields.update({k: v for k, v in overrides.items() if v is not None})
    base = base or SolverOptions()
    return SolverOptions(**{**base.__dict__, **fields})
