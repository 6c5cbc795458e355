"""Run configuration: a strict, losslessly round-tripping key=value document.

Unknown keys are errors, not warnings; a silently ignored typo in a coupling
would poison an entire run.  Key names carry their units (sweeps, steps).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

MODELS = ("saw", "ising", "rlrw", "rllerw")
OBSERVABLE_NAMES = ("length", "winding", "twopoint", "ecdf")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    model: str
    d: int
    L: tuple[int, ...]
    sweeps: int
    seed: int
    out: str
    coupling: float | None = None  # fugacity (saw) or tanh(beta) (ising); None -> shipped default
    length_law: str | None = None  # rlrw/rllerw: halfnormal | deterministic:N | geometric:P | empirical:n=p,...
    burnin_sweeps: int = 100
    cadence_steps: int = 0  # chain steps between measurements; 0 -> one sweep = L^d steps
    chains: int = 1
    winding_axis: int = 0
    twopoint_radius: int = 10
    block_size: int = 64  # measurements per error block
    lifted: bool = False  # direction-persistent SAW chain variant
    observables: tuple[str, ...] = OBSERVABLE_NAMES

    def validate(self) -> "RunConfig":
        if self.model not in MODELS:
            raise ConfigError(f"model must be one of {MODELS}, got {self.model!r}")
        if self.d < 1:
            raise ConfigError("d must be >= 1")
        if not self.L or any(l < 2 for l in self.L):
            raise ConfigError("every L must be >= 2")
        if self.sweeps < 1 or self.burnin_sweeps < 0:
            raise ConfigError("sweeps must be >= 1 and burnin_sweeps >= 0")
        if self.chains < 1:
            raise ConfigError("chains must be >= 1")
        if self.coupling is not None and self.coupling <= 0:
            raise ConfigError("coupling must be positive")
        if self.model in ("saw", "ising") and self.length_law is not None:
            raise ConfigError(f"{self.model} takes a coupling, not a length law")
        if self.model in ("rlrw", "rllerw"):
            if self.coupling is not None:
                raise ConfigError(f"{self.model} takes a length law, not a coupling")
            if self.length_law is None:
                raise ConfigError(f"{self.model} needs length_law")
        if not 0 <= self.winding_axis < self.d:
            raise ConfigError("winding_axis out of range")
        unknown = set(self.observables) - set(OBSERVABLE_NAMES)
        if unknown:
            raise ConfigError(f"unknown observables: {sorted(unknown)}")
        return self


def _parse_bool(s: str) -> bool:
    if s in ("true", "yes", "1"):
        return True
    if s in ("false", "no", "0"):
        return False
    raise ConfigError(f"expected a boolean, got {s!r}")


def _parse_int_list(s: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in s.split(",") if tok.strip())


_FIELDS: dict[str, tuple[Callable[[str], object], Callable[[object], str]]] = {
    "model": (str, str),
    "d": (int, str),
    "L": (_parse_int_list, lambda v: ",".join(str(x) for x in v)),
    "coupling": (float, repr),
    "length_law": (str, str),
    "sweeps": (int, str),
    "burnin_sweeps": (int, str),
    "cadence_steps": (int, str),
    "chains": (int, str),
    "seed": (int, str),
    "winding_axis": (int, str),
    "twopoint_radius": (int, str),
    "block_size": (int, str),
    "lifted": (_parse_bool, lambda v: "true" if v else "false"),
    "observables": (
        lambda s: tuple(tok.strip() for tok in s.split(",") if tok.strip()),
        lambda v: ",".join(v),
    ),
    "out": (str, str),
}

_REQUIRED = ("model", "d", "L", "sweeps", "seed", "out")


def parse_config(text: str) -> RunConfig:
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _FIELDS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        try:
            values[key] = _FIELDS[key][0](val)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None
    missing = [k for k in _REQUIRED if k not in values]
    if missing:
        raise ConfigError(f"missing required keys: {missing}")
    return RunConfig(**values).validate()  # type: ignore[arg-type]


def serialize_config(cfg: RunConfig) -> str:
    lines = []
    for key, (_, fmt) in _FIELDS.items():
        val = getattr(cfg, key)
        if val is None:
            continue
        lines.append(f"{key} = {fmt(val)}")
    return "\n".join(lines) + "\n"


def apply_overrides(cfg: RunConfig, overrides: list[str]) -> RunConfig:
    updates: dict[str, object] = {}
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        key, _, val = item.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _FIELDS:
            raise ConfigError(f"unknown override key {key!r}")
        updates[key] = _FIELDS[key][0](val)
    return replace(cfg, **updates).validate()  # type: ignore[arg-type]
