"""Run configuration: flat key = value files, flag overrides, and the
byte-identical round trip through the metadata sidecar."""

from dataclasses import dataclass, fields, replace

import numpy as np

from .sweep import default_r_grid


class ConfigError(ValueError):
    pass


def _parse_bool(s):
    if s in ("true", "True", "1"):
        return True
    if s in ("false", "False", "0"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


@dataclass(frozen=True)
class RunConfig:
    V0: float = 10.0
    d: float = 8.0
    R: float = 10.0
    p: float = 200.0
    lam: float = 1.0            # file key: lambda
    M: int = 50
    omega: str = "auto"         # "auto" or a float literal
    R_grid: str = "default"     # "default" or start:step:stop
    shift_mode: str = "global_min"
    normalization: str = "one"
    coverage_factor: float = 1.2
    panel_order: int = 32
    panels_per_interval: int = 8
    tail_tolerance: float = 1e-14
    workers: int = 1
    out: str = "."
    N: int = 400                # oracle grid points
    X: str = "auto"             # oracle half-width, "auto" or float

    _KEYMAP = {"lambda": "lam"}

    def omega_value(self):
        """Explicit omega, or None meaning 'use the default rule'."""
        if self.omega == "auto":
            return None
        return float(self.omega)

    def oracle_halfwidth(self):
        if self.X == "auto":
            return self.d + self.R + 2.0
        return float(self.X)

    def r_values(self):
        if self.R_grid == "default":
            return list(default_r_grid())
        try:
            start, step, stop = (float(t) for t in self.R_grid.split(":"))
            vals = np.arange(start, stop + step * 1e-9, step)
        except ValueError as exc:
            raise ConfigError(
                f"bad R_grid {self.R_grid!r}; expected start:step:stop") from exc
        if len(vals) == 0:
            raise ConfigError(f"R_grid {self.R_grid!r} is empty")
        return [float(v) for v in vals]

    # -- serialization -------------------------------------------------------

    def to_text(self) -> str:
        parts = []
        inv = {v: k for k, v in self._KEYMAP.items()}
        for f in fields(self):
            key = inv.get(f.name, f.name)
            v = getattr(self, f.name)
            parts.append(f"{key} = {v!r}" if isinstance(v, float)
                         else f"{key} = {v}")
        return "\n".join(parts) + "\n"

    @classmethod
    def from_text(cls, text: str, base: "RunConfig" = None,
                  strict: bool = True) -> "RunConfig":
        cfg = base if base is not None else cls()
        types = {f.name: (f.type if isinstance(f.type, str) else f.type.__name__)
                 for f in fields(cls)}
        casts = {"float": float, "int": int, "str": str}
        updates = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"line {lineno}: expected 'key = value', "
                                  f"got {raw!r}")
            key, _, val = (t.strip() for t in line.partition("="))
            name = cls._KEYMAP.get(key, key)
            if name not in types:
                if strict:
                    raise ConfigError(f"line {lineno}: unknown key {key!r}")
                continue
            try:
                updates[name] = casts[types[name]](val)
            except ValueError as exc:
                raise ConfigError(
                    f"line {lineno}: bad value for {key!r}: {val!r}") from exc
        return replace(cfg, **updates)

    @classmethod
    def from_file(cls, path, base: "RunConfig" = None) -> "RunConfig":
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_text(text, base=base)
