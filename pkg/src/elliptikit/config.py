"""Run configuration shared by the CLI and the verification suites.

A configuration is a JSON object; every key is optional::

    {
      "tau": [0, 1],
      "punctures": {"s": [0.4, 0.45]},
      "series_truncation": null,
      "oracle_truncation": [2000, 2000],
      "tolerances": {"fe/E1-shift-1": 1e-9},
      "z0": [0.3, 0.2],
      "delta": null,
      "seed": 20240611,
      "suite_taus": [[0, 1], [0.5, 1.5]],
      "output": "json"
    }

Complex numbers are written as ``[re, im]`` pairs or strings such as
``"0.5+1.5i"``.  Command-line flags override file values.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path as FsPath

from .itint import Punctures
from .lattice import LatticeContext
from .shuffle import parse_point

CONFIG_ENV = "ELLIPTIKIT_CONFIG"
SCHEMA = "elliptikit/1"
DEFAULT_SUITE_TAUS = (1j, 0.5 + 1.5j)


class ConfigError(ValueError):
    """Malformed or inconsistent configuration."""


def parse_complex(value) -> complex:
    """Accept [re, im], a number, or a literal such as "0.3-0.1i" or "0.3,-0.1"."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ConfigError(f"complex pair must have two entries, got {value!r}")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float, complex)):
        return complex(value)
    if isinstance(value, str):
        text = value.strip()
        if "," in text:
            parts = text.split(",")
            if len(parts) != 2:
                raise ConfigError(f"expected RE,IM but got {value!r}")
            try:
                return complex(float(parts[0]), float(parts[1]))
            except ValueError:
                raise ConfigError(f"expected RE,IM but got {value!r}") from None
        try:
            return parse_point(text)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    raise ConfigError(f"cannot read {value!r} as a complex number")


@dataclass(frozen=True)
class RunConfig:
    tau: complex = 1j
    punctures: tuple[tuple[str, complex], ...] = ()
    series_truncation: int | None = None
    oracle_truncation: tuple[int, int] = (2000, 2000)
    tolerances: tuple[tuple[str, float], ...] = ()
    z0: complex = 0.3 + 0.2j
    delta: float | None = None
    seed: int = 20240611
    suite_taus: tuple[complex, ...] = DEFAULT_SUITE_TAUS
    output: str = "json"
    extra: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not complex(self.tau).imag > 0:
            raise ConfigError("tau must lie in the upper half-plane")
        if self.output not in ("json", "text"):
            raise ConfigError("output must be 'json' or 'text'")
        for t in self.suite_taus:
            if not complex(t).imag > 0:
                raise ConfigError("suite_taus must lie in the upper half-plane")
        self.puncture_set()  # validates distinctness

    def context(self, tau: complex | None = None) -> LatticeContext:
        return LatticeContext(
            self.tau if tau is None else tau,
            series_truncation=self.series_truncation,
            oracle_truncation=self.oracle_truncation,
        )

    def puncture_set(self, tau: complex | None = None) -> Punctures:
        """Punctures with 0 added; raises if two representatives agree modulo the lattice."""
        ctx = LatticeContext(self.tau if tau is None else tau)
        reps = [0j] + [s for _, s in self.punctures]
        for i in range(len(reps)):
            for j in range(i):
                if ctx.distance_to_lattice(reps[i] - reps[j]) < 1e-9:
                    raise ConfigError(f"punctures {reps[j]} and {reps[i]} coincide modulo the lattice")
        return Punctures.from_mapping(dict(self.punctures))

    def tolerance(self, check_id: str, default: float) -> float:
        return dict(self.tolerances).get(check_id, default)

    def to_dict(self) -> dict:
        c = lambda z: [complex(z).real, complex(z).imag]  # noqa: E731
        return {
            "tau": c(self.tau),
            "punctures": {k: c(v) for k, v in self.punctures},
            "series_truncation": self.series_truncation,
            "oracle_truncation": list(self.oracle_truncation),
            "tolerances": dict(self.tolerances),
            "z0": c(self.z0),
            "delta": self.delta,
            "seed": self.seed,
            "suite_taus": [c(t) for t in self.suite_taus],
            "output": self.output,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {
            "tau", "punctures", "series_truncation", "oracle_truncation", "tolerances",
            "z0", "delta", "seed", "suite_taus", "output", "schema",
        }
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        kw: dict = {}
        if "tau" in data:
            kw["tau"] = parse_complex(data["tau"])
        if "punctures" in data:
            raw = data["punctures"]
            if isinstance(raw, list):
                raw = {f"s{i + 1}": v for i, v in enumerate(raw)}
            pairs = [(str(k), parse_complex(v)) for k, v in raw.items()]
            kw["punctures"] = tuple((k, v) for k, v in pairs if v != 0)
        if data.get("series_truncation") is not None:
            kw["series_truncation"] = int(data["series_truncation"])
        if "oracle_truncation" in data:
            n, m = data["oracle_truncation"]
            kw["oracle_truncation"] = (int(n), int(m))
        if "tolerances" in data:
            kw["tolerances"] = tuple(sorted((str(k), float(v)) for k, v in data["tolerances"].items()))
        if "z0" in data:
            kw["z0"] = parse_complex(data["z0"])
        if data.get("delta") is not None:
            kw["delta"] = float(data["delta"])
        if "seed" in data:
            kw["seed"] = int(data["seed"])
        if "suite_taus" in data:
            kw["suite_taus"] = tuple(parse_complex(t) for t in data["suite_taus"])
        if "output" in data:
            kw["output"] = str(data["output"])
        try:
            return cls(**kw)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None

    def with_overrides(self, **kw) -> "RunConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw) if kw else self


def load_config(path: str | None = None) -> RunConfig:
    """Read the file given explicitly, else the one named by ELLIPTIKIT_CONFIG, else defaults."""
    path = path or os.environ.get(CONFIG_ENV)
    if not path:
        return RunConfig()
    try:
        data = json.loads(FsPath(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path} at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    return RunConfig.from_dict(data)
