# core/run_config.py
"""
RunConfig: everything one CLI invocation needs, merged from config.py
defaults, an optional JSON config file and command-line flags (in that order).

API:
- RunConfig.from_dict / to_dict / from_json / to_json / load
- RunConfig.merged(overrides)
- parse_float_list, parse_periods, parse_beta_range, parse_complex
"""

import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

import config
from core.errors import DomainError
from core.model import ModelParams, validate_params
from core.utils import get_logger

logger = get_logger("core.run_config")

# JSON key -> dataclass field where they differ
_ALIASES = {"lambda": "lam"}
_REVERSE = {v: k for k, v in _ALIASES.items()}


@dataclass
class RunConfig:
    m: int = config.MODEL["m"]
    lam: List[float] = field(default_factory=lambda: list(config.MODEL["lambda"]))
    J: List[float] = field(default_factory=lambda: list(config.MODEL["J"]))
    beta: float = config.MODEL["beta"]
    beta_range: Optional[List[float]] = None
    n: List[int] = field(default_factory=lambda: [1, 2, 3, 4])
    degree: Optional[int] = None
    z: Optional[List[float]] = None
    output: str = config.OUTPUT["format"]
    deterministic: bool = False
    threads: int = config.LIMITS["threads"]
    direction: str = "+inf"
    parity: str = "even"
    alpha: Optional[List[int]] = None
    statement_form: bool = False
    count: int = 5
    series_terms: int = 16
    cross_check: Optional[str] = None
    emit: Optional[str] = None
    break_me: bool = False

    # ----------------------
    # Derived values
    # ----------------------
    def params(self) -> ModelParams:
        return validate_params(self.m, self.lam, self.J)

    def z_or(self, default: List[float]) -> List[float]:
        """--z when given, else the subcommand's default."""
        return [float(v) for v in (default if self.z is None else self.z)]

    def with_z(self, default: List[float]) -> "RunConfig":
        """Copy with z filled in from default when --z was not given."""
        return self if self.z is not None else self.merged({"z": self.z_or(default)})

    @property
    def z_value(self) -> complex:
        re, im = self.z_or(config.MODEL["z"])
        return complex(re, im)

    @property
    def workers(self) -> int:
        return 1 if self.deterministic else max(1, int(self.threads))

    def betas(self) -> List[float]:
        """--beta-range lo:hi:step when given, else the single --beta."""
        if self.beta_range is None:
            return [float(self.beta)]
        lo, hi, step = self.beta_range
        count = int(np.floor((hi - lo) / step + 1e-9)) + 1
        return [float(lo + k * step) for k in range(count)]

    # ----------------------
    # Serialization
    # ----------------------
    def to_dict(self) -> Dict[str, Any]:
        return {_REVERSE.get(k, k): v for k, v in asdict(self).items()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        values = {}
        for key, value in data.items():
            name = _ALIASES.get(key, key)
            if name not in known:
                raise DomainError(f"unknown config key {key!r}")
            values[name] = value
        cfg = cls(**values)
        cfg.validate()
        return cfg

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"config is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise DomainError("config file must hold one JSON object")
        return cls.from_dict(data)

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        p = Path(path)
        if not p.is_file():
            raise DomainError(f"config file not found: {path}")
        logger.info("Loading run config from %s", p)
        return cls.from_json(p.read_text())

    def merged(self, overrides: Dict[str, Any]) -> "RunConfig":
        """Copy with every non-None override applied."""
        cfg = replace(self, **{k: v for k, v in overrides.items() if v is not None})
        cfg.validate()
        return cfg

    def validate(self):
        if self.output not in ("json", "csv"):
            raise DomainError(f"output must be json or csv, got {self.output!r}")
        if self.z is not None and len(self.z) != 2:
            raise DomainError(f"z must be stored as [re, im], got {self.z!r}")
        if self.beta_range is not None:
            if len(self.beta_range) != 3 or self.beta_range[2] <= 0:
                raise DomainError(f"beta_range must be [lo, hi, step] with step > 0, got {self.beta_range!r}")
        if self.direction not in ("+inf", "-inf"):
            raise DomainError(f"direction must be +inf or -inf, got {self.direction!r}")
        if self.parity not in ("even", "odd"):
            raise DomainError(f"parity must be even or odd, got {self.parity!r}")
        if self.degree is not None and self.degree < 2:
            raise DomainError(f"degree must be >= 2, got {self.degree}")


# ----------------------
# Flag parsing
# ----------------------
def parse_float_list(text: str) -> List[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise DomainError(f"expected comma-separated numbers, got {text!r}")


def parse_periods(text: str) -> List[int]:
    """'4' -> [4], '1,3' -> [1, 3], '1:4' -> [1, 2, 3, 4]."""
    try:
        if ":" in text:
            lo, hi = (int(t) for t in text.split(":"))
            return list(range(lo, hi + 1))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise DomainError(f"bad period list {text!r}")


def parse_beta_range(text: str) -> List[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"--beta-range expects lo:hi:step, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise DomainError(f"--beta-range expects numbers, got {text!r}")


def parse_complex(text: str) -> List[float]:
    """'re' or 're,im' -> [re, im]."""
    values = parse_float_list(text)
    if len(values) == 1:
        values.append(0.0)
    if len(values) != 2:
        raise DomainError(f"--z expects re[,im], got {text!r}")
    return values
