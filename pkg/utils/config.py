from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, FrozenSet, Mapping, Optional, Tuple

from dotenv import dotenv_values, load_dotenv

from utils.errors import ConfigError

load_dotenv()


def _int_env(var_name: str, default: int) -> int:
    """Convert env var to int without failing import."""
    raw = os.getenv(var_name)
    try:
        return int(raw) if raw is not None else default
    except (TypeError, ValueError):
        return default


def _bool_env(var_name: str, default: bool) -> bool:
    raw = os.getenv(var_name)
    if raw is None:
        return default
    return str(raw).strip().lower() not in {"0", "false", "no", ""}


def _list_env(var_name: str, default: Tuple[str, ...]) -> Tuple[str, ...]:
    raw = os.getenv(var_name)
    if not raw:
        return default
    return tuple(item.strip() for item in raw.split(",") if item.strip())


@dataclass(frozen=True)
class Settings:
    THREADS: int = max(1, _int_env("FRACTACKLE_THREADS", os.cpu_count() or 1))
    LOG_LEVEL: str = os.getenv("FRACTACKLE_LOG_LEVEL", "INFO").upper()
    DATA_DIR: str = os.getenv("FRACTACKLE_DATA_DIR", "")
    PROGRESS: bool = _bool_env("FRACTACKLE_PROGRESS", True)

    END_EVENTS: Tuple[str, ...] = _list_env(
        "FRACTACKLE_END_EVENTS",
        ("tackle", "out_of_bounds", "touchdown", "fumble", "qb_slide", "safety"),
    )
    RB_POSITIONS: Tuple[str, ...] = _list_env("FRACTACKLE_RB_POSITIONS", ("RB",))
    PLAYERS_PER_FRAME: int = _int_env("FRACTACKLE_PLAYERS_PER_FRAME", 22)
    SPLIT_WEEK: int = _int_env("FRACTACKLE_SPLIT_WEEK", 4)

    FIELD_LENGTH: float = 120.0
    FIELD_WIDTH: float = 160.0 / 3.0
    FRAME_RATE_HZ: float = 10.0


settings = Settings()


# =======================
# Run configuration
# =======================
_VALID_FORMATS = {"csv", "json"}
ALL_WEEKS: FrozenSet[int] = frozenset(range(1, 10))


def parse_weeks(raw: str) -> FrozenSet[int]:
    """Parse "1-9", "1,3,5" or "1-4,7" into a set of weeks in 1..9."""
    weeks: set[int] = set()
    for chunk in str(raw).split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            if "-" in chunk:
                lo, hi = (int(part) for part in chunk.split("-", 1))
                weeks.update(range(lo, hi + 1))
            else:
                weeks.add(int(chunk))
        except ValueError as exc:
            raise ConfigError(f"Invalid week specification: {raw!r}") from exc
    if not weeks:
        raise ConfigError("Week specification is empty")
    bad = sorted(w for w in weeks if w not in ALL_WEEKS)
    if bad:
        raise ConfigError(f"Weeks must be within 1-9, got {bad}")
    return frozenset(weeks)


@dataclass(frozen=True)
class RunConfig:
    data_dir: Path = Path(settings.DATA_DIR or ".")
    weeks: FrozenSet[int] = field(default=ALL_WEEKS)
    threshold_d: Optional[float] = None
    percentile: float = 0.95
    epsilon_peak: float = 1e-6
    min_plays: int = 0
    output_format: str = "csv"

    def __post_init__(self) -> None:
        if not 0.0 < self.percentile < 1.0:
            raise ConfigError(f"percentile must be strictly between 0 and 1, got {self.percentile}")
        if self.threshold_d is not None and not self.threshold_d > 0.0:
            raise ConfigError(f"thresholdD must be > 0 when set, got {self.threshold_d}")
        if self.epsilon_peak < 0.0:
            raise ConfigError("epsilonPeak must be >= 0")
        if self.min_plays < 0:
            raise ConfigError("minPlays must be >= 0")
        if self.output_format not in _VALID_FORMATS:
            raise ConfigError(f"outputFormat must be one of {sorted(_VALID_FORMATS)}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dataDir": str(self.data_dir),
            "weeks": sorted(self.weeks),
            "thresholdD": self.threshold_d,
            "percentile": self.percentile,
            "epsilonPeak": self.epsilon_peak,
            "minPlays": self.min_plays,
            "outputFormat": self.output_format,
        }

    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


# chiavi del file KEY=value -> campo di RunConfig
_FILE_KEYS = {
    "DATA_DIR": "data_dir",
    "WEEKS": "weeks",
    "THRESHOLD_D": "threshold_d",
    "PERCENTILE": "percentile",
    "EPSILON_PEAK": "epsilon_peak",
    "MIN_PLAYS": "min_plays",
    "OUTPUT_FORMAT": "output_format",
}


def _coerce(name: str, raw: Any) -> Any:
    if raw is None or (isinstance(raw, str) and not raw.strip()):
        return None
    try:
        if name == "data_dir":
            return Path(str(raw)).expanduser()
        if name == "weeks":
            return raw if isinstance(raw, frozenset) else parse_weeks(str(raw))
        if name in {"threshold_d", "percentile", "epsilon_peak"}:
            return float(raw)
        if name == "min_plays":
            return int(raw)
        if name == "output_format":
            return str(raw).strip().lower()
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"Invalid value for {name}: {raw!r}") from exc
    return raw


def load_run_config(
    config_path: Optional[str | Path] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """Resolve a RunConfig with precedence flags > config file > defaults."""
    values: Dict[str, Any] = {}

    if config_path is not None:
        path = Path(config_path).expanduser()
        if not path.is_file():
            raise ConfigError(f"Config file '{path}' not found")
        for key, raw in dotenv_values(path).items():
            name = _FILE_KEYS.get(key.strip().upper())
            if name is None:
                raise ConfigError(f"Unknown config key {key!r} in '{path}'")
            coerced = _coerce(name, raw)
            if coerced is not None:
                values[name] = coerced

    for name, raw in (overrides or {}).items():
        if name not in _FILE_KEYS.values():
            raise ConfigError(f"Unknown override {name!r}")
        coerced = _coerce(name, raw)
        if coerced is not None:
            values[name] = coerced

    return RunConfig(**values)


__all__ = [
    "Settings",
    "settings",
    "RunConfig",
    "ALL_WEEKS",
    "parse_weeks",
    "load_run_config",
]
