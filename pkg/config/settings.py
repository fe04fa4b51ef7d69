import os
from dataclasses import dataclass, asdict
from pathlib import Path
from typing import Dict, Any, Optional

import psutil
import yaml

DEFAULTS_FILE = Path(__file__).with_name("defaults.yaml")
ENV_PREFIX = "PRL_"


def _default_threads() -> int:
    return psutil.cpu_count(logical=False) or 1


@dataclass
class SieveConfig:
    global_bound: int = 2 ** 31
    extended_bound: int = 2 ** 37
    segment_length: int = 2 ** 18
    threads: int = 1
    checkpoint_path: Optional[str] = None
    checkpoint_stride: int = 10 ** 7
    verify_checkpoints: bool = False


@dataclass
class PracticalConfig:
    practical_bound: int = 10 ** 8
    t_growth_factor: float = 1.5
    t_offset: int = 100


@dataclass
class ReportConfig:
    tier: str = "quick"
    output_format: str = "text"


@dataclass
class LoggingConfig:
    log_level: str = "INFO"
    log_file: Optional[str] = None


# environment variable -> (section, field, converter)
ENV_FIELDS = {
    "BOUND": ("sieve", "global_bound", int),
    "EXTENDED_BOUND": ("sieve", "extended_bound", int),
    "SEGMENT_LENGTH": ("sieve", "segment_length", int),
    "THREADS": ("sieve", "threads", int),
    "CHECKPOINT": ("sieve", "checkpoint_path", str),
    "CHECKPOINT_STRIDE": ("sieve", "checkpoint_stride", int),
    "VERIFY_CHECKPOINTS": ("sieve", "verify_checkpoints", lambda v: v.lower() in ("1", "true", "yes")),
    "PRACTICAL_BOUND": ("practical", "practical_bound", int),
    "FORMAT": ("report", "output_format", str),
    "TIER": ("report", "tier", str),
    "LOG_LEVEL": ("logging", "log_level", str),
    "LOG_FILE": ("logging", "log_file", str),
}


class Config:
    def __init__(self, defaults_file: Optional[Path] = DEFAULTS_FILE, environ: Optional[Dict[str, str]] = None):
        self.sieve = SieveConfig(threads=_default_threads())
        self.practical = PracticalConfig()
        self.report = ReportConfig()
        self.logging = LoggingConfig()

        if defaults_file is not None:
            self._load_from_yaml(defaults_file)
        # Load from environment variables
        self._load_from_env(os.environ if environ is None else environ)

    def _load_from_yaml(self, path: Path):
        if not path.exists():
            return
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh) or {}
        for section_name, values in data.items():
            section = getattr(self, section_name, None)
            if section is None or not isinstance(values, dict):
                continue
            for key, value in values.items():
                if hasattr(section, key):
                    setattr(section, key, value)

    def _load_from_env(self, environ):
        for suffix, (section_name, field_name, convert) in ENV_FIELDS.items():
            raw = environ.get(ENV_PREFIX + suffix)
            if raw is None or raw == "":
                continue
            try:
                value = convert(raw)
            except ValueError:
                raise ValueError(f"{ENV_PREFIX}{suffix}: cannot parse {raw!r}")
            setattr(getattr(self, section_name), field_name, value)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'sieve': asdict(self.sieve),
            'practical': asdict(self.practical),
            'report': asdict(self.report),
            'logging': asdict(self.logging),
        }


# Global config instance
config = Config()
