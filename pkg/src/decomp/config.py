"""Run configuration: INI file, environment fallback and flag overrides.

Example file::

    [score]
    weights = 1, 1, 1, 1
    param_threshold = 4

    [render]
    palette = gray, yellow, purple, green, red
    format = json

    [output]
    dir = reports
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import DecompError, WeightError
from .metrics import DEFAULT_PARAM_THRESHOLD, DEFAULT_WEIGHTS, check_weights
from .report import DEFAULT_PALETTE

CONFIG_ENV = "DECOMP_CONFIG"
FORMATS = ("dot", "json", "md")


class ConfigError(DecompError):
    pass


@dataclass(frozen=True)
class Config:
    weights: tuple = DEFAULT_WEIGHTS
    param_threshold: int = DEFAULT_PARAM_THRESHOLD
    palette: tuple = DEFAULT_PALETTE
    output_dir: str = "."
    format: str = "json"

    def __post_init__(self):
        check_weights(self.weights)
        if self.param_threshold < 1:
            raise ConfigError("param_threshold must be at least 1")
        if not self.palette:
            raise ConfigError("palette must not be empty")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}")


def parse_weights(text: str) -> tuple:
    try:
        weights = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise WeightError(f"weights must be numbers: {text!r}") from None
    return check_weights(weights)


def _split_list(text: str) -> tuple:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def load_config(path=None) -> Config:
    """Read ``path``, else the file named by ``DECOMP_CONFIG``, else defaults."""
    if path is None:
        path = os.environ.get(CONFIG_ENV) or None
    if path is None:
        return Config()
    parser = configparser.ConfigParser()
    try:
        text = Path(path).read_text(encoding="utf-8")
        parser.read_string(text, source=str(path))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except (configparser.Error, UnicodeDecodeError) as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None

    fields = {}
    if parser.has_option("score", "weights"):
        fields["weights"] = parse_weights(parser.get("score", "weights"))
    if parser.has_option("score", "param_threshold"):
        try:
            fields["param_threshold"] = parser.getint("score", "param_threshold")
        except ValueError:
            raise ConfigError("param_threshold must be an integer") from None
    if parser.has_option("render", "palette"):
        fields["palette"] = _split_list(parser.get("render", "palette"))
    if parser.has_option("render", "format"):
        fields["format"] = parser.get("render", "format").strip()
    if parser.has_option("output", "dir"):
        fields["output_dir"] = parser.get("output", "dir").strip()
    return Config(**fields)


def with_overrides(config: Config, **flags) -> Config:
    """Apply command-line values that were actually given."""
    given = {k: v for k, v in flags.items() if v is not None}
    if "weights" in given and isinstance(given["weights"], str):
        given["weights"] = parse_weights(given["weights"])
    return replace(config, **given)
