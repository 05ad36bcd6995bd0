"""Line-oriented experiment configuration: `key = value`, `#` comments.

Unknown keys, malformed values, and missing required keys are reported as
parse errors naming the offending line. All defaults are documented in the
KEYS table (and surfaced by the CLI's --help).
"""

from dataclasses import dataclass, fields as dc_fields
from typing import Optional

from .errors import ParseError

EXPERIMENTS = ("dispersive-blowup", "duhamel-smoothing", "lp-blowup", "estimates-suite")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    # grid
    nx: int = 512
    ny: int = 512
    lx: float = 128.0
    ly: float = 128.0
    # solver
    frame: str = "symmetrized"
    k: int = 1
    dt: float = 2e-4
    horizon: Optional[float] = None  # default J + 0.5 (blow-up) or per experiment
    nonlinearity_constant: Optional[float] = None
    dealias_fraction: Optional[float] = None
    # blow-up datum
    j_terms: int = 3
    decay_c: float = 3.0
    spacing: float = 1.0
    scale: float = 1.0
    # probes
    window_radius: float = 8.0
    fit_band_lo: Optional[float] = None  # default: top resolved decade
    fit_band_hi: Optional[float] = None
    jump_h: Optional[float] = None  # default 2*dx
    # lp-blowup
    t_star: float = 1.0
    lp_variant: str = "full-plane"  # or "half-plane"
    series_step: float = 0.05
    # estimates-suite
    estimates_n: int = 512
    estimates_decay_n: int = 1024
    estimates_doublings: int = 3
    # bookkeeping
    seed: int = 0
    out: str = "out"


def _parse_bool(s):
    if s.lower() in ("true", "yes", "1"):
        return True
    if s.lower() in ("false", "no", "0"):
        return False
    raise ValueError(f"not a boolean: {s}")


_OPTIONAL_FLOATS = {
    "horizon", "nonlinearity_constant", "dealias_fraction", "jump_h",
    "fit_band_lo", "fit_band_hi",
}

# key -> python converter, derived from the dataclass
def _converters():
    conv = {}
    for f in dc_fields(ExperimentConfig):
        if f.name in _OPTIONAL_FLOATS:
            conv[f.name] = float
        elif f.type in (int, "int"):
            conv[f.name] = int
        elif f.type in (float, "float"):
            conv[f.name] = float
        else:
            conv[f.name] = str
    return conv


CONVERTERS = _converters()
REQUIRED = ("experiment",)


def parse_config(text, overrides=()):
    """Parse config text plus optional `key=value` override strings.

    Overrides are applied after the file and validated the same way; their
    "line numbers" in error messages are reported as override positions.
    """
    values = {}

    def absorb(key, raw, where):
        if key not in CONVERTERS:
            raise ParseError(f"{where}: unknown key {key!r}")
        try:
            values[key] = CONVERTERS[key](raw)
        except ValueError:
            raise ParseError(f"{where}: malformed value {raw!r} for key {key!r}")

    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ParseError(f"line {lineno}: expected 'key = value', got {line.strip()!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        absorb(key, raw, f"line {lineno}")

    for pos, item in enumerate(overrides, start=1):
        if "=" not in item:
            raise ParseError(f"override {pos}: expected 'key=value', got {item!r}")
        key, raw = (part.strip() for part in item.split("=", 1))
        absorb(key, raw, f"override {pos}")

    missing = [k for k in REQUIRED if k not in values]
    if missing:
        raise ParseError(f"missing required keys: {', '.join(missing)}")

    if values["experiment"] not in EXPERIMENTS:
        raise ParseError(
            f"unknown experiment {values['experiment']!r}; "
            f"expected one of {', '.join(EXPERIMENTS)}"
        )
    if ("fit_band_lo" in values) != ("fit_band_hi" in values):
        raise ParseError("fit_band_lo and fit_band_hi must be given together")
    return ExperimentConfig(**values)


def config_help():
    lines = ["config keys (key = value per line, # comments):"]
    for f in dc_fields(ExperimentConfig):
        default = "required" if f.name in REQUIRED else f"default {f.default!r}"
        lines.append(f"  {f.name:22s} {default}")
    return "\n".join(lines)
