"""Strict key=value run configuration.

Grammar: one `key = value` per line, `#` starts a comment, blank lines
ignored.  Unknown keys, duplicate keys and out-of-range values are fatal;
silent typos in physics parameters are the dominant user error, so there
is no lenient mode.
"""

from dataclasses import dataclass, fields

from .dynamics import ModelParams
from .errors import ConfigError
from .integrator import IntegratorConfig
from .ladder import LadderParams
from .scenarios import (
    PAIR_GENERATION_PARAMS,
    PAIR_GENERATION_T_END,
    TRANSFER_PARAMS,
    TRANSFER_T_END,
)

SCENARIOS = ("pair-generation", "transfer", "ladder-compare", "custom")

MODEL_KEYS = tuple(f.name for f in fields(ModelParams))
INTEGRATOR_KEYS = tuple(f.name for f in fields(IntegratorConfig))
LADDER_KEYS = ("g", "delta_a", "delta_b")
OTHER_KEYS = ("scenario", "t_end", "out_dir", "format", "seed", "c0")

ALL_KEYS = MODEL_KEYS + INTEGRATOR_KEYS + LADDER_KEYS + OTHER_KEYS

FORMATS = ("csv", "json")

# Default cascade for the ladder-compare scenario: gaps 9 and 11 around a
# photon at 10 give Delta = 1, so g = 0.01 sits at g/Delta = 1e-2.
LADDER_DEFAULTS = {"g": 0.01, "delta_a": 9.0, "delta_b": 11.0}

CUSTOM_C0_DEFAULT = (1 + 0j, 0j, 0j, 0j)


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run: scenario, physics, integrator and output."""

    scenario: str
    model: ModelParams
    integrator: IntegratorConfig
    t_end: float
    ladder: LadderParams | None = None
    c0: tuple = CUSTOM_C0_DEFAULT
    out_dir: str | None = None
    formats: tuple = FORMATS
    seed: int = 0

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        if self.t_end <= 0:
            raise ValueError("t_end must be positive")

    def to_json(self):
        data = {
            "scenario": self.scenario,
            "t_end": self.t_end,
            "formats": list(self.formats),
            "seed": self.seed,
            "model": {k: getattr(self.model, k) for k in MODEL_KEYS},
            "integrator": {
                k: getattr(self.integrator, k) for k in INTEGRATOR_KEYS
            },
        }
        if self.integrator.max_step == float("inf"):
            data["integrator"]["max_step"] = "inf"
        if self.scenario == "ladder-compare" and self.ladder is not None:
            data["ladder"] = {
                "g": self.ladder.g,
                "delta_a": self.ladder.delta_a,
                "delta_b": self.ladder.delta_b,
            }
        if self.scenario == "custom":
            data["c0"] = [[z.real, z.imag] for z in self.c0]
        return data


def _tokenize(text):
    """Yield (line_number, key, raw_value) triples from the document."""
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", line=n)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError("missing key before '='", line=n)
        if not value:
            raise ConfigError(f"missing value for key {key!r}", line=n)
        yield n, key, value


def _collect(pairs):
    seen = {}
    for n, key, value in pairs:
        if key not in ALL_KEYS:
            raise ConfigError(f"unknown key {key!r}", line=n)
        if key in seen:
            raise ConfigError(f"duplicate key {key!r}", line=n)
        seen[key] = (value, n)
    return seen


def _parse_float(key, value, n):
    try:
        x = float(value)
    except ValueError:
        raise ConfigError(f"key {key!r}: {value!r} is not a number", line=n)
    return x


def _parse_c0(value, n):
    parts = [s.strip() for s in value.split(",")]
    if len(parts) != 4:
        raise ConfigError(
            f"c0 must be 4 comma-separated amplitudes, got {len(parts)}", line=n
        )
    out = []
    for s in parts:
        try:
            out.append(complex(s))
        except ValueError:
            raise ConfigError(f"c0: {s!r} is not a complex number", line=n)
    return tuple(out)


def _rate_relation(scenario, raw, model_kwargs):
    """Apply the scenario's printed chirp-rate relation.

    Pair generation runs both levels at the same rate (v1 = v2); the
    transfer protocol doubles the rate of the rising level (v1 = 2 v2).
    Conflicting explicit values are fatal.
    """
    has_v1 = "v1" in model_kwargs
    has_v2 = "v2" in model_kwargs
    if scenario == "pair-generation":
        if has_v1 and has_v2:
            if model_kwargs["v1"] != model_kwargs["v2"]:
                raise ConfigError(
                    "pair-generation requires v1 = v2; "
                    f"got v1={model_kwargs['v1']:g}, v2={model_kwargs['v2']:g}",
                    line=raw["v1"][1],
                )
        elif has_v1:
            model_kwargs["v2"] = model_kwargs["v1"]
        elif has_v2:
            model_kwargs["v1"] = model_kwargs["v2"]
    elif scenario == "transfer":
        if has_v1 and has_v2:
            if model_kwargs["v1"] != 2.0 * model_kwargs["v2"]:
                raise ConfigError(
                    "transfer requires v1 = 2 v2; "
                    f"got v1={model_kwargs['v1']:g}, v2={model_kwargs['v2']:g}",
                    line=raw["v1"][1],
                )
        elif has_v1:
            model_kwargs["v2"] = 0.5 * model_kwargs["v1"]
        elif has_v2:
            model_kwargs["v1"] = 2.0 * model_kwargs["v2"]


def _scenario_defaults(scenario):
    if scenario == "pair-generation":
        return PAIR_GENERATION_PARAMS, PAIR_GENERATION_T_END
    if scenario == "transfer":
        return TRANSFER_PARAMS, TRANSFER_T_END
    return ModelParams(), 100.0


def parse_config(text, overrides=()):
    """Parse a configuration document into a validated RunConfig.

    `overrides` is an iterable of "key=value" strings applied after the
    document (command-line --set flags); they replace document values.
    """
    raw = _collect(_tokenize(text))
    for i, item in enumerate(overrides, start=1):
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value", line=0)
        key, _, value = item.partition("=")
        key, value = key.strip(), value.strip()
        if key not in ALL_KEYS:
            raise ConfigError(f"unknown key {key!r} (override {i})", line=0)
        raw[key] = (value, raw.get(key, (None, 0))[1])

    scenario = "pair-generation"
    if "scenario" in raw:
        value, n = raw["scenario"]
        if value not in SCENARIOS:
            raise ConfigError(
                f"scenario must be one of {', '.join(SCENARIOS)}; got {value!r}",
                line=n,
            )
        scenario = value

    model_kwargs = {}
    for key in MODEL_KEYS:
        if key in raw:
            value, n = raw[key]
            model_kwargs[key] = _parse_float(key, value, n)
    _rate_relation(scenario, raw, model_kwargs)

    integ_kwargs = {}
    for key in INTEGRATOR_KEYS:
        if key in raw:
            value, n = raw[key]
            if key == "max_steps":
                try:
                    integ_kwargs[key] = int(value)
                except ValueError:
                    raise ConfigError(
                        f"key 'max_steps': {value!r} is not an integer", line=n
                    )
            else:
                integ_kwargs[key] = _parse_float(key, value, n)

    defaults, default_t_end = _scenario_defaults(scenario)
    try:
        model = defaults.replace(**model_kwargs)
    except ValueError as e:
        raise ConfigError(str(e), line=0)
    try:
        integrator = IntegratorConfig(**integ_kwargs)
    except ValueError as e:
        raise ConfigError(str(e), line=0)

    t_end = default_t_end
    if "t_end" in raw:
        value, n = raw["t_end"]
        t_end = _parse_float("t_end", value, n)
        if t_end <= 0:
            raise ConfigError(f"t_end must be > 0, got {t_end:g}", line=n)

    ladder = None
    if scenario == "ladder-compare":
        kw = dict(LADDER_DEFAULTS)
        for key in LADDER_KEYS:
            if key in raw:
                value, n = raw[key]
                kw[key] = _parse_float(key, value, n)
        try:
            ladder = LadderParams.from_gaps(kw["g"], kw["delta_a"], kw["delta_b"])
        except ValueError as e:
            raise ConfigError(str(e), line=0)
    else:
        for key in LADDER_KEYS:
            if key in raw:
                raise ConfigError(
                    f"key {key!r} is only valid for scenario = ladder-compare",
                    line=raw[key][1],
                )

    c0 = CUSTOM_C0_DEFAULT
    if "c0" in raw:
        if scenario != "custom":
            raise ConfigError(
                "key 'c0' is only valid for scenario = custom", line=raw["c0"][1]
            )
        c0 = _parse_c0(*raw["c0"])

    out_dir = raw["out_dir"][0] if "out_dir" in raw else None

    formats = FORMATS
    if "format" in raw:
        value, n = raw["format"]
        parts = tuple(s.strip() for s in value.split(","))
        for s in parts:
            if s not in FORMATS:
                raise ConfigError(
                    f"format must be a comma list of csv, json; got {s!r}", line=n
                )
        formats = parts

    seed = 0
    if "seed" in raw:
        value, n = raw["seed"]
        try:
            seed = int(value)
        except ValueError:
            raise ConfigError(f"key 'seed': {value!r} is not an integer", line=n)

    try:
        return RunConfig(
            scenario=scenario,
            model=model,
            integrator=integrator,
            t_end=t_end,
            ladder=ladder,
            c0=c0,
            out_dir=out_dir,
            formats=formats,
            seed=seed,
        )
    except ValueError as e:
        raise ConfigError(str(e), line=0)
