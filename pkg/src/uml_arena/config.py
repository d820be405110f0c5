"""Plain ``key = value`` run configuration.

One key per line, ``#`` starts a comment, values may be wrapped in double
quotes.  Every error names the offending line.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Optional

from .aixi import AlmostConsistent, Fixed, Moving
from .arena import AixiSpec, FoeSpec, MatchConfig, PlayerSpec, ScriptedSpec
from .bayes import DEFAULT_SUPPORT, parse_support
from .foe import BLOCK_EXPONENTS, N_EXPERTS
from .games import BUILTIN_GAMES, MatrixGame, builtin_game, format_matrix, parse_matrix
from .opponents import OPPONENT_IDS

AGENT_IDS = ("aixi", "foe")
PLAYER_IDS = AGENT_IDS + OPPONENT_IDS
HORIZONS = ("fixed", "moving", "consistent")


class ConfigError(ValueError):
    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class RunConfig:
    game: str
    row: str
    col: str
    steps: int
    runs: int
    seed: int = 0
    r1: Optional[tuple] = None
    r2: Optional[tuple] = None
    variant: str = "consistent"
    depth: int = 8
    depth_b: Optional[int] = None
    loss_support: tuple[int, ...] = DEFAULT_SUPPORT
    foe_variant: str = "faster"
    mc_samples: int = 1000
    block_schedule: str = "sim024"
    prior: Optional[tuple[float, ...]] = None
    prior_sign: str = "penalty"
    out: Optional[str] = None

    def matrix_game(self) -> MatrixGame:
        if self.game == "custom":
            return MatrixGame("custom", self.r1, self.r2)
        return builtin_game(self.game)

    def horizon(self, seat: int):
        d = self.depth if seat == 0 or self.depth_b is None else self.depth_b
        if self.variant == "fixed":
            return Fixed(d)
        if self.variant == "moving":
            return Moving(d)
        return AlmostConsistent(d_max=d)

    def player_spec(self, seat: int) -> PlayerSpec:
        ident = self.row if seat == 0 else self.col
        if ident == "aixi":
            return AixiSpec(self.horizon(seat), self.loss_support)
        if ident == "foe":
            return FoeSpec(self.foe_variant, self.mc_samples, self.block_schedule, self.prior, self.prior_sign)
        return ScriptedSpec(ident)

    def match_config(self) -> MatchConfig:
        return MatchConfig(
            self.matrix_game(), self.player_spec(0), self.player_spec(1), self.steps, self.runs, self.seed
        )


KEYS = tuple(f.name for f in fields(RunConfig))


def _int(text: str, lo: Optional[int] = None, hi: Optional[int] = None) -> int:
    try:
        v = int(text)
    except ValueError:
        raise ValueError(f"expected an integer, got {text!r}") from None
    if lo is not None and v < lo:
        raise ValueError(f"must be >= {lo}, got {v}")
    if hi is not None and v > hi:
        raise ValueError(f"must be <= {hi}, got {v}")
    return v


def _choice(text: str, options) -> str:
    if text not in options:
        raise ValueError(f"unknown value {text!r}; valid: {', '.join(options)}")
    return text


def _prior(text: str):
    if text == "uniform":
        return None
    try:
        w = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ValueError(f"prior must be 'uniform' or {N_EXPERTS} comma-separated weights") from None
    if len(w) != N_EXPERTS:
        raise ValueError(f"prior needs {N_EXPERTS} weights, got {len(w)}")
    if any(not x > 0 for x in w) or sum(w) > 1 + 1e-9:
        raise ValueError("prior weights must be positive and sum to at most 1")
    return w


def _matrix(text: str):
    m = parse_matrix(text)
    MatrixGame("custom", m, m)  # range check
    return m


_PARSERS = {
    "game": lambda v: _choice(v, tuple(BUILTIN_GAMES) + ("custom",)),
    "row": lambda v: _choice(v, PLAYER_IDS),
    "col": lambda v: _choice(v, PLAYER_IDS),
    "steps": lambda v: _int(v, 1),
    "runs": lambda v: _int(v, 1),
    "seed": lambda v: _int(v, 0, 2**64 - 1),
    "r1": _matrix,
    "r2": _matrix,
    "variant": lambda v: _choice(v, HORIZONS),
    "depth": lambda v: _int(v, 1),
    "depth_b": lambda v: _int(v, 1),
    "loss_support": parse_support,
    "foe_variant": lambda v: _choice(v, ("basic", "faster")),
    "mc_samples": lambda v: _int(v, 1),
    "block_schedule": lambda v: _choice(v, tuple(BLOCK_EXPONENTS)),
    "prior": _prior,
    "prior_sign": lambda v: _choice(v, ("paper", "penalty")),
    "out": lambda v: v,
}


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration, filling in default steps and runs."""
    values: dict = {}
    where: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected key=value, got {raw.strip()!r}", lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if len(value) >= 2 and value[0] == value[-1] == '"':
            value = value[1:-1].strip()
        if key not in _PARSERS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r} (first on line {where[key]})", lineno)
        try:
            values[key] = _PARSERS[key](value)
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"{key}: {exc}", lineno) from None
        where[key] = lineno

    if "game" not in values:
        raise ConfigError("missing required key 'game'")
    custom = values["game"] == "custom"
    for key in ("r1", "r2"):
        if custom and key not in values:
            raise ConfigError(f"game=custom needs {key}", where["game"])
        if not custom and key in values:
            raise ConfigError(f"{key} is only allowed with game=custom", where[key])
    for key in ("row", "col"):
        if key not in values:
            raise ConfigError(f"missing required key {key!r}")
    if values.get("variant", "consistent") == "consistent":
        for key in ("depth", "depth_b"):
            if key in values and values[key] < 2:
                raise ConfigError(f"{key}: the consistent horizon needs depth >= 2", where[key])

    if "steps" not in values or "runs" not in values:
        probe = RunConfig(**{"steps": 1, "runs": 1, **values})
        defaults = MatchConfig(probe.matrix_game(), probe.player_spec(0), probe.player_spec(1))
        values.setdefault("steps", defaults.steps)
        values.setdefault("runs", defaults.runs)
    return RunConfig(**values)


def _format(key: str, value) -> str:
    if key in ("r1", "r2"):
        return f'"{format_matrix(value)}"'
    if key == "loss_support":
        return ",".join(str(v) for v in value)
    if key == "prior":
        return "uniform" if value is None else ",".join(repr(float(v)) for v in value)
    return str(value)


def serialize(cfg: RunConfig) -> str:
    """Inverse of :func:`parse_config`; optional keys left unset are omitted."""
    lines = []
    for key in KEYS:
        value = getattr(cfg, key)
        if value is None and key != "prior":
            continue
        lines.append(f"{key} = {_format(key, value)}")
    return "\n".join(lines) + "\n"


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    return parse_config(text)


def with_overrides(cfg: RunConfig, **kw) -> RunConfig:
    """Replace fields whose override is not None."""
    return replace(cfg, **{k: v for k, v in kw.items() if v is not None})

