"""INI experiment configuration.

Example::

    [lattice]
    L = 12
    d = 2

    [partition]
    kind = annulus        ; or disk
    origin = 1, 1
    outer = 9             ; optional
    thickness = 2         ; optional

    [strings]
    count = 100
    depth = 6             ; maximum depth; string i has depth 1 + i % depth
    shape = mixed         ; plaquette | disk | mixed
    focus = boundary      ; all | boundary
    seed = 7
    files =               ; optional comma-separated string files

    [oracle]
    kind = group          ; group | geometric | statevector | constant1
    regions = 30          ; oracle suite: random regions
    strings = 10          ; oracle suite: random depth-2 strings

    [mc]
    samples = 10000
    seed = 11

    [budget]
    term_cap = 262144
    max_amplitudes = 1048576

    [output]
    csv = results.csv
    timing = false
"""

import configparser
import hashlib
from dataclasses import asdict, dataclass, field
from pathlib import Path

from ..errors import ConfigurationError
from ..lattice import LatticeConfig
from ..oracle import DEFAULT_MAX_AMPLITUDES
from ..swap_dynamics import DEFAULT_TERM_CAP

ORACLES = ("group", "geometric", "statevector", "constant1")


@dataclass(frozen=True)
class PartitionSpec:
    kind: str = "annulus"
    origin: tuple[int, int] = (1, 1)
    outer: int | None = None
    thickness: int | None = None


@dataclass(frozen=True)
class StringSpec:
    count: int = 0
    depth: int = 3
    shape: str = "plaquette"
    focus: str = "all"
    seed: int = 0
    files: tuple[str, ...] = ()


@dataclass(frozen=True)
class ExperimentConfig:
    lattice: LatticeConfig
    partition: PartitionSpec = field(default_factory=PartitionSpec)
    strings: StringSpec = field(default_factory=StringSpec)
    oracle: str = "group"
    oracle_regions: int = 30
    oracle_strings: int = 10
    samples: int = 10_000
    mc_seed: int = 0
    term_cap: int = DEFAULT_TERM_CAP
    max_amplitudes: int = DEFAULT_MAX_AMPLITUDES
    csv: str | None = None
    timing: bool = False
    base_dir: str = field(default=".", compare=False)

    def config_hash(self) -> str:
        payload = asdict(self)
        payload.pop("base_dir")
        payload.pop("csv")
        return hashlib.sha256(repr(sorted(payload.items())).encode()).hexdigest()[:12]

    def resolve(self, path: str) -> Path:
        p = Path(path)
        return p if p.is_absolute() else Path(self.base_dir) / p


def _get(cp, section, key, conv, default):
    if not cp.has_option(section, key):
        return default
    raw = cp.get(section, key).strip()
    if raw == "":
        return default
    try:
        return conv(raw)
    except ValueError as exc:
        raise ConfigurationError(f"bad value for {section}.{key}: {raw!r} ({exc})") from None


def _pair(raw: str) -> tuple[int, int]:
    parts = [int(p) for p in raw.replace(",", " ").split()]
    if len(parts) != 2:
        raise ValueError("expected two integers")
    return parts[0], parts[1]


def _bool(raw: str) -> bool:
    low = raw.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected a boolean")


def _choice(options):
    def conv(raw):
        if raw not in options:
            raise ValueError(f"expected one of {options}")
        return raw
    return conv


_KNOWN = {
    "lattice": {"l", "d"},
    "partition": {"kind", "origin", "outer", "thickness"},
    "strings": {"count", "depth", "shape", "focus", "seed", "files"},
    "oracle": {"kind", "regions", "strings"},
    "mc": {"samples", "seed"},
    "budget": {"term_cap", "max_amplitudes"},
    "output": {"csv", "timing"},
}


def parse_config(text: str, base_dir: str = ".") -> ExperimentConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed config: {exc}") from None
    for section in cp.sections():
        if section not in _KNOWN:
            raise ConfigurationError(f"unknown config section [{section}]")
        for key in cp.options(section):
            if key not in _KNOWN[section]:
                raise ConfigurationError(f"unknown config key {section}.{key}")
    if not cp.has_option("lattice", "L") or not cp.has_option("lattice", "d"):
        raise ConfigurationError("config needs lattice.L and lattice.d")
    lattice = LatticeConfig(_get(cp, "lattice", "L", int, None), _get(cp, "lattice", "d", int, None))
    part = PartitionSpec(
        kind=_get(cp, "partition", "kind", _choice(("annulus", "disk")), "annulus"),
        origin=_get(cp, "partition", "origin", _pair, (1, 1)),
        outer=_get(cp, "partition", "outer", int, None),
        thickness=_get(cp, "partition", "thickness", int, None),
    )
    files = _get(cp, "strings", "files",
                 lambda raw: tuple(f.strip() for f in raw.split(",") if f.strip()), ())
    strings = StringSpec(
        count=_get(cp, "strings", "count", int, 0),
        depth=_get(cp, "strings", "depth", int, 3),
        shape=_get(cp, "strings", "shape", _choice(("plaquette", "disk", "mixed")), "plaquette"),
        focus=_get(cp, "strings", "focus", _choice(("all", "boundary")), "all"),
        seed=_get(cp, "strings", "seed", int, 0),
        files=files,
    )
    if strings.count < 0 or strings.depth < 0:
        raise ConfigurationError("strings.count and strings.depth must be >= 0")
    cfg = ExperimentConfig(
        lattice=lattice,
        partition=part,
        strings=strings,
        oracle=_get(cp, "oracle", "kind", _choice(ORACLES), "group"),
        oracle_regions=_get(cp, "oracle", "regions", int, 30),
        oracle_strings=_get(cp, "oracle", "strings", int, 10),
        samples=_get(cp, "mc", "samples", int, 10_000),
        mc_seed=_get(cp, "mc", "seed", int, 0),
        term_cap=_get(cp, "budget", "term_cap", int, DEFAULT_TERM_CAP),
        max_amplitudes=_get(cp, "budget", "max_amplitudes", int, DEFAULT_MAX_AMPLITUDES),
        csv=_get(cp, "output", "csv", str, None),
        timing=_get(cp, "output", "timing", _bool, False),
        base_dir=base_dir,
    )
    if cfg.samples < 1 or cfg.term_cap < 1 or cfg.max_amplitudes < 1:
        raise ConfigurationError("mc.samples, budget.term_cap and budget.max_amplitudes must be positive")
    return cfg


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, base_dir=str(path.parent))
