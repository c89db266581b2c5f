"""Run configuration: a flat key=value file, CLI-overridable.

The master seed never feeds an RNG directly; every randomized stage
derives its own seed from (master seed, stage label), so adding or
removing one measure never perturbs another's randomness. The config
hash covers exactly the fields that can change computed results.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .errors import ConfigError

ALL_MEASURES = ("degree", "harmonic", "pagerank", "kcore", "ltc", "gdd", "shapley", "tc")

#: Config fields that do not influence computed values.
_NON_SEMANTIC = ("output_dir", "workers", "formats", "plot_data")


@dataclass
class RunConfig:
    # inputs
    edges: str | None = None
    adoption: str | None = None
    dataset: str | None = None
    delimiter: str | None = None
    directed: bool = False
    header: bool = False
    date_mode: str = "days"
    kickoff: str | None = None
    # measures
    measures: tuple = ALL_MEASURES
    damping: float = 0.8
    pagerank_tol: float = 1e-10
    pagerank_max_iter: int = 200
    gdd_p: float = 0.05
    gdd_q: int = 1000
    gdd_variant: str = "generalized"
    ltc_theta: float = 0.7
    tc_grid: tuple = tuple(round(0.1 * i, 1) for i in range(11))
    harmonic_mode: str = "auto"
    harmonic_pivots: int = 2000
    # analysis
    top_k: int = 1000
    cutoffs: tuple = (2.5, 16.0, 50.0, 84.0)
    reach_exclude: str = "reachers"
    scores_dir: str | None = None
    # simulation
    sim_model: str = "lt"
    sim_p: float = 0.1
    sim_ic_preset: str = "uniform"
    sim_thresholds: str = "multiplier"
    sim_theta: float = 0.7
    sim_seeds: str | None = None
    sim_seeds_file: str | None = None
    # run
    seed: int = 0
    workers: int = 0
    output_dir: str = "out"
    formats: tuple = ("csv", "json")
    plot_data: bool = False

    def validate(self) -> None:
        def fail(fld, msg):
            raise ConfigError(msg, field=fld)

        for name in self.measures:
            if name not in ALL_MEASURES:
                fail("measures", f"unknown measure {name!r}; valid: {', '.join(ALL_MEASURES)}")
        if not 0.0 < self.damping < 1.0:
            fail("damping", f"{self.damping} outside (0, 1)")
        if self.pagerank_tol <= 0:
            fail("pagerank_tol", "must be > 0")
        if self.pagerank_max_iter < 1:
            fail("pagerank_max_iter", "must be >= 1")
        if not 0.0 < self.gdd_p <= 1.0:
            fail("gdd_p", f"{self.gdd_p} outside (0, 1]")
        if self.gdd_q < 1:
            fail("gdd_q", "must be >= 1")
        if self.gdd_variant not in ("degree", "classic", "generalized"):
            fail("gdd_variant", f"unknown variant {self.gdd_variant!r}")
        if not 0.0 < self.ltc_theta <= 1.0:
            fail("ltc_theta", f"{self.ltc_theta} outside (0, 1]")
        if not self.tc_grid:
            fail("tc_grid", "empty grid")
        if any(not 0.0 <= a <= 1.0 for a in self.tc_grid):
            fail("tc_grid", "values must lie in [0, 1]")
        if any(b <= a for a, b in zip(self.tc_grid, self.tc_grid[1:])):
            fail("tc_grid", "must be strictly ascending")
        if self.harmonic_mode not in ("auto", "exact", "sampled"):
            fail("harmonic_mode", f"unknown mode {self.harmonic_mode!r}")
        if self.harmonic_pivots < 1:
            fail("harmonic_pivots", "must be >= 1")
        if self.top_k < 1:
            fail("top_k", "must be >= 1")
        if len(self.cutoffs) != 4:
            fail("cutoffs", "need exactly 4 percentile cutoffs")
        if any(not 0.0 < c < 100.0 for c in self.cutoffs):
            fail("cutoffs", "must lie strictly inside (0, 100)")
        if any(b <= a for a, b in zip(self.cutoffs, self.cutoffs[1:])):
            fail("cutoffs", "must be strictly ascending")
        if self.reach_exclude not in ("reachers", "members"):
            fail("reach_exclude", f"unknown mode {self.reach_exclude!r}")
        if self.sim_model not in ("lt", "ic"):
            fail("sim_model", f"unknown model {self.sim_model!r}")
        if not 0.0 <= self.sim_p <= 1.0:
            fail("sim_p", f"{self.sim_p} outside [0, 1]")
        if self.sim_ic_preset not in ("uniform", "weighted-cascade", "trivalency"):
            fail("sim_ic_preset", f"unknown preset {self.sim_ic_preset!r}")
        if self.sim_thresholds not in ("multiplier", "uniform-random", "class-aware"):
            fail("sim_thresholds", f"unknown preset {self.sim_thresholds!r}")
        if not 0.0 < self.sim_theta <= 1.0:
            fail("sim_theta", f"{self.sim_theta} outside (0, 1]")
        if self.date_mode not in ("days", "iso"):
            fail("date_mode", f"unknown mode {self.date_mode!r}")
        if self.date_mode == "iso" and not self.kickoff:
            fail("kickoff", "required when date_mode is iso")
        if self.workers < 0:
            fail("workers", "must be >= 0")
        for f in self.formats:
            if f not in ("csv", "json"):
                fail("formats", f"unknown format {f!r}")

    def semantic_dict(self) -> dict:
        d = asdict(self)
        for key in _NON_SEMANTIC:
            d.pop(key, None)
        return d

    def config_hash(self) -> str:
        payload = json.dumps(self.semantic_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


_LIST_FIELDS = {"measures", "formats"}
_FLOAT_LIST_FIELDS = {"tc_grid", "cutoffs"}
_BOOL_FIELDS = {"directed", "header", "plot_data"}


def _coerce(name: str, raw: str, target_type):
    raw = raw.strip()
    if name in _LIST_FIELDS:
        return tuple(x.strip() for x in raw.split(",") if x.strip())
    if name in _FLOAT_LIST_FIELDS:
        try:
            return tuple(float(x) for x in raw.split(",") if x.strip())
        except ValueError:
            raise ConfigError(f"cannot parse float list {raw!r}", field=name) from None
    if name in _BOOL_FIELDS:
        low = raw.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"cannot parse boolean {raw!r}", field=name)
    if target_type is int:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"cannot parse integer {raw!r}", field=name) from None
    if target_type is float:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"cannot parse float {raw!r}", field=name) from None
    return raw


def parse_config_file(path) -> dict:
    """Read ``key = value`` lines into a typed dict of RunConfig fields."""
    known = {f.name: f for f in fields(RunConfig)}
    type_of = {
        "damping": float, "pagerank_tol": float, "gdd_p": float, "ltc_theta": float,
        "sim_p": float, "sim_theta": float,
        "pagerank_max_iter": int, "gdd_q": int, "harmonic_pivots": int,
        "top_k": int, "seed": int, "workers": int,
    }
    out: dict = {}
    text = Path(path).read_text(encoding="utf-8")
    for i, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {i}: expected key = value, got {stripped!r}")
        key, _, value = stripped.partition("=")
        key = key.strip().replace("-", "_")
        if key not in known:
            raise ConfigError(f"line {i}: unknown key {key!r}", field=key)
        out[key] = _coerce(key, value, type_of.get(key, str))
    return out


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    """Defaults, then the config file, then non-None overrides."""
    values: dict = {}
    if path is not None:
        values.update(parse_config_file(path))
    if overrides:
        values.update({k: v for k, v in overrides.items() if v is not None})
    cfg = replace(RunConfig(), **values)
    cfg.validate()
    return cfg


def derive_seed(master: int, stage: str) -> int:
    """Stable per-stage RNG seed from the master seed and a stage label."""
    digest = hashlib.sha256(f"{master}\x1f{stage}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") % (2**63)
