from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

EXPERIMENTS = (
    "schatten-bound",
    "lemma31",
    "kn-roundtrip",
    "kn-magnitude",
    "norm-equivalence",
    "counterexample",
    "embedding",
    "frame-suite",
    "wilson-suite",
    "monotonicity",
)

MAX_DIM = 64
# experiments that materialize N^4 kernel STFT arrays
KERNEL_FULL_GRID = ("kn-magnitude", "norm-equivalence")
MAX_KERNEL_DIM = 32

_DEFAULTS = {
    "schatten-bound": dict(N=8, trials=20, p_grid=(1.0, 1.25, 1.5, 1.75, 2.0)),
    "lemma31": dict(N=8, trials=50, p_grid=(1.0, 1.5, 2.0)),
    "kn-roundtrip": dict(N=16, trials=5),
    "kn-magnitude": dict(N=8, trials=3),
    "norm-equivalence": dict(N=8, trials=50, p_grid=(1.0, 2.0)),
    "counterexample": dict(N=32, trials=4, M=4),
    "embedding": dict(N=8, trials=500, p_grid=(1.5,), s=1.0),
    "frame-suite": dict(N=16, trials=100),
    "wilson-suite": dict(N=32, trials=100, M=4),
    "monotonicity": dict(N=8, trials=500),
}


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 2)."""


@dataclass(frozen=True)
class ExperimentConfig:
    name: str
    N: int = 8
    trials: int = 10
    p_grid: tuple[float, ...] = (1.0, 2.0)
    s: float = 1.0
    seed: int = 0
    a: int = 2
    b: int = 2
    M: int = 4
    out: str | None = None
    format: str = "json"

    @classmethod
    def defaults(cls, name: str, **overrides) -> "ExperimentConfig":
        if name not in _DEFAULTS:
            raise ConfigError(f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")
        base = dict(_DEFAULTS[name])
        base.update({k: v for k, v in overrides.items() if v is not None})
        if "p_grid" in base:
            base["p_grid"] = tuple(float(p) for p in base["p_grid"])
        return cls(name=name, **base)

    def validate(self) -> "ExperimentConfig":
        if self.name not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.name!r}")
        if not 2 <= self.N <= MAX_DIM:
            raise ConfigError(f"N must lie in [2, {MAX_DIM}], got {self.N}")
        if self.name in KERNEL_FULL_GRID and self.N > MAX_KERNEL_DIM:
            raise ConfigError(f"{self.name} stores N^4 arrays; N must be <= {MAX_KERNEL_DIM}")
        if self.trials < 0:
            raise ConfigError("trials must be nonnegative")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if any(not (p >= 1) for p in self.p_grid):
            raise ConfigError(f"exponents must be >= 1, got {self.p_grid}")
        if self.name in ("schatten-bound", "lemma31") and any(p > 2 for p in self.p_grid):
            raise ConfigError("the Schatten frame bound is only asserted for p in [1, 2]")
        if self.name in ("schatten-bound", "lemma31", "frame-suite"):
            if self.a < 1 or self.b < 1 or self.N % self.a or self.N % self.b:
                raise ConfigError(f"lattice steps a={self.a}, b={self.b} must divide N={self.N}")
            if self.a * self.b > self.N:
                raise ConfigError("a * b > N: the lattice cannot carry a frame")
        if self.name in ("counterexample", "wilson-suite"):
            if self.M < 2 or self.N % (2 * self.M):
                raise ConfigError(f"Wilson bases need M >= 2 and 2M | N (N={self.N}, M={self.M})")
        if self.name == "embedding":
            if self.s < 0:
                raise ConfigError("embedding needs s >= 0")
            if any(p > 2 or math.isinf(p) for p in self.p_grid):
                raise ConfigError("embedding exponents must lie in [1, 2]")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.format!r}")
        return self

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("out")
        d["p_grid"] = list(self.p_grid)
        return d

    def with_(self, **kw) -> "ExperimentConfig":
        return replace(self, **kw)
