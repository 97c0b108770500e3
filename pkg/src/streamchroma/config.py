"""Run configuration with asymptotic-regime and desk-scale presets."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Dict, Optional

MODES = ("desk", "paper")


@dataclass(frozen=True)
class RunConfig:
    """All knobs of the pass and of the coloring pipeline.

    ``None`` means "use the mode default"; :meth:`resolve` fills these in
    once ``n`` and ``delta`` are known.  List rates are sampling
    probabilities per color of ``[delta-1]``.
    """

    mode: str = "desk"
    seed: int = 0
    epsilon: Optional[float] = None
    rho: Optional[int] = None
    alpha: Optional[float] = None
    eta: float = 0.5
    c_prime: int = 3
    t: int = 3
    p_RT: Optional[float] = None
    p_SG: Optional[float] = None
    p_ds: Optional[float] = None
    p_z: Optional[float] = None
    rate_L3: Optional[float] = None
    rate_L4: Optional[float] = None
    rate_L5: Optional[float] = None
    rate_L6: Optional[float] = None
    beta: float = 50.0
    holey_const: Optional[float] = None
    fallback_delta: Optional[int] = None
    retry_cap: int = 100
    check_duplicates: bool = False
    acd_mode: str = "estimate"
    flush_size: int = 4096
    strict_q1_slack: Optional[bool] = None
    rho_constant: float = 1.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.acd_mode not in ("estimate", "oracle"):
            raise ValueError("acd_mode must be 'estimate' or 'oracle'")

    def resolve(self, n: int, delta: int) -> "RunConfig":
        """Fill mode defaults for an instance with ``n`` vertices and max degree ``delta``."""
        d = max(int(delta), 2)
        logn = math.log(max(n, 2))
        if self.mode == "paper":
            eps = 1e-8 if self.epsilon is None else self.epsilon
            rho = self.rho if self.rho is not None else math.ceil(self.rho_constant * logn / eps ** 2)
            alpha = 150.0 if self.alpha is None else self.alpha
            defaults = dict(
                epsilon=eps, rho=rho, alpha=alpha,
                p_RT=0.1, p_SG=0.1, p_ds=1.0 / rho, p_z=0.1,
                rate_L3=min(1.0, rho / d), rate_L4=min(1.0, rho / d),
                rate_L5=min(1.0, rho ** 2 / d), rate_L6=min(1.0, rho ** 3 / d),
                holey_const=1e7,
                fallback_delta=int(math.ceil(2 * alpha * rho ** 3)),
                strict_q1_slack=True,
            )
        else:
            rho = 4 if self.rho is None else self.rho
            defaults = dict(
                epsilon=0.85, rho=rho, alpha=1.0,
                p_RT=0.5, p_SG=0.5, p_ds=0.5, p_z=0.5,
                rate_L3=0.5, rate_L4=0.6, rate_L5=0.75, rate_L6=1.0,
                holey_const=0.125,
                fallback_delta=12,
                strict_q1_slack=False,
            )
        vals = {}
        for k, v in defaults.items():
            cur = getattr(self, k)
            vals[k] = v if cur is None else cur
        out = replace(self, **vals)
        if not (0 < out.epsilon < 1):
            raise ValueError("epsilon must lie in (0, 1)")
        if out.rho < 1:
            raise ValueError("rho must be at least 1")
        return out

    @property
    def resolved(self) -> bool:
        return all(getattr(self, f.name) is not None for f in fields(self))

    def as_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_mapping(cls, mapping: Dict) -> "RunConfig":
        known = {f.name: f for f in fields(cls)}
        kwargs = {}
        for key, raw in mapping.items():
            key = key.replace("-", "_")
            if key not in known:
                raise KeyError(f"unknown config key {key!r}")
            kwargs[key] = _coerce(known[key], raw)
        return cls(**kwargs)

    def with_overrides(self, **kw) -> "RunConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _coerce(f, raw):
    if not isinstance(raw, str):
        return raw
    text = raw.strip()
    if text.lower() in ("none", ""):
        return None
    name = f.name
    if name in ("mode", "acd_mode"):
        return text
    if name in ("check_duplicates", "strict_q1_slack"):
        return text.lower() in ("1", "true", "yes", "on")
    if name in ("seed", "rho", "c_prime", "t", "retry_cap", "flush_size", "fallback_delta"):
        return int(text)
    return float(text)


def parse_config_file(path) -> Dict[str, str]:
    """Flat ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out


def level_count(delta: int, rho: int) -> int:
    """Number of sketch levels ``ceil(log2(delta/rho)) + 1`` (at least one)."""
    if delta <= rho:
        return 1
    return int(math.ceil(math.log2(delta / rho))) + 1


def sample_rate(level: int, rho: int) -> float:
    s = (2 ** level) * rho
    return min(1.0, 4.0 * rho / s)


__all__ = ["RunConfig", "parse_config_file", "level_count", "sample_rate", "MODES", "field"]
