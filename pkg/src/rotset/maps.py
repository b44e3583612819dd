"""Lifted torus maps R^2 -> R^2 commuting with integer translations.

Every map is an immutable :class:`LiftedMap` tree.  Leaves are elementary
kinds (identity, translation, shears, trigonometric perturbations) and inner
nodes are compositions, powers and inverses.  Evaluation is vectorised:
points are arrays whose last axis has length 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Any, Mapping, NamedTuple

import numpy as np

from .errors import NotInvertible, UnknownMap

TWO_PI = 2.0 * math.pi

KINDS = (
    "identity",
    "translation",
    "shear_x",
    "shear_y",
    "perturbation_r",
    "composite",
    "power",
    "inverse",
)


class TrigTerm(NamedTuple):
    """``coef * func(2*pi*freq*(point[source] + phase))`` added to ``point[target]``."""

    target: int
    coef: float
    func: str
    freq: int
    source: int
    phase: float = 0.0


@dataclass(frozen=True, eq=False)
class LiftedMap:
    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)
    factors: tuple[LiftedMap, ...] = ()
    label: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown map kind {self.kind!r}")
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))
        object.__setattr__(self, "factors", tuple(self.factors))
        if self.kind == "power":
            q = self.params.get("q")
            if not isinstance(q, (int, np.integer)) or q < 1:
                raise ValueError(f"power exponent must be an integer >= 1, got {q!r}")
            if len(self.factors) != 1:
                raise ValueError("power wraps exactly one map")
        if self.kind == "inverse":
            if len(self.factors) != 1:
                raise ValueError("inverse wraps exactly one map")
            if not is_invertible(self.factors[0]):
                raise NotInvertible(f"{describe(self.factors[0])} has no closed-form inverse")
        if self.kind == "perturbation_r":
            for term in self.params["terms"]:
                if term.func not in ("sin", "cos") or term.freq != int(term.freq):
                    raise ValueError(f"invalid trigonometric term {term!r}")
        for value in _flat_numbers(self.params):
            if not math.isfinite(value):
                raise ValueError(f"non-finite parameter in {self.kind} map")

    def __call__(self, points):
        return eval_lift(self, points)

    def __repr__(self):
        return f"LiftedMap({describe(self)})"


def _flat_numbers(params):
    for value in params.values():
        if isinstance(value, (int, float, np.integer, np.floating)):
            yield float(value)
        elif isinstance(value, tuple):
            for item in value:
                if isinstance(item, TrigTerm):
                    yield float(item.coef)
                    yield float(item.phase)
                else:
                    yield float(item)


def describe(fmap: LiftedMap) -> str:
    if fmap.label:
        return fmap.label
    if fmap.factors:
        inner = ", ".join(describe(f) for f in fmap.factors)
        extra = f"q={fmap.params['q']}; " if fmap.kind == "power" else ""
        return f"{fmap.kind}({extra}{inner})"
    return fmap.kind


# ---------------------------------------------------------------------------
# elementary kinds
# ---------------------------------------------------------------------------

def identity() -> LiftedMap:
    return LiftedMap("identity")


def translation(vx: float, vy: float) -> LiftedMap:
    return LiftedMap("translation", {"vector": (float(vx), float(vy))})


def shear_profile(s, amp=0.5, phase=0.0, bump=0.0, ratio=0.0, freq=1):
    """Periodic profile ``amp*(cos u + 1) + bump*sin^2(2u)*(sin 3u + ratio*cos(freq*u))``
    with ``u = 2*pi*(s + phase)``."""
    u = TWO_PI * (np.asarray(s, dtype=float) + phase)
    g = amp * (np.cos(u) + 1.0)
    if bump:
        g = g + bump * np.sin(2.0 * u) ** 2 * (np.sin(3.0 * u) + ratio * np.cos(freq * u))
    return g


def shear_x(amp=0.5, phase=0.0, bump=0.0, ratio=0.0, freq=1) -> LiftedMap:
    """(x, y) -> (x + g(y), y)."""
    return LiftedMap("shear_x", dict(amp=amp, phase=phase, bump=bump, ratio=ratio, freq=int(freq)))


def shear_y(amp=0.5, phase=0.0, bump=0.0, ratio=0.0, freq=1) -> LiftedMap:
    """(x, y) -> (x, y + g(x))."""
    return LiftedMap("shear_y", dict(amp=amp, phase=phase, bump=bump, ratio=ratio, freq=int(freq)))


def perturbation(terms) -> LiftedMap:
    """Simultaneous update of both coordinates by a sum of trigonometric terms.

    All terms are evaluated at the input point.  Not invertible in closed form.
    """
    return LiftedMap("perturbation_r", {"terms": tuple(TrigTerm(*t) for t in terms)})


# ---------------------------------------------------------------------------
# combinators
# ---------------------------------------------------------------------------

def composite(*factors: LiftedMap) -> LiftedMap:
    """Apply ``factors`` left to right: the first factor acts first."""
    return LiftedMap("composite", factors=factors)


def compose(outer: LiftedMap, inner: LiftedMap) -> LiftedMap:
    """``outer o inner``."""
    return composite(inner, outer)


def power(fmap: LiftedMap, q: int) -> LiftedMap:
    return LiftedMap("power", {"q": int(q)}, (fmap,))


def is_invertible(fmap: LiftedMap) -> bool:
    if fmap.kind in ("identity", "translation", "shear_x", "shear_y", "inverse"):
        return True
    if fmap.kind == "perturbation_r":
        return False
    return all(is_invertible(f) for f in fmap.factors)


def inverse(fmap: LiftedMap) -> LiftedMap:
    if not is_invertible(fmap):
        raise NotInvertible(f"{describe(fmap)} has no closed-form inverse")
    if fmap.kind == "inverse":
        return fmap.factors[0]
    return LiftedMap("inverse", factors=(fmap,))


def translation_vector(fmap: LiftedMap) -> np.ndarray | None:
    """The constant displacement of a map built only from translations, else None."""
    kind = fmap.kind
    if kind == "identity":
        return np.zeros(2)
    if kind == "translation":
        return np.array(fmap.params["vector"], dtype=float)
    if kind in ("composite", "power", "inverse"):
        parts = [translation_vector(f) for f in fmap.factors]
        if any(v is None for v in parts):
            return None
        total = sum(parts, np.zeros(2))
        if kind == "power":
            return fmap.params["q"] * total
        return -total if kind == "inverse" else total
    return None


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _eval(fmap: LiftedMap, x, y):
    kind = fmap.kind
    p = fmap.params
    if kind == "identity":
        return x, y
    if kind == "translation":
        vx, vy = p["vector"]
        return x + vx, y + vy
    if kind == "shear_x":
        return x + shear_profile(y, p["amp"], p["phase"], p["bump"], p["ratio"], p["freq"]), y
    if kind == "shear_y":
        return x, y + shear_profile(x, p["amp"], p["phase"], p["bump"], p["ratio"], p["freq"])
    if kind == "perturbation_r":
        dx = np.zeros_like(x)
        dy = np.zeros_like(y)
        src = (x, y)
        for t in p["terms"]:
            trig = np.sin if t.func == "sin" else np.cos
            value = t.coef * trig(TWO_PI * t.freq * (src[t.source] + t.phase))
            if t.target == 0:
                dx = dx + value
            else:
                dy = dy + value
        return x + dx, y + dy
    if kind == "composite":
        for f in fmap.factors:
            x, y = _eval(f, x, y)
        return x, y
    if kind == "power":
        base = fmap.factors[0]
        for _ in range(p["q"]):
            x, y = _eval(base, x, y)
        return x, y
    return _eval_inverse(fmap.factors[0], x, y)


def _eval_inverse(fmap: LiftedMap, x, y):
    kind = fmap.kind
    p = fmap.params
    if kind == "identity":
        return x, y
    if kind == "translation":
        vx, vy = p["vector"]
        return x - vx, y - vy
    if kind == "shear_x":
        return x - shear_profile(y, p["amp"], p["phase"], p["bump"], p["ratio"], p["freq"]), y
    if kind == "shear_y":
        return x, y - shear_profile(x, p["amp"], p["phase"], p["bump"], p["ratio"], p["freq"])
    if kind == "composite":
        for f in reversed(fmap.factors):
            x, y = _eval_inverse(f, x, y)
        return x, y
    if kind == "power":
        for _ in range(p["q"]):
            x, y = _eval_inverse(fmap.factors[0], x, y)
        return x, y
    if kind == "inverse":
        return _eval(fmap.factors[0], x, y)
    raise NotInvertible(f"{describe(fmap)} has no closed-form inverse")


def eval_lift(fmap: LiftedMap, points) -> np.ndarray:
    """Evaluate the lift at ``points`` (shape ``(..., 2)``)."""
    pts = np.asarray(points, dtype=float)
    x, y = _eval(fmap, pts[..., 0], pts[..., 1])
    return np.stack(np.broadcast_arrays(x, y), axis=-1)


def displacement(fmap: LiftedMap, torus_points) -> np.ndarray:
    """``F(x) - x`` using the canonical lift of points in ``[0, 1)^2``."""
    pts = np.asarray(torus_points, dtype=float)
    shift = translation_vector(fmap)
    if shift is not None:
        return np.broadcast_to(shift, pts.shape).copy()
    return eval_lift(fmap, pts) - pts


# ---------------------------------------------------------------------------
# built-in maps
# ---------------------------------------------------------------------------

ALPHA = 0.00137
BETA = 0.00159

BUILTIN_DEFAULTS: dict[str, dict[str, float]] = {
    "identity": {},
    "translation": {"vx": 0.0, "vy": 0.0},
    "example2": {"amp": 1.0},
    "example3": {"amp": 1.0, "eps": 0.01},
    "P": {"alpha": ALPHA, "p_bump": 0.0234, "p_ratio": 0.3754, "p_freq": 13},
    "Q": {"beta": BETA, "q_bump": 0.0213, "q_ratio": 0.4243, "q_freq": 11},
    "R": {
        "alpha": ALPHA,
        "beta": BETA,
        "r_x": 0.0127,
        "r_xy": 0.000824,
        "r_y": 0.0176,
        "r_yy": 0.000631,
    },
}
BUILTIN_DEFAULTS["f1"] = {**BUILTIN_DEFAULTS["P"], **BUILTIN_DEFAULTS["Q"]}
BUILTIN_DEFAULTS["f2"] = {**BUILTIN_DEFAULTS["f1"], **BUILTIN_DEFAULTS["R"]}


def _P(c):
    return shear_y(0.5, c["alpha"], c["p_bump"], c["p_ratio"], c["p_freq"])


def _Q(c):
    return shear_x(0.5, c["beta"], c["q_bump"], c["q_ratio"], c["q_freq"])


def _R(c):
    return perturbation([
        (0, -c["r_x"], "sin", 2, 0, c["alpha"]),
        (0, c["r_xy"], "sin", 5, 1, 0.0),
        (1, -c["r_y"], "sin", 2, 1, c["beta"]),
        (1, c["r_yy"], "sin", 6, 1, 0.0),
    ])


def _build(name, c):
    if name == "identity":
        return identity()
    if name == "translation":
        return translation(c["vx"], c["vy"])
    if name == "example2":
        return perturbation([(0, c["amp"], "cos", 1, 0, 0.0)])
    if name == "example3":
        return perturbation([(0, c["amp"], "cos", 1, 1, 0.0), (1, c["eps"], "sin", 1, 1, 0.0)])
    if name == "P":
        return _P(c)
    if name == "Q":
        return _Q(c)
    if name == "R":
        return _R(c)
    if name == "f1":
        return compose(_Q(c), _P(c))
    return compose(_R(c), compose(_Q(c), _P(c)))


def builtin(name: str, overrides: Mapping[str, float] | None = None) -> LiftedMap:
    """Return a named example map, with published constants unless overridden."""
    if name not in BUILTIN_DEFAULTS:
        raise UnknownMap(f"unknown map {name!r}; choose from {sorted(BUILTIN_DEFAULTS)}")
    params = dict(BUILTIN_DEFAULTS[name])
    for key, value in (overrides or {}).items():
        if key not in params:
            raise UnknownMap(f"map {name!r} has no parameter {key!r}")
        params[key] = type(params[key])(value)
    fmap = _build(name, params)
    label = MapSpec(name, dict(overrides or {})).to_string()
    return LiftedMap(fmap.kind, fmap.params, fmap.factors, label=label)


@dataclass(frozen=True)
class MapSpec:
    """A built-in map name plus parameter overrides; the serialisable map description."""

    name: str
    overrides: dict = field(default_factory=dict)

    def build(self) -> LiftedMap:
        return builtin(self.name, self.overrides)

    @classmethod
    def parse(cls, text: str) -> MapSpec:
        """Parse ``name``, ``name:v1,v2`` (positional) or ``name:key=v,key=v``."""
        name, _, rest = text.strip().partition(":")
        name = name.strip()
        if name not in BUILTIN_DEFAULTS:
            raise UnknownMap(f"unknown map {name!r}; choose from {sorted(BUILTIN_DEFAULTS)}")
        keys = list(BUILTIN_DEFAULTS[name])
        overrides = {}
        for pos, item in enumerate(filter(None, (s.strip() for s in rest.split(",")))):
            if "=" in item:
                key, value = (s.strip() for s in item.split("=", 1))
            else:
                if pos >= len(keys):
                    raise UnknownMap(f"too many positional parameters for {name!r}")
                key, value = keys[pos], item
            overrides[key] = float(value)
        return cls(name, overrides)

    def to_string(self) -> str:
        if not self.overrides:
            return self.name
        body = ",".join(f"{k}={v!r}" for k, v in sorted(self.overrides.items()))
        return f"{self.name}:{body}"

    def to_text(self) -> str:
        """Plain-text key-value document: ``name = ...`` then one line per override."""
        lines = [f"name = {self.name}"]
        lines += [f"{k} = {v!r}" for k, v in sorted(self.overrides.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> MapSpec:
        from .config import parse_key_values

        values = parse_key_values(text)
        name = values.pop("name", None)
        if name is None:
            raise UnknownMap("map description lacks a 'name' entry")
        return cls.parse(name + ":" + ",".join(f"{k}={v}" for k, v in values.items()))
