"""Banach function spaces over finite atomic measure spaces.

Elements are per-atom value vectors; the norm is L^p(mu) with the essential
sup realized as a plain max (every atom has positive mass).  Functionals
are represented as densities g against mu, pairing <f, g> = sum mu_i f_i g_i,
so the dual norm is the associate L^q(mu) norm and is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError

__all__ = [
    "MeasureSpace",
    "FunctionSpaceSpec",
    "LatticeElement",
    "DualFunctional",
    "x_norm",
    "pointwise_lattice",
    "order_leq",
    "pairing",
    "x_dual_norm",
    "sample_x_dual_ball",
    "holder_aligned",
]


@dataclass(frozen=True)
class MeasureSpace:
    """A finite atomic measure: atom i has mass weights[i] > 0."""

    weights: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.weights) < 1:
            raise InputError("measure space needs at least one atom")
        if any(not (w > 0.0) or math.isinf(w) for w in self.weights):
            raise InputError("atom masses must be finite and strictly positive")
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))

    @property
    def atom_count(self) -> int:
        return len(self.weights)

    def mu(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)


@dataclass(frozen=True)
class FunctionSpaceSpec:
    """L^p(mu) over a finite atomic measure; p = math.inf for the sup norm."""

    measure: MeasureSpace
    p: float

    def __post_init__(self) -> None:
        if not (self.p >= 1.0):
            raise InputError("function space exponent must satisfy p >= 1")

    @property
    def atom_count(self) -> int:
        return self.measure.atom_count

    def to_json(self) -> dict:
        return {
            "atoms": list(self.measure.weights),
            "norm": {"kind": "lp", "p": "inf" if math.isinf(self.p) else self.p},
        }

    @staticmethod
    def from_json(obj: dict) -> "FunctionSpaceSpec":
        atoms = obj.get("atoms")
        norm = obj.get("norm", {})
        if norm.get("kind") != "lp":
            raise InputError(f"unsupported function-space norm {norm!r}")
        raw_p = norm.get("p")
        p = math.inf if raw_p == "inf" else float(raw_p)
        return FunctionSpaceSpec(MeasureSpace(tuple(atoms)), p)

    def label(self) -> str:
        return "Linf" if math.isinf(self.p) else f"L{self.p:g}"

    def element(self, values: Sequence[float]) -> "LatticeElement":
        return LatticeElement(np.asarray(values, dtype=float), self)


@dataclass(frozen=True)
class LatticeElement:
    """A function on the atoms: one real value per atom."""

    values: np.ndarray
    space: FunctionSpaceSpec

    def __post_init__(self) -> None:
        v = np.atleast_1d(np.asarray(self.values, dtype=float)).copy()
        if v.size != self.space.atom_count:
            raise InputError(
                f"element has {v.size} values for {self.space.atom_count} atoms"
            )
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def __add__(self, other: "LatticeElement") -> "LatticeElement":
        _same_space(self, other)
        return LatticeElement(self.values + other.values, self.space)

    def __sub__(self, other: "LatticeElement") -> "LatticeElement":
        _same_space(self, other)
        return LatticeElement(self.values - other.values, self.space)

    def __rmul__(self, scalar: float) -> "LatticeElement":
        return LatticeElement(float(scalar) * self.values, self.space)

    def __neg__(self) -> "LatticeElement":
        return LatticeElement(-self.values, self.space)


@dataclass(frozen=True)
class DualFunctional:
    """A functional given by its density g against mu, <f, g> = sum mu f g."""

    density: np.ndarray
    certified_dual_norm: float

    def __post_init__(self) -> None:
        g = np.asarray(self.density, dtype=float).copy()
        g.flags.writeable = False
        object.__setattr__(self, "density", g)


def _same_space(f: LatticeElement, g: LatticeElement) -> None:
    if f.space != g.space:
        raise InputError("lattice elements live in different spaces")


def x_norm(f: LatticeElement) -> float:
    """The space norm: (sum mu_i |f_i|^p)^(1/p), max |f_i| for p = inf."""
    a = np.abs(f.values)
    p = f.space.p
    if math.isinf(p):
        return float(np.max(a))
    mu = f.space.measure.mu()
    if p == 1.0:
        return float(np.dot(mu, a))
    if p == 2.0:
        return float(math.sqrt(np.dot(mu, a * a)))
    peak = float(np.max(a))
    if peak == 0.0:
        return 0.0
    return peak * float(np.dot(mu, (a / peak) ** p)) ** (1.0 / p)


def pointwise_lattice(
    op: str, f: LatticeElement, g: LatticeElement | None = None
) -> LatticeElement:
    """Coordinatewise lattice operation: abs, join (max) or meet (min)."""
    if op == "abs":
        return LatticeElement(np.abs(f.values), f.space)
    if g is None:
        raise InputError(f"lattice op {op!r} needs two elements")
    _same_space(f, g)
    if op == "join":
        return LatticeElement(np.maximum(f.values, g.values), f.space)
    if op == "meet":
        return LatticeElement(np.minimum(f.values, g.values), f.space)
    raise InputError(f"unknown lattice op {op!r}")


def order_leq(f: LatticeElement, g: LatticeElement, tol: float = 0.0) -> bool:
    """Almost-everywhere order: f_i <= g_i + tol on every atom."""
    _same_space(f, g)
    return bool(np.all(f.values <= g.values + tol))


def pairing(f: LatticeElement, density) -> float:
    g = np.asarray(density, dtype=float)
    if g.size != f.space.atom_count:
        raise InputError("functional density has wrong length")
    return float(np.dot(f.space.measure.mu(), f.values * g))


def x_dual_norm(density, space: FunctionSpaceSpec) -> float:
    """Associate-space norm of a density: L^q(mu) with 1/p + 1/q = 1."""
    g = np.abs(np.asarray(density, dtype=float))
    if g.size != space.atom_count:
        raise InputError("functional density has wrong length")
    p = space.p
    mu = space.measure.mu()
    if math.isinf(p):
        return float(np.dot(mu, g))
    if p == 1.0:
        return float(np.max(g))
    q = p / (p - 1.0)
    if q == 2.0:
        return float(math.sqrt(np.dot(mu, g * g)))
    peak = float(np.max(g))
    if peak == 0.0:
        return 0.0
    return peak * float(np.dot(mu, (g / peak) ** q)) ** (1.0 / q)


def holder_aligned(f: LatticeElement) -> np.ndarray:
    """The norming density: dual norm 1 and <f, g> = x_norm(f) (0 for f = 0)."""
    a = np.abs(f.values)
    if not a.any():
        return np.zeros(a.size)
    sgn = np.sign(f.values)
    p = f.space.p
    mu = f.space.measure.mu()
    if math.isinf(p):
        i = int(np.argmax(a))
        g = np.zeros(a.size)
        g[i] = sgn[i] / mu[i]
        return g
    if p == 1.0:
        return sgn.astype(float)
    nrm = x_norm(f)
    return sgn * (a / nrm) ** (p - 1.0)


def norming_vector_for_density(space: FunctionSpaceSpec, density) -> np.ndarray:
    """Unit-norm values w maximizing <w, g>: the pairing equals x_dual_norm(g)."""
    g = np.asarray(density, dtype=float)
    if g.size != space.atom_count:
        raise InputError("functional density has wrong length")
    if not g.any():
        return np.zeros(g.size)
    sgn = np.sign(g)
    mag = np.abs(g)
    p = space.p
    mu = space.measure.mu()
    if math.isinf(p):
        return sgn.astype(float)
    if p == 1.0:
        i = int(np.argmax(mag))
        w = np.zeros(g.size)
        w[i] = sgn[i] / mu[i]
        return w
    q = p / (p - 1.0)
    nrm = x_dual_norm(g, space)
    return sgn * (mag / nrm) ** (q - 1.0)


def sample_x_dual_ball(
    space: FunctionSpaceSpec, count: int, seed: int
) -> list[DualFunctional]:
    """Deterministic sample of the dual unit ball of the function space.

    Mirrors the sequence-lattice sampler: canonical +-directions and the
    all-ones density come first, then rescaled normal draws.
    """
    if count < 1:
        raise InputError("sample_x_dual_ball needs count >= 1")
    m = space.atom_count
    directions: list[np.ndarray] = []
    for i in range(m):
        e = np.zeros(m)
        e[i] = 1.0
        directions.append(e)
        directions.append(-e)
    directions.append(np.ones(m))
    rng = np.random.default_rng(seed)
    while len(directions) < count:
        g = rng.standard_normal(m)
        if not g.any():
            continue
        directions.append(g)
    out: list[DualFunctional] = []
    for d in directions[:count]:
        nrm = x_dual_norm(d, space)
        if nrm == 0.0:
            out.append(DualFunctional(np.zeros(m), 0.0))
            continue
        g = d / nrm
        out.append(DualFunctional(g, x_dual_norm(g, space)))
    return out
