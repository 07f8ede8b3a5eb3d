"""Computable Banach sequence lattices restricted to R^n.

A :class:`SequenceLatticeSpec` describes a lattice norm on R^n together with
its dual norm under the plain pairing sum(a_j * t_j):

* ``lp``          -- (sum |t_i|^p)^(1/p), sup norm for p = inf
* ``weighted_lp`` -- (sum w_i |t_i|^p)^(1/p) with w_i > 0
* ``orlicz``      -- Luxemburg gauge inf{lam > 0 : sum phi(|t_i|/lam) <= 1}
                     for a Young function phi

The l^p family has analytic dual norms (conjugate exponent).  The Orlicz
dual is evaluated by sign-aligned coordinate ascent on the unit sphere and
is reported as a lower estimate with relative gap at most ``TOL_DUAL``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError, NumericError

__all__ = [
    "INF",
    "TOL_DUAL",
    "YoungFunction",
    "SequenceLatticeSpec",
    "DualVector",
    "y_norm",
    "y_dual_norm",
    "sample_dual_ball",
    "partial_sum_norm",
    "aligned_dual",
    "conjugate_spec",
    "dual_norming_vector",
]

INF = math.inf

# Contract of every optimization-based dual value: relative gap <= TOL_DUAL.
TOL_DUAL = 1e-6

_LUX_ABS_TOL = 1e-12
_LUX_MAX_ITER = 200


@dataclass(frozen=True)
class YoungFunction:
    """Named parametric Young function on [0, inf).

    Families: ``power`` with phi(t) = t**param (param >= 1) and
    ``exp_square`` with phi(t) = exp(t**2) - 1.
    """

    name: str
    param: float = 2.0

    def __post_init__(self) -> None:
        if self.name not in ("power", "exp_square"):
            raise InputError(f"unknown Young function family {self.name!r}")
        if self.name == "power" and not self.param >= 1.0:
            raise InputError("power family requires exponent >= 1")

    def __call__(self, t: float) -> float:
        if self.name == "power":
            return t**self.param
        return math.expm1(t * t)

    def inverse_at_one(self) -> float:
        """The point s with phi(s) = 1 (used to bracket the Luxemburg gauge)."""
        if self.name == "power":
            return 1.0
        return math.sqrt(math.log(2.0))

    def to_json(self) -> dict:
        if self.name == "power":
            return {"phi": "power", "p": self.param}
        return {"phi": "exp_square"}

    @staticmethod
    def from_json(obj: dict) -> "YoungFunction":
        name = obj.get("phi")
        if name == "power":
            return YoungFunction("power", float(obj.get("p", 2.0)))
        if name == "exp_square":
            return YoungFunction("exp_square")
        raise InputError(f"unknown Young function tag {obj!r}")


@dataclass(frozen=True)
class SequenceLatticeSpec:
    """A computable lattice norm on R^n (restriction of a sequence lattice).

    ``p = math.inf`` encodes the sup norm; it is the one distinguished value
    and is only ever tested with :func:`math.isinf`, never compared against
    computed floats.
    """

    kind: str  # "lp" | "weighted_lp" | "orlicz"
    p: float | None = None
    weights: tuple[float, ...] | None = None
    phi: YoungFunction | None = None

    def __post_init__(self) -> None:
        if self.kind == "lp":
            if self.p is None or not (self.p >= 1.0):
                raise InputError("lp requires p >= 1")
        elif self.kind == "weighted_lp":
            if self.p is None or not (self.p >= 1.0):
                raise InputError("weighted_lp requires p >= 1")
            if not self.weights or any(not (w > 0.0) or math.isinf(w) for w in self.weights):
                raise InputError("weighted_lp requires finite positive weights")
        elif self.kind == "orlicz":
            if self.phi is None:
                raise InputError("orlicz requires a Young function")
        else:
            raise InputError(f"unknown lattice kind {self.kind!r}")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def lp(p: float) -> "SequenceLatticeSpec":
        return SequenceLatticeSpec(kind="lp", p=float(p))

    @staticmethod
    def weighted_lp(p: float, weights: Sequence[float]) -> "SequenceLatticeSpec":
        return SequenceLatticeSpec(
            kind="weighted_lp", p=float(p), weights=tuple(float(w) for w in weights)
        )

    @staticmethod
    def orlicz(phi: YoungFunction) -> "SequenceLatticeSpec":
        return SequenceLatticeSpec(kind="orlicz", phi=phi)

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        if self.kind == "lp":
            return {"kind": "lp", "p": "inf" if math.isinf(self.p) else self.p}
        if self.kind == "weighted_lp":
            return {
                "kind": "weighted_lp",
                "p": "inf" if math.isinf(self.p) else self.p,
                "weights": list(self.weights),
            }
        return {"kind": "orlicz", **self.phi.to_json()}

    @staticmethod
    def from_json(obj: dict) -> "SequenceLatticeSpec":
        kind = obj.get("kind")
        if kind == "lp":
            return SequenceLatticeSpec.lp(_parse_p(obj.get("p")))
        if kind == "weighted_lp":
            return SequenceLatticeSpec.weighted_lp(_parse_p(obj.get("p")), obj["weights"])
        if kind == "orlicz":
            return SequenceLatticeSpec.orlicz(YoungFunction.from_json(obj))
        raise InputError(f"unknown lattice kind in JSON: {obj!r}")

    def label(self) -> str:
        if self.kind == "lp":
            return "linf" if math.isinf(self.p) else f"l{self.p:g}"
        if self.kind == "weighted_lp":
            return "winf" if math.isinf(self.p) else f"wl{self.p:g}"
        return f"orlicz-{self.phi.name}"

    def unit_vector_norm(self, j: int, n: int) -> float:
        """Norm of the canonical vector e_j (1-based) inside R^n."""
        if not 1 <= j <= n:
            raise InputError(f"canonical index {j} outside 1..{n}")
        e = np.zeros(n)
        e[j - 1] = 1.0
        return y_norm(self, e)


def _parse_p(raw) -> float:
    if raw == "inf":
        return INF
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        return float(raw)
    raise InputError(f"cannot parse exponent {raw!r}")


@dataclass(frozen=True)
class DualVector:
    """A coefficient vector in (or certified close to) the dual unit ball."""

    coeffs: np.ndarray
    certified_dual_norm: float

    def __post_init__(self) -> None:
        c = np.asarray(self.coeffs, dtype=float).copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)


# ---------------------------------------------------------------------------
# primal norms
# ---------------------------------------------------------------------------


def y_norm(spec: SequenceLatticeSpec, t) -> float:
    """The lattice norm of a finite real vector."""
    v = np.atleast_1d(np.asarray(t, dtype=float))
    if v.size == 0:
        raise InputError("y_norm of an empty vector")
    a = np.abs(v)
    if spec.kind == "lp":
        return _lp_norm(a, spec.p)
    if spec.kind == "weighted_lp":
        w = np.asarray(spec.weights, dtype=float)
        if w.size < a.size:
            raise InputError(f"weights cover {w.size} coordinates, vector has {a.size}")
        w = w[: a.size]
        if math.isinf(spec.p):
            return float(np.max(w * a))
        return _lp_norm(w ** (1.0 / spec.p) * a, spec.p)
    return _luxemburg(spec.phi, a)


def _lp_norm(a: np.ndarray, p: float) -> float:
    if math.isinf(p):
        return float(np.max(a))
    if p == 1.0:
        return float(np.sum(a))
    if p == 2.0:
        return float(math.sqrt(np.dot(a, a)))
    peak = float(np.max(a))
    if peak == 0.0:
        return 0.0
    # rescale so the power sum cannot overflow
    return peak * float(np.sum((a / peak) ** p)) ** (1.0 / p)


def _luxemburg(phi: YoungFunction, a: np.ndarray) -> float:
    """Luxemburg gauge by bisection: inf{lam > 0 : sum phi(a_i/lam) <= 1}."""
    vals = [float(x) for x in a if x > 0.0]
    if not vals:
        return 0.0
    peak = max(vals)

    def excess(lam: float) -> float:
        return sum(phi(v / lam) for v in vals) - 1.0

    lo = peak / phi.inverse_at_one()  # excess(lo) >= 0 by monotonicity
    hi = len(vals) * peak
    grow = 0
    while excess(hi) > 0.0:
        hi *= 2.0
        grow += 1
        if grow > _LUX_MAX_ITER:
            raise NumericError("Luxemburg bracket expansion failed", last_bracket=(lo, hi))
    if hi < lo:
        lo, hi = min(lo, hi), max(lo, hi)
    shrink = 0
    while excess(lo) < 0.0:
        lo *= 0.5
        shrink += 1
        if shrink > _LUX_MAX_ITER:
            raise NumericError("Luxemburg lower bracket failed", last_bracket=(lo, hi))
    for _ in range(_LUX_MAX_ITER):
        if hi - lo <= _LUX_ABS_TOL:
            break
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return hi


def partial_sum_norm(spec: SequenceLatticeSpec, n: int) -> float:
    """Norm of e_1 + ... + e_n; the exact sup of the norm over the sup-norm sphere."""
    if n < 1:
        raise InputError("partial_sum_norm needs n >= 1")
    return y_norm(spec, np.ones(n))


# ---------------------------------------------------------------------------
# dual norms
# ---------------------------------------------------------------------------


def y_dual_norm(spec: SequenceLatticeSpec, a, seed: int = 0) -> float:
    """sup{ |sum a_j t_j| : y_norm(t) <= 1 }.

    Analytic (conjugate exponent) for the l^p kinds; coordinate ascent on
    the unit sphere for Orlicz, reported with relative gap <= TOL_DUAL.
    """
    v = np.atleast_1d(np.asarray(a, dtype=float))
    if v.size == 0:
        raise InputError("y_dual_norm of an empty vector")
    mag = np.abs(v)
    if spec.kind == "lp":
        return _lp_norm(mag, _conjugate(spec.p))
    if spec.kind == "weighted_lp":
        w = np.asarray(spec.weights, dtype=float)[: mag.size]
        if w.size < mag.size:
            raise InputError("weights do not cover the vector")
        p = spec.p
        if math.isinf(p):
            return float(np.sum(mag / w))
        if p == 1.0:
            return float(np.max(mag / w))
        q = _conjugate(p)
        return _lp_norm(mag * w ** (-1.0 / p), q)
    return _orlicz_dual_norm(spec, mag, seed)


def _conjugate(p: float) -> float:
    if math.isinf(p):
        return 1.0
    if p == 1.0:
        return INF
    return p / (p - 1.0)


def _orlicz_dual_norm(spec: SequenceLatticeSpec, mag: np.ndarray, seed: int) -> float:
    value, _ = _orlicz_dual_argmax(spec, mag, seed)
    return value


def _orlicz_dual_argmax(
    spec: SequenceLatticeSpec, mag: np.ndarray, seed: int
) -> tuple[float, np.ndarray]:
    if not mag.any():
        return 0.0, np.zeros(mag.size)
    n = mag.size
    rng = np.random.default_rng(seed)
    starts = [mag.copy(), np.ones(n)]
    e = np.zeros(n)
    e[int(np.argmax(mag))] = 1.0
    starts.append(e)
    for _ in range(4):
        starts.append(np.abs(rng.standard_normal(n)) + 1e-12)
    best, best_t = 0.0, np.zeros(n)
    for s in starts:
        val, t = _sphere_ascent(spec, mag, s)
        if val > best:
            best, best_t = val, t
    return best, best_t


_ASCENT_STEPS = (0.5, 0.2, 0.08, 0.03, 0.01, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 3e-6, 1e-6, 3e-7, 1e-7)


def _sphere_ascent(
    spec: SequenceLatticeSpec, obj: np.ndarray, start: np.ndarray
) -> tuple[float, np.ndarray]:
    """Maximize obj . t over the nonnegative part of the unit sphere."""

    def score(t: np.ndarray) -> float:
        nrm = y_norm(spec, t)
        return float(np.dot(obj, t)) / nrm if nrm > 0 else 0.0

    t = np.maximum(start, 0.0)
    if not t.any():
        t = np.ones_like(start)
    t = t / y_norm(spec, t)
    val = score(t)
    n = t.size
    for step in _ASCENT_STEPS:
        for _ in range(4 * n):
            improved = False
            for i in range(n):
                for delta in (step, -step):
                    cand = t.copy()
                    cand[i] = max(cand[i] + delta, 0.0)
                    if not cand.any():
                        continue
                    cand_val = score(cand)
                    if cand_val > val:
                        t, val = cand / y_norm(spec, cand), cand_val
                        improved = True
            if not improved:
                break
    return val, t


def aligned_dual(spec: SequenceLatticeSpec, v) -> np.ndarray:
    """A norming dual vector: norm in Y* at most 1 with a . v ~= y_norm(v).

    Exact for the l^p kinds (Hoelder alignment).  For Orlicz the gradient
    of the norm is taken by central differences and shrunk by 1/(1+TOL_DUAL)
    so the result stays inside the dual ball despite the optimization gap.
    """
    x = np.atleast_1d(np.asarray(v, dtype=float))
    if x.size == 0:
        raise InputError("aligned_dual of an empty vector")
    if not x.any():
        return np.zeros(x.size)
    sgn = np.sign(x)
    mag = np.abs(x)
    if spec.kind == "lp":
        return sgn * _lp_aligned(mag, spec.p)
    if spec.kind == "weighted_lp":
        w = np.asarray(spec.weights, dtype=float)[: mag.size]
        p = spec.p
        if math.isinf(p):
            i = int(np.argmax(w * mag))
            a = np.zeros(mag.size)
            a[i] = w[i]
            return sgn * a
        if p == 1.0:
            return sgn * w
        nrm = y_norm(spec, mag)
        return sgn * (w * mag ** (p - 1.0) / nrm ** (p - 1.0))
    # Orlicz: nabla N(v), Euler homogeneity gives <nabla N(v), v> = N(v)
    h = 1e-6 * max(float(np.max(mag)), 1.0)
    grad = np.zeros(mag.size)
    for i in range(mag.size):
        up, dn = mag.copy(), mag.copy()
        up[i] += h
        dn[i] = max(dn[i] - h, 0.0)
        grad[i] = (y_norm(spec, up) - y_norm(spec, dn)) / (up[i] - dn[i])
    dn_norm = y_dual_norm(spec, grad)
    if dn_norm == 0.0:
        return np.zeros(mag.size)
    return sgn * grad / (dn_norm * (1.0 + TOL_DUAL))


def _lp_aligned(mag: np.ndarray, p: float) -> np.ndarray:
    if math.isinf(p):
        i = int(np.argmax(mag))
        a = np.zeros(mag.size)
        a[i] = 1.0
        return a
    if p == 1.0:
        return (mag > 0).astype(float)
    nrm = _lp_norm(mag, p)
    return (mag / nrm) ** (p - 1.0)


def conjugate_spec(spec: SequenceLatticeSpec) -> SequenceLatticeSpec | None:
    """The spec whose norm is the dual norm, when it has a closed form.

    Plain l^p dualizes to l^q; weighted l^p(w) under the plain pairing
    dualizes to weighted l^q with weights w^(1-q) (1/w for the p=1 and
    p=inf endpoints).  Orlicz has no implemented conjugate: returns None.
    """
    if spec.kind == "lp":
        return SequenceLatticeSpec.lp(_conjugate(spec.p))
    if spec.kind == "weighted_lp":
        w = np.asarray(spec.weights, dtype=float)
        p = spec.p
        if p == 1.0 or math.isinf(p):
            return SequenceLatticeSpec.weighted_lp(_conjugate(p), 1.0 / w)
        q = _conjugate(p)
        return SequenceLatticeSpec.weighted_lp(q, w ** (1.0 - q))
    return None


def dual_norming_vector(spec: SequenceLatticeSpec, a, seed: int = 0) -> np.ndarray:
    """A unit vector t with a . t ~= y_dual_norm(a) (exact for l^p kinds)."""
    v = np.atleast_1d(np.asarray(a, dtype=float))
    if not v.any():
        return np.zeros(v.size)
    conj = conjugate_spec(spec)
    if conj is not None:
        return aligned_dual(conj, v)
    _, t = _orlicz_dual_argmax(spec, np.abs(v), seed)
    return np.sign(v) * t


# ---------------------------------------------------------------------------
# dual-ball sampling
# ---------------------------------------------------------------------------


def sample_dual_ball(
    spec: SequenceLatticeSpec, n: int, count: int, seed: int
) -> list[DualVector]:
    """Deterministic sample of `count` vectors from the dual unit ball.

    The sample always starts with the rescaled canonical directions
    +-e_j / ||e_j||_* and the rescaled all-ones vector, so degenerate
    suprema are never missed by randomness; the remainder are standard
    normal draws rescaled to the ball.
    """
    if count < 1:
        raise InputError("sample_dual_ball needs count >= 1")
    if n < 1:
        raise InputError("sample_dual_ball needs n >= 1")
    directions: list[np.ndarray] = []
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        directions.append(e)
        directions.append(-e)
    directions.append(np.ones(n))
    rng = np.random.default_rng(seed)
    while len(directions) < count:
        g = rng.standard_normal(n)
        if not g.any():
            continue
        directions.append(g)
    out: list[DualVector] = []
    # Orlicz dual norms carry an optimization gap; shrink so the true dual
    # norm stays <= 1 and downstream pointwise bounds remain one-sided.
    shrink = (1.0 + TOL_DUAL) if spec.kind == "orlicz" else 1.0
    for d in directions[:count]:
        nrm = y_dual_norm(spec, d, seed=seed)
        if nrm == 0.0:
            out.append(DualVector(np.zeros(n), 0.0))
            continue
        coeffs = d / (nrm * shrink)
        out.append(DualVector(coeffs, y_dual_norm(spec, coeffs, seed=seed)))
    return out
