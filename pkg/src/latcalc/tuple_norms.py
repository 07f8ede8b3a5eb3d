"""The three scalar tuple norms and their mutual relations.

For a tuple w in E^n and a sequence-lattice norm Y:

* strong norm     ||w||_{E^n,Y}   = y_norm(||w_1||_E, ..., ||w_n||_E)
* calculus norm   ||x||_{X^n,Y,t} = x_norm(y_norm_of_tuple(x))   (lattice tuples)
* weak norm       ||x||_{w,X^n,Y} = sup over the dual ball of X of
                                    y_norm(<x_1,g>, ..., <x_n,g>)

The weak norm's sup over an infinite ball is reported as a certified lower
estimate from a finite sample (canonical directions, the norming functional
of every tuple entry, random draws) plus coordinate ascent on the density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bfs, bsl
from .bfs import FunctionSpaceSpec, holder_aligned, pairing, x_dual_norm, x_norm
from .bsl import SequenceLatticeSpec, y_norm
from .errors import InputError
from .krivine import TupleX, y_norm_of_tuple

__all__ = [
    "BanachSpaceSpec",
    "TupleE",
    "norm_tuple_Y",
    "norm_tuple_Y_tau",
    "norm_tuple_weak",
    "EquivalenceReport",
    "check_equivalence_constants",
]


@dataclass(frozen=True)
class BanachSpaceSpec:
    """A normed R^d: a sequence-lattice norm used order-free, or an L^p(mu)."""

    dimension: int
    norm: SequenceLatticeSpec | FunctionSpaceSpec

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise InputError("space dimension must be >= 1")
        if isinstance(self.norm, FunctionSpaceSpec) and self.norm.atom_count != self.dimension:
            raise InputError("function-space norm does not match the dimension")

    def norm_of(self, v) -> float:
        w = self._check(v)
        if isinstance(self.norm, FunctionSpaceSpec):
            return x_norm(self.norm.element(w))
        return y_norm(self.norm, w)

    def dual_norm_of(self, phi) -> float:
        """Norm of the plain-dot functional v -> phi . v."""
        f = self._check(phi)
        if isinstance(self.norm, FunctionSpaceSpec):
            return x_dual_norm(f / self.norm.measure.mu(), self.norm)
        return bsl.y_dual_norm(self.norm, f)

    def norming_vector(self, phi) -> np.ndarray:
        """Unit vector w with phi . w ~= dual_norm_of(phi) (exact l^p kinds)."""
        f = self._check(phi)
        if isinstance(self.norm, FunctionSpaceSpec):
            return bfs.norming_vector_for_density(self.norm, f / self.norm.measure.mu())
        return bsl.dual_norming_vector(self.norm, f)

    def _check(self, v) -> np.ndarray:
        w = np.atleast_1d(np.asarray(v, dtype=float))
        if w.size != self.dimension:
            raise InputError(f"vector has dimension {w.size}, space has {self.dimension}")
        return w

    def to_json(self) -> dict:
        inner = self.norm.to_json()
        return {"dimension": self.dimension, "norm": inner}

    @staticmethod
    def from_json(obj: dict) -> "BanachSpaceSpec":
        inner = obj["norm"]
        if "atoms" in inner:
            return BanachSpaceSpec(int(obj["dimension"]), FunctionSpaceSpec.from_json(inner))
        return BanachSpaceSpec(int(obj["dimension"]), SequenceLatticeSpec.from_json(inner))


@dataclass(frozen=True)
class TupleE:
    """An n-tuple of vectors in one normed space, stored as an (n, d) matrix."""

    space: BanachSpaceSpec
    vectors: np.ndarray

    def __post_init__(self) -> None:
        m = np.atleast_2d(np.asarray(self.vectors, dtype=float)).copy()
        if m.shape[0] < 1:
            raise InputError("tuple must be nonempty")
        if m.shape[1] != self.space.dimension:
            raise InputError("tuple vectors do not match the space dimension")
        m.flags.writeable = False
        object.__setattr__(self, "vectors", m)

    def __len__(self) -> int:
        return self.vectors.shape[0]


def norm_tuple_Y(spec: SequenceLatticeSpec, w: TupleE) -> float:
    """Strong tuple norm: the Y-norm of the vector of entry norms."""
    entry_norms = np.array([w.space.norm_of(v) for v in w.vectors])
    return y_norm(spec, entry_norms)


def norm_tuple_Y_tau(spec: SequenceLatticeSpec, x: TupleX) -> float:
    """Calculus tuple norm: x_norm of the lattice-valued tuple norm."""
    return x_norm(y_norm_of_tuple(spec, x))


def norm_tuple_weak(
    spec: SequenceLatticeSpec,
    x: TupleX,
    budget: int = 256,
    ascent_steps: int = 50,
    seed: int = 0,
    extra_densities: tuple = (),
) -> float:
    """Certified lower estimate of the weak tuple norm.

    Every candidate density is normalized to the dual unit ball before
    scoring, so the value never exceeds the true sup.  The sample contains
    the norming density of each tuple entry (which makes the estimate exact
    for n = 1 and for single-atom spaces), the canonical directions, and
    `budget` seeded random draws; `ascent_steps` coordinate proposals then
    refine the best density found.
    """
    space = x.space
    rows = x.values_matrix()  # (m, n)
    mu = space.measure.mu()

    def score(g: np.ndarray) -> float:
        return y_norm(spec, rows.T @ (mu * g))

    candidates: list[np.ndarray] = []
    for el in x.elements:
        g = holder_aligned(el)
        if g.any():
            candidates.append(g)
    for extra in extra_densities:
        g = np.asarray(extra, dtype=float)
        nrm = x_dual_norm(g, space)
        if nrm > 0:
            candidates.append(g / nrm)
    for df in bfs.sample_x_dual_ball(space, max(budget, 1), seed):
        if df.certified_dual_norm > 0:
            candidates.append(np.asarray(df.density))

    best, best_g = 0.0, None
    for g in candidates:
        v = score(g)
        if v > best:
            best, best_g = v, g
    if best_g is None:
        return 0.0

    g = best_g.copy()
    m = g.size
    spent = 0
    step = 0.5
    while spent < ascent_steps:
        improved = False
        for i in range(m):
            for delta in (step, -step):
                if spent >= ascent_steps:
                    break
                cand = g.copy()
                cand[i] += delta
                nrm = x_dual_norm(cand, space)
                if nrm == 0.0:
                    continue
                cand /= nrm
                spent += 1
                v = score(cand)
                if v > best:
                    best, g = v, cand
                    improved = True
        if not improved:
            step *= 0.25
            if step < 1e-9:
                break
    return best


@dataclass(frozen=True)
class EquivalenceReport:
    """Outcome of the norm-equivalence inequalities on one tuple."""

    upper_holds: bool
    lower_holds: bool
    coordinate_holds: bool
    single_equality: bool | None
    worst_margin: float


def check_equivalence_constants(
    spec: SequenceLatticeSpec, x: TupleX, rel_tol: float = 1e-9
) -> EquivalenceReport:
    """Verify the equivalence constants between the calculus and sum norms.

    Checks, each within relative tolerance:

    * tau-norm <= ||e_1+...+e_n||_Y * sum_j ||x_j||_X
    * tau-norm >= (min_j ||e_j||_Y / n) * sum_j ||x_j||_X
    * tau-norm >= ||e_j||_Y * ||x_j||_X for every j
    * for n = 1 the two sides agree exactly (equality case)

    Failures are reported in the record, never raised.
    """
    n = len(x)
    tau = norm_tuple_Y_tau(spec, x)
    entry_norms = [x_norm(el) for el in x.elements]
    total = float(sum(entry_norms))
    e_norms = [spec.unit_vector_norm(j, n) for j in range(1, n + 1)]
    scale = max(tau, total, 1e-30)

    margins = []
    upper_rhs = bsl.partial_sum_norm(spec, n) * total
    m_upper = (upper_rhs * (1 + rel_tol) - tau) / scale
    margins.append(m_upper)

    lower_rhs = (min(e_norms) / n) * total
    m_lower = (tau - lower_rhs * (1 - rel_tol)) / scale
    margins.append(m_lower)

    m_coord = min(
        (tau - e_norms[j] * entry_norms[j] * (1 - rel_tol)) / scale for j in range(n)
    )
    margins.append(m_coord)

    single = None
    if n == 1:
        expected = e_norms[0] * entry_norms[0]
        gap = abs(tau - expected) / max(expected, 1e-30)
        single = gap <= rel_tol
        margins.append(rel_tol - gap)

    return EquivalenceReport(
        upper_holds=m_upper >= 0.0,
        lower_holds=m_lower >= 0.0,
        coordinate_holds=m_coord >= 0.0,
        single_equality=single,
        worst_margin=float(min(margins)),
    )


# ---------------------------------------------------------------------------
# norm-structure profiles shared with the operator-norm machinery
# ---------------------------------------------------------------------------


def norm_profile(space: BanachSpaceSpec | FunctionSpaceSpec) -> tuple[str, np.ndarray | None]:
    """Classify a space norm for exact operator-norm paths.

    Returns (kind, c) with kind in {"one", "two", "inf", "other"}:

    * "one":  unit-ball extreme points are +-e_j / c_j
    * "two":  ||v|| = ||diag(c) v||_2
    * "inf":  ||v|| = max_i c_i |v_i|
    """
    if isinstance(space, BanachSpaceSpec):
        d = space.dimension
        inner = space.norm
        if isinstance(inner, FunctionSpaceSpec):
            return norm_profile(inner)
        if inner.kind == "lp":
            c = np.ones(d)
            if inner.p == 1.0:
                return "one", c
            if inner.p == 2.0:
                return "two", c
            if math.isinf(inner.p):
                return "inf", c
            return "other", None
        if inner.kind == "weighted_lp":
            w = np.asarray(inner.weights, dtype=float)[:d]
            if inner.p == 1.0:
                return "one", w
            if inner.p == 2.0:
                return "two", np.sqrt(w)
            if math.isinf(inner.p):
                return "inf", w
            return "other", None
        return "other", None
    mu = space.measure.mu()
    if space.p == 1.0:
        return "one", mu
    if space.p == 2.0:
        return "two", np.sqrt(mu)
    if math.isinf(space.p):
        return "inf", np.ones(mu.size)
    return "other", None


def space_dimension(space: BanachSpaceSpec | FunctionSpaceSpec) -> int:
    if isinstance(space, BanachSpaceSpec):
        return space.dimension
    return space.atom_count


def space_norm(space: BanachSpaceSpec | FunctionSpaceSpec, v) -> float:
    if isinstance(space, BanachSpaceSpec):
        return space.norm_of(v)
    return x_norm(space.element(v))


def space_dual_norm(space: BanachSpaceSpec | FunctionSpaceSpec, phi) -> float:
    """Norm of the plain-dot functional phi on the space."""
    if isinstance(space, BanachSpaceSpec):
        return space.dual_norm_of(phi)
    f = np.atleast_1d(np.asarray(phi, dtype=float))
    return x_dual_norm(f / space.measure.mu(), space)


def space_norming_vector(space: BanachSpaceSpec | FunctionSpaceSpec, phi) -> np.ndarray:
    if isinstance(space, BanachSpaceSpec):
        return space.norming_vector(phi)
    f = np.atleast_1d(np.asarray(phi, dtype=float))
    return bfs.norming_vector_for_density(space, f / space.measure.mu())
