"""Krivine-style functional calculus, realized pointwise on finite lattices.

On a function lattice over atoms the calculus sending coordinate
projections to the tuple entries is simply pointwise evaluation:

    tau_x(h)(atom) = h(x_1(atom), ..., x_n(atom))

This operator is linear and preserves joins, and by the uniqueness of the
calculus with those two properties the pointwise realization is the
calculus on these spaces.  The module also provides the lattice-valued
tuple norm, the sup norm over the cube sphere, composition with vector
homogeneous maps, and the dual-join lower bound for the tuple norm.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .bfs import FunctionSpaceSpec, LatticeElement, pointwise_lattice, x_norm
from .bsl import DualVector, SequenceLatticeSpec, aligned_dual, partial_sum_norm, sample_dual_ball, y_norm
from .errors import InputError

__all__ = [
    "HomogeneousFn",
    "HomogeneousMap",
    "TupleX",
    "projection",
    "ynorm_fn",
    "linear_fn",
    "max_abs_fn",
    "tau_apply",
    "y_norm_of_tuple",
    "h_sup_norm",
    "jg_transform",
    "dual_join_lower_bound",
    "homogeneous_from_json",
]


@dataclass(frozen=True)
class HomogeneousFn:
    """A continuous, degree-1 positively homogeneous function on R^n.

    ``sup_norm_exact`` carries the analytic sup over the cube sphere when
    the constructor knows it (norms, projections, linear maps); the search
    in :func:`h_sup_norm` is only used when it is None.
    """

    arity: int
    evaluator: Callable[[np.ndarray], float]
    label: str
    sup_norm_exact: float | None = None

    def __call__(self, t) -> float:
        v = np.asarray(t, dtype=float)
        if v.size != self.arity:
            raise InputError(f"{self.label} has arity {self.arity}, got {v.size}")
        return float(self.evaluator(v))

    def __add__(self, other: "HomogeneousFn") -> "HomogeneousFn":
        _same_arity(self, other)
        return HomogeneousFn(
            self.arity,
            lambda t, a=self.evaluator, b=other.evaluator: a(t) + b(t),
            f"({self.label} + {other.label})",
        )

    def __rmul__(self, scalar: float) -> "HomogeneousFn":
        s = float(scalar)
        return HomogeneousFn(
            self.arity,
            lambda t, a=self.evaluator: s * a(t),
            f"{s:g}*{self.label}",
        )

    def join(self, other: "HomogeneousFn") -> "HomogeneousFn":
        _same_arity(self, other)
        return HomogeneousFn(
            self.arity,
            lambda t, a=self.evaluator, b=other.evaluator: max(a(t), b(t)),
            f"({self.label} v {other.label})",
        )

    def meet(self, other: "HomogeneousFn") -> "HomogeneousFn":
        _same_arity(self, other)
        return HomogeneousFn(
            self.arity,
            lambda t, a=self.evaluator, b=other.evaluator: min(a(t), b(t)),
            f"({self.label} ^ {other.label})",
        )


def _same_arity(a: HomogeneousFn, b: HomogeneousFn) -> None:
    if a.arity != b.arity:
        raise InputError(f"arity mismatch: {a.arity} vs {b.arity}")


def projection(arity: int, j: int) -> HomogeneousFn:
    """The j-th coordinate projection (j is 1-based, as in the JSON form)."""
    if not 1 <= j <= arity:
        raise InputError(f"projection index {j} outside 1..{arity}")
    return HomogeneousFn(arity, lambda t, i=j - 1: t[i], f"proj{j}", sup_norm_exact=1.0)


def ynorm_fn(spec: SequenceLatticeSpec, arity: int) -> HomogeneousFn:
    """t -> y_norm(spec, t); its cube-sphere sup is attained at all-ones."""
    return HomogeneousFn(
        arity,
        lambda t: y_norm(spec, t),
        f"ynorm[{spec.label()}]",
        sup_norm_exact=partial_sum_norm(spec, arity),
    )


def linear_fn(a: Sequence[float]) -> HomogeneousFn:
    """t -> sum a_i t_i; cube-sphere sup is sum |a_i| (sign-pattern corner)."""
    coeffs = np.asarray(a, dtype=float)
    if coeffs.size < 1:
        raise InputError("linear_fn needs at least one coefficient")
    return HomogeneousFn(
        coeffs.size,
        lambda t: float(np.dot(coeffs, t)),
        "linear",
        sup_norm_exact=float(np.sum(np.abs(coeffs))),
    )


def max_abs_fn(arity: int) -> HomogeneousFn:
    return HomogeneousFn(
        arity, lambda t: float(np.max(np.abs(t))), "max|.|", sup_norm_exact=1.0
    )


def homogeneous_from_json(obj: dict, arity: int) -> HomogeneousFn:
    """Build a homogeneous function from its JSON tag.

    Tags: {"h":"projection","j":1}, {"h":"ynorm","spec":{...}},
    {"h":"linear","a":[...]}, {"h":"join","of":[tag,...]}.
    """
    tag = obj.get("h")
    if tag == "projection":
        return projection(arity, int(obj["j"]))
    if tag == "ynorm":
        return ynorm_fn(SequenceLatticeSpec.from_json(obj["spec"]), arity)
    if tag == "linear":
        return linear_fn(obj["a"])
    if tag == "join":
        parts = [homogeneous_from_json(sub, arity) for sub in obj["of"]]
        if not parts:
            raise InputError("join tag needs at least one part")
        out = parts[0]
        for part in parts[1:]:
            out = out.join(part)
        return out
    raise InputError(f"unknown homogeneous-function tag {obj!r}")


@dataclass(frozen=True)
class TupleX:
    """An ordered tuple (x_1, ..., x_n) of elements of one function space."""

    elements: tuple[LatticeElement, ...]

    def __post_init__(self) -> None:
        if len(self.elements) < 1:
            raise InputError("tuple must be nonempty")
        space = self.elements[0].space
        if any(e.space != space for e in self.elements):
            raise InputError("tuple elements live in different spaces")
        object.__setattr__(self, "elements", tuple(self.elements))

    @property
    def space(self) -> FunctionSpaceSpec:
        return self.elements[0].space

    def __len__(self) -> int:
        return len(self.elements)

    def values_matrix(self) -> np.ndarray:
        """(atom_count, n) matrix; row = the tuple's values at one atom."""
        return np.column_stack([e.values for e in self.elements])

    @staticmethod
    def from_matrix(space: FunctionSpaceSpec, matrix) -> "TupleX":
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != space.atom_count:
            raise InputError("matrix shape does not match the space")
        return TupleX(tuple(LatticeElement(m[:, j], space) for j in range(m.shape[1])))


@dataclass(frozen=True)
class HomogeneousMap:
    """G = (g_1, ..., g_m) with every component homogeneous of one arity."""

    components: tuple[HomogeneousFn, ...]

    def __post_init__(self) -> None:
        if len(self.components) < 1:
            raise InputError("homogeneous map needs at least one component")
        n = self.components[0].arity
        if any(g.arity != n for g in self.components):
            raise InputError("components have mixed arities")
        object.__setattr__(self, "components", tuple(self.components))

    @property
    def arity(self) -> int:
        return self.components[0].arity

    def __call__(self, t) -> np.ndarray:
        v = np.asarray(t, dtype=float)
        return np.array([g(v) for g in self.components])

    def apply_to_tuple(self, x: TupleX) -> TupleX:
        """G(x) componentwise through the calculus: a tuple of length m."""
        return TupleX(tuple(tau_apply(g, x) for g in self.components))


def tau_apply(h: HomogeneousFn, x: TupleX) -> LatticeElement:
    """Apply the calculus: atomwise h on the tuple values."""
    if h.arity != len(x):
        raise InputError(f"{h.label} has arity {h.arity}, tuple has {len(x)}")
    rows = x.values_matrix()
    out = np.array([h.evaluator(rows[i]) for i in range(rows.shape[0])], dtype=float)
    return LatticeElement(out, x.space)


def y_norm_of_tuple(spec: SequenceLatticeSpec, x: TupleX) -> LatticeElement:
    """The lattice-valued tuple norm ||(x_1,...,x_n)||_Y as an element of X."""
    rows = x.values_matrix()
    out = np.array([y_norm(spec, rows[i]) for i in range(rows.shape[0])])
    return LatticeElement(out, x.space)


def h_sup_norm(h: HomogeneousFn, samples: int = 256, seed: int = 0) -> float:
    """sup{|h(t)| : max|t_i| = 1}, analytic when known, else a lower estimate.

    The search enumerates all sign-pattern corners when the arity allows it
    (convex h attains the sup there), adds random sphere points, and refines
    by coordinate ascent inside the cube.
    """
    if h.sup_norm_exact is not None:
        return h.sup_norm_exact
    n = h.arity

    def score(t: np.ndarray) -> float:
        peak = float(np.max(np.abs(t)))
        if peak == 0.0:
            return 0.0
        return abs(h.evaluator(t / peak))

    best = 0.0
    best_t = np.ones(n)
    if n <= 12:
        for signs in itertools.product((-1.0, 1.0), repeat=n):
            t = np.array(signs)
            v = score(t)
            if v > best:
                best, best_t = v, t
    rng = np.random.default_rng(seed)
    for _ in range(max(samples, 0)):
        t = rng.uniform(-1.0, 1.0, size=n)
        v = score(t)
        if v > best:
            best, best_t = v, t
    t = best_t.astype(float)
    for step in (0.5, 0.2, 0.05, 0.01, 2e-3, 4e-4, 1e-4):
        improved = True
        while improved:
            improved = False
            for i in range(n):
                for delta in (step, -step):
                    cand = t.copy()
                    cand[i] = min(max(cand[i] + delta, -1.0), 1.0)
                    v = score(cand)
                    if v > best:
                        best, t = v, cand
                        improved = True
    return best


def jg_transform(G: HomogeneousMap, h: HomogeneousFn) -> HomogeneousFn:
    """The pullback h o G, homogeneous of the map's input arity."""
    if h.arity != len(G.components):
        raise InputError(
            f"{h.label} has arity {h.arity}, map has {len(G.components)} components"
        )
    return HomogeneousFn(
        G.arity,
        lambda t, G=G, h=h: h.evaluator(G(t)),
        f"{h.label} o G",
    )


def dual_join_lower_bound(
    spec: SequenceLatticeSpec, x: TupleX, k: int, seed: int = 0
) -> tuple[LatticeElement, float]:
    """Join of k dual-ball linear combinations: a pointwise lower bound.

    Returns (join, x_norm(join)).  The join sits below the lattice-valued
    tuple norm in the order of X, and its norm is a lower bound for the
    scalar tuple norm that is nondecreasing in k for nested samples.  The
    sample starts with the norming dual vector of each atom's value row, so
    for the analytic l^p kinds the bound attains the tuple norm once k
    reaches the atom count.
    """
    k = max(int(k), 1)
    n = len(x)
    rows = x.values_matrix()
    duals: list[np.ndarray] = []
    for i in range(rows.shape[0]):
        a = aligned_dual(spec, rows[i])
        if a.any():
            duals.append(a)
    if len(duals) < k:
        for dv in sample_dual_ball(spec, n, k - len(duals), seed):
            duals.append(np.asarray(dv.coeffs))
    combos = rows @ np.column_stack(duals[:k])  # (atoms, k): sum_i a_ij x_i
    join_values = combos.max(axis=1)
    join_el = LatticeElement(join_values, x.space)
    return join_el, x_norm(join_el)
