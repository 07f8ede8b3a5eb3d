"""Matrix operators between the implemented spaces.

An operator is a real matrix together with domain and codomain space
descriptors.  Classification covers entrywise positivity, the regular
decomposition into positive parts, monomial lattice isomorphisms, and the
rank with its rank-one factorization.  Operator norms are exact for the
structured norm pairs (l1-type domains, sup-type codomains, 2-2 pairs,
positive matrices against linear-on-the-cone norms) and certified lower
estimates from seeded search otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bfs import FunctionSpaceSpec, LatticeElement
from .errors import InputError
from .tuple_norms import (
    BanachSpaceSpec,
    norm_profile,
    space_dimension,
    space_dual_norm,
    space_norm,
)

__all__ = [
    "LinearOperator",
    "FiniteRankDecomposition",
    "OperatorClassification",
    "apply",
    "apply_to_element",
    "compose",
    "operator_norm_estimate",
    "classify",
]

SpaceSpec = BanachSpaceSpec | FunctionSpaceSpec

_RANK_TOL = 1e-10


@dataclass(frozen=True)
class LinearOperator:
    matrix: np.ndarray
    domain: SpaceSpec
    codomain: SpaceSpec

    def __post_init__(self) -> None:
        m = np.atleast_2d(np.asarray(self.matrix, dtype=float)).copy()
        if m.shape != (space_dimension(self.codomain), space_dimension(self.domain)):
            raise InputError(
                f"matrix shape {m.shape} does not match codomain x domain "
                f"({space_dimension(self.codomain)}, {space_dimension(self.domain)})"
            )
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape


@dataclass(frozen=True)
class FiniteRankDecomposition:
    """T = sum_t (phi_t . v) w_t with plain-dot functionals phi_t."""

    terms: tuple[tuple[np.ndarray, np.ndarray], ...]  # (functional, codomain vector)

    def reconstruct(self, shape: tuple[int, int]) -> np.ndarray:
        out = np.zeros(shape)
        for phi, w in self.terms:
            out += np.outer(w, phi)
        return out


@dataclass(frozen=True)
class OperatorClassification:
    is_positive: bool
    positive_part: np.ndarray
    negative_part: np.ndarray
    is_lattice_iso: bool
    rank: int
    rank_warning: bool
    decomposition: FiniteRankDecomposition


def apply(T: LinearOperator, v) -> np.ndarray:
    w = np.atleast_1d(np.asarray(v, dtype=float))
    if w.size != T.shape[1]:
        raise InputError(f"vector length {w.size} does not match domain {T.shape[1]}")
    return T.matrix @ w


def apply_to_element(T: LinearOperator, f: LatticeElement) -> LatticeElement:
    if not isinstance(T.codomain, FunctionSpaceSpec):
        raise InputError("codomain is not a function space")
    return T.codomain.element(apply(T, f.values))


def compose(T: LinearOperator, S: LinearOperator) -> LinearOperator:
    """T after S; shapes must chain."""
    if T.shape[1] != S.shape[0]:
        raise InputError(f"cannot compose shapes {T.shape} and {S.shape}")
    return LinearOperator(T.matrix @ S.matrix, domain=S.domain, codomain=T.codomain)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------


def classify(T: LinearOperator) -> OperatorClassification:
    m = T.matrix
    pos = np.maximum(m, 0.0)
    neg = np.maximum(-m, 0.0)
    rank, warning, pivot_cols = _rank_by_elimination(m)
    decomposition = _rank_factorization(m, pivot_cols)
    return OperatorClassification(
        is_positive=not neg.any(),
        positive_part=pos,
        negative_part=neg,
        is_lattice_iso=_is_monomial_invertible(m),
        rank=rank,
        rank_warning=warning,
        decomposition=decomposition,
    )


def _is_monomial_invertible(m: np.ndarray) -> bool:
    # positive multiple of a permutation: one positive entry per row and column
    if m.shape[0] != m.shape[1]:
        return False
    if (m < 0).any():
        return False
    row_nz = (m > 0).sum(axis=1)
    col_nz = (m > 0).sum(axis=0)
    return bool(np.all(row_nz == 1) and np.all(col_nz == 1))


def _rank_by_elimination(m: np.ndarray) -> tuple[int, bool, list[int]]:
    """Gaussian elimination with partial pivoting; pivot tolerance 1e-10.

    Ranks decided by a pivot within a decade of the tolerance are flagged
    instead of silently accepted.
    """
    a = np.array(m, dtype=float)
    scale = max(float(np.max(np.abs(a))), 1.0)
    tol = _RANK_TOL * scale
    rows, cols = a.shape
    rank = 0
    warning = False
    pivot_cols: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        piv = r + int(np.argmax(np.abs(a[r:, c])))
        size = abs(a[piv, c])
        if tol / 10.0 <= size <= tol * 10.0:
            warning = True
        if size <= tol:
            continue
        a[[r, piv]] = a[[piv, r]]
        a[r + 1 :] -= np.outer(a[r + 1 :, c] / a[r, c], a[r])
        pivot_cols.append(c)
        rank += 1
        r += 1
    return rank, warning, pivot_cols


def _rank_factorization(m: np.ndarray, pivot_cols: list[int]) -> FiniteRankDecomposition:
    """Rank-one terms from the pivot columns: T = C R, terms (row of R, col of C)."""
    if not pivot_cols:
        return FiniteRankDecomposition(terms=())
    c_block = m[:, pivot_cols]
    coeffs, *_ = np.linalg.lstsq(c_block, m, rcond=None)
    terms = tuple(
        (coeffs[i].copy(), c_block[:, i].copy()) for i in range(len(pivot_cols))
    )
    return FiniteRankDecomposition(terms=terms)


# ---------------------------------------------------------------------------
# operator norm
# ---------------------------------------------------------------------------


def operator_norm_estimate(
    T: LinearOperator, budget: int = 400, seed: int = 0
) -> tuple[float, float | None]:
    """(lower bound, certified upper bound or None) for the operator norm."""
    res = _op_norm_search(T, budget, seed)
    return res.lower, res.upper


@dataclass(frozen=True)
class OpNormResult:
    lower: float
    upper: float | None
    witness: np.ndarray
    method: str


def _op_norm_search(T: LinearOperator, budget: int, seed: int) -> OpNormResult:
    if budget < 1:
        raise InputError("operator-norm budget must be >= 1")
    m = T.matrix
    d = T.shape[1]
    if not m.any():
        return OpNormResult(0.0, 0.0, np.zeros(d), "zero")

    dom_kind, dom_c = norm_profile(T.domain)
    cod_kind, cod_c = norm_profile(T.codomain)
    positive = not (m < 0).any()

    # exact structured paths
    if dom_kind == "one":
        best, best_v = -1.0, None
        for j in range(d):
            e = np.zeros(d)
            e[j] = 1.0 / dom_c[j]
            val = space_norm(T.codomain, m @ e)
            if val > best:
                best, best_v = val, e
        return OpNormResult(best, best, best_v, "extreme-columns")
    if cod_kind == "inf" and dom_kind in ("one", "two", "inf"):
        vals = [cod_c[i] * space_dual_norm(T.domain, m[i]) for i in range(m.shape[0])]
        i = int(np.argmax(vals))
        from .tuple_norms import space_norming_vector

        witness = space_norming_vector(T.domain, m[i])
        return OpNormResult(float(vals[i]), float(vals[i]), witness, "row-duals")
    if dom_kind == "two" and cod_kind == "two":
        sigma, v = _power_iteration(np.diag(cod_c) @ m @ np.diag(1.0 / dom_c))
        return OpNormResult(sigma, sigma, v / dom_c, "power-iteration")
    if positive and dom_kind == "inf":
        v = 1.0 / dom_c
        val = space_norm(T.codomain, m @ v)
        return OpNormResult(val, val, v, "positive-cube-top")
    if positive and cod_kind == "one":
        ell = cod_c @ m  # codomain norm is linear on the positive cone
        val = space_dual_norm(T.domain, ell)
        from .tuple_norms import space_norming_vector

        witness = space_norming_vector(T.domain, ell)
        return OpNormResult(val, val, witness, "positive-linearized")

    # seeded search: certified lower bound only
    rng = np.random.default_rng(seed)
    starts = [np.ones(d)]
    for j in range(d):
        e = np.zeros(d)
        e[j] = 1.0
        starts.append(e)

    def ratio(v: np.ndarray) -> float:
        nrm = space_norm(T.domain, v)
        if nrm == 0.0:
            return 0.0
        return space_norm(T.codomain, m @ v) / nrm

    best, best_v = 0.0, np.ones(d)
    spent = 0
    for s in starts:
        val = ratio(s)
        spent += 1
        if val > best:
            best, best_v = val, s
    while spent < budget:
        v = rng.standard_normal(d)
        spent += 1
        val = ratio(v)
        if val > best:
            best, best_v = val, v
        # multiplicative coordinate ascent around the incumbent
        for _ in range(3):
            if spent >= budget:
                break
            cand = best_v.copy()
            i = rng.integers(d)
            cand[i] *= rng.choice((0.5, 0.9, 1.1, 2.0))
            spent += 1
            val = ratio(cand)
            if val > best:
                best, best_v = val, cand
    nrm = space_norm(T.domain, best_v)
    if nrm > 0:
        best_v = best_v / nrm
    return OpNormResult(best, None, best_v, "search")


def _power_iteration(b: np.ndarray, rel_tol: float = 1e-12, max_iter: int = 20000) -> tuple[float, np.ndarray]:
    """Largest singular value of b and a maximizing unit vector."""
    d = b.shape[1]
    v = np.ones(d) + 1e-3 * np.arange(d)
    v /= math.sqrt(float(v @ v))
    gram = b.T @ b
    sigma = 0.0
    for _ in range(max_iter):
        w = gram @ v
        nrm = math.sqrt(float(w @ w))
        if nrm == 0.0:
            return 0.0, v
        v_new = w / nrm
        sigma_new = math.sqrt(float(v_new @ gram @ v_new))
        if abs(sigma_new - sigma) <= rel_tol * max(sigma_new, 1e-300):
            return sigma_new, v_new
        sigma, v = sigma_new, v_new
    return sigma, v
