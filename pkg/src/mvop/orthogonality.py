"""Weight matrices on [0,1], quadrature, inner products, Gram assembly.

The diagonal weight V(u) and the full weight W(u) = Psi*(u) V(u) Psi(u) both
carry the scalar prefactor 2n, so the defining identity holds entry by entry.
Integer mode integrates with a single Gauss-Legendre rule (every integrand is a
polynomial whose degree is bookkept). In Jacobi mode the weight exponents are
real, so the inner product is factored through V and each diagonal term gets a
Gauss-Jacobi rule that absorbs u^beta (1-u)^(alpha+ell-r) exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .family import assemble_P, f_wr
from .linalg import MatrixPoly, VectorPoly
from .params import ParamError, Params, in_S, validate
from .structure import build_structure, pascal

__all__ = [
    "WeightSpec",
    "GramResult",
    "weight_V_at",
    "weight_W_at",
    "quad_rule",
    "inner_vec",
    "inner_mat",
    "gram",
    "max_offdiag_ratio",
    "max_block_offdiag_ratio",
]


@dataclass(frozen=True)
class WeightSpec:
    params: Params

    @property
    def prefactor(self) -> float:
        return 2.0 * float(self.params.n_eff)


def _require_weight(params: Params) -> None:
    validate(params)
    if not params.is_jacobi and params.m < 0:
        raise ParamError("weight undefined for m<0")


def gen_binom(x, j: int) -> float:
    """binom(x, j) for real x and integer j >= 0 via the falling-factorial product.

    Matches math.comb on integers and gives binom(x, 0) = 1 for every x.
    """
    out = 1.0
    for i in range(j):
        out *= (x - i)
    return out / math.factorial(j)


def _weight_coeffs(params: Params) -> np.ndarray:
    """Diagonal coefficients binom(ell+k-r-1, ell-r) binom(n-k+r-1, r), r = 0..ell."""
    ell, k = params.ell, params.k
    n = float(params.n_eff)
    return np.array([gen_binom(ell + k - r - 1, ell - r) * gen_binom(n - k + r - 1, r)
                     for r in range(ell + 1)])


def weight_V_at(params: Params, u: float) -> np.ndarray:
    """Diagonal weight 2n sum_r c_r (1-u)^(m+ell-r) u^(n-1) E_rr."""
    _require_weight(params)
    m = float(params.m_eff)
    n = float(params.n_eff)
    ell = params.ell
    u = float(u)
    c = _weight_coeffs(params)
    vals = np.array([2.0 * n * c[r] * (1.0 - u) ** (m + ell - r) * u ** (n - 1.0)
                     for r in range(ell + 1)])
    return np.diag(vals)


def weight_W_at(params: Params, u: float) -> np.ndarray:
    """Full weight W(u) = Psi* V Psi, via its explicit double sum; exactly symmetric."""
    _require_weight(params)
    m = float(params.m_eff)
    n = float(params.n_eff)
    ell = params.ell
    u = float(u)
    c = _weight_coeffs(params)
    one_minus = np.array([(1.0 - u) ** (m + ell - r) for r in range(ell + 1)])
    W = np.zeros((ell + 1, ell + 1))
    for i in range(ell + 1):
        for j in range(i, ell + 1):
            acc = 0.0
            for r in range(j, ell + 1):
                acc += math.comb(r, i) * math.comb(r, j) * c[r] * one_minus[r]
            W[i, j] = W[j, i] = 2.0 * n * acc * u ** (i + j + n - 1.0)
    return W


def quad_rule(max_degree: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0,1], exact through max_degree."""
    if max_degree < 0:
        raise ParamError("max_degree >= 0 violated")
    return _gl_rule(max_degree // 2 + 1)


@lru_cache(maxsize=None)
def _gl_rule(npts: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(npts)
    return (x + 1.0) / 2.0, w / 2.0


@lru_cache(maxsize=None)
def _gj_rule(npts: int, a_exp: float, b_exp: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights on [0,1] with the weight u^b_exp (1-u)^a_exp folded in."""
    x, w = roots_jacobi(npts, a_exp, b_exp)
    return (x + 1.0) / 2.0, w * 0.5 ** (a_exp + b_exp + 1.0)


def _weight_poly_degree(params: Params) -> int:
    # Largest power of u in any W entry: (m+ell-r) + i + j + (n-1) <= m + 3 ell + n - 1.
    return int(params.m + 3 * params.ell + params.n - 1)


def inner_vec(wspec: WeightSpec, F1: VectorPoly, F2: VectorPoly, oversample: int = 1) -> float:
    """<F1, F2>_W = integral of F2(u)^t W(u) F1(u) over [0,1], exact quadrature."""
    params = wspec.params
    _require_weight(params)
    if params.is_jacobi:
        return _inner_vec_jacobi(params, F1, F2, oversample)
    deg = F1.degree + F2.degree + _weight_poly_degree(params)
    u, wq = _gl_rule(oversample * (deg // 2 + 1))
    total = 0.0
    for q in range(len(u)):
        W = weight_W_at(params, u[q])
        total += wq[q] * float(F2.evaluate_at(u[q]) @ W @ F1.evaluate_at(u[q]))
    return total


def _psi_row(params: Params, r: int, u: float) -> np.ndarray:
    return pascal(params.ell)[r].astype(float) * u ** np.arange(params.ell + 1, dtype=float)


def _inner_vec_jacobi(params: Params, F1: VectorPoly, F2: VectorPoly, oversample: int) -> float:
    alpha = float(params.m_eff)
    n = float(params.n_eff)
    ell = params.ell
    c = _weight_coeffs(params)
    pd = F1.degree + F2.degree + 2 * ell
    npts = oversample * (pd // 2 + 1)
    total = 0.0
    for r in range(ell + 1):
        u, wq = _gj_rule(npts, alpha + ell - r, n - 1.0)
        acc = 0.0
        for q in range(len(u)):
            row = _psi_row(params, r, u[q])
            acc += wq[q] * float(row @ F1.evaluate_at(u[q])) * float(row @ F2.evaluate_at(u[q]))
        total += 2.0 * n * c[r] * acc
    return total


def inner_mat(wspec: WeightSpec, P1: MatrixPoly, P2: MatrixPoly, oversample: int = 1) -> np.ndarray:
    """Matrix-level integral of P1(u) W(u) P2(u)^t over [0,1]."""
    params = wspec.params
    _require_weight(params)
    if params.is_jacobi:
        return _inner_mat_jacobi(params, P1, P2, oversample)
    deg = P1.degree + P2.degree + _weight_poly_degree(params)
    u, wq = _gl_rule(oversample * (deg // 2 + 1))
    out = np.zeros((P1.dim, P1.dim))
    for q in range(len(u)):
        W = weight_W_at(params, u[q])
        out += wq[q] * (P1.evaluate_at(u[q]) @ W @ P2.evaluate_at(u[q]).T)
    return out


def _inner_mat_jacobi(params: Params, P1: MatrixPoly, P2: MatrixPoly, oversample: int) -> np.ndarray:
    alpha = float(params.m_eff)
    n = float(params.n_eff)
    ell = params.ell
    c = _weight_coeffs(params)
    pd = P1.degree + P2.degree + 2 * ell
    npts = oversample * (pd // 2 + 1)
    out = np.zeros((P1.dim, P1.dim))
    for r in range(ell + 1):
        u, wq = _gj_rule(npts, alpha + ell - r, n - 1.0)
        acc = np.zeros_like(out)
        for q in range(len(u)):
            row = _psi_row(params, r, u[q])
            acc += wq[q] * np.outer(P1.evaluate_at(u[q]) @ row, P2.evaluate_at(u[q]) @ row)
        out += 2.0 * n * c[r] * acc
    return out


@dataclass(frozen=True)
class GramResult:
    labels: list
    matrix: np.ndarray
    blocks: dict


def gram(wspec: WeightSpec, wmax: int, oversample: int = 1) -> GramResult:
    """Vector-level Gram matrix over all labels (w <= wmax) plus matrix-level blocks."""
    params = wspec.params
    _require_weight(params)
    st = build_structure(params)
    labels = [(w, r) for w in range(wmax + 1) for r in range(params.ell + 1)
              if in_S(params, w, r)]
    polys = {lab: f_wr(params, lab[0], lab[1], st).poly for lab in labels}
    nlab = len(labels)
    matrix = np.zeros((nlab, nlab))
    for i in range(nlab):
        for j in range(i, nlab):
            val = inner_vec(wspec, polys[labels[i]], polys[labels[j]], oversample)
            matrix[i, j] = matrix[j, i] = val
    packs = {w: assemble_P(params, w, st).P for w in range(wmax + 1)}
    blocks = {}
    for w in range(wmax + 1):
        for wp in range(w, wmax + 1):
            blocks[(w, wp)] = inner_mat(wspec, packs[w], packs[wp], oversample)
    return GramResult(labels=labels, matrix=matrix, blocks=blocks)


def max_offdiag_ratio(matrix: np.ndarray) -> float:
    """Largest |off-diagonal| / sqrt(diag_i diag_j) of a Gram matrix."""
    d = np.sqrt(np.diag(matrix))
    worst = 0.0
    n = matrix.shape[0]
    for i in range(n):
        for j in range(n):
            if i != j:
                worst = max(worst, abs(matrix[i, j]) / (d[i] * d[j]))
    return worst


def max_block_offdiag_ratio(result: GramResult) -> float:
    """Matrix-level analogue: entries of every block, scaled by the diagonal norms.

    Block (w, w') entry (r, r') is the pairing of labels (w, r) and (w', r');
    every entry with (w, r) != (w', r') must vanish.
    """
    norms = {}
    for (w, wp), block in result.blocks.items():
        if w == wp:
            for r in range(block.shape[0]):
                norms[(w, r)] = math.sqrt(block[r, r])
    worst = 0.0
    for (w, wp), block in result.blocks.items():
        for r in range(block.shape[0]):
            for rp in range(block.shape[1]):
                if (w, r) == (wp, rp):
                    continue
                worst = max(worst, abs(block[r, rp]) / (norms[(w, r)] * norms[(wp, rp)]))
    return worst
