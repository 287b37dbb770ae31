"""Coefficient-level actions of the two second-order operators.

Both operators exist in two variables related by t = 1-u. The t-forms carry a
rational 1/(1-t) zero-order term that must cancel on polynomial input; the
u-forms (conjugated by Psi) are polynomial-coefficient transforms outright.
Everything here acts exactly on coefficient sequences; sampling only appears in
the conjugation residual check.
"""

from __future__ import annotations

import math

import numpy as np

from .linalg import VectorPoly
from .structure import StructureSet, psi_at

__all__ = [
    "hypergeometric_action",
    "apply_D_u",
    "apply_E_u",
    "apply_D_t",
    "apply_E_t",
    "conjugation_residual",
]


def hypergeometric_action(Cm, Um, Vm, F: VectorPoly) -> VectorPoly:
    """Coefficients of x(1-x)F'' + (C - xU)F' - VF for matrix parameters C, U, V.

    Power p of the result is (p+1)(p I + C)F_{p+1} - (p(p-1) I + p U + V)F_p.
    """
    Cm = np.asarray(Cm, dtype=float)
    Um = np.asarray(Um, dtype=float)
    Vm = np.asarray(Vm, dtype=float)
    c = F.coeffs
    d = F.degree
    out = np.zeros_like(c)
    for p in range(d + 1):
        out[p] = -(p * (p - 1) * c[p] + p * (c[p] @ Um.T) + c[p] @ Vm.T)
        if p + 1 <= d:
            out[p] += (p + 1) * (p * c[p + 1] + c[p + 1] @ Cm.T)
    return VectorPoly(out).trim()


def apply_D_u(st: StructureSet, F: VectorPoly) -> VectorPoly:
    """First operator in u: u(1-u)F'' + (U-C-uU)F' - VF."""
    return hypergeometric_action(st.U - st.C, st.U, st.V, F)


def apply_E_u(st: StructureSet, F: VectorPoly) -> VectorPoly:
    """Second operator in u: (1-u)(M0-M1+uM1)F'' + (P1-P0-uP1)F' - (m-k)VF."""
    mk = float(st.params.m_eff) - st.params.k
    M0, M1, P0, P1, V = st.M0, st.M1, st.P0, st.P1, st.V
    c = F.coeffs
    d = F.degree
    out = np.zeros_like(c)
    for p in range(d + 1):
        out[p] = -(p * (p - 1) * (c[p] @ M1.T) + p * (c[p] @ P1.T) + mk * (c[p] @ V.T))
        if p + 1 <= d:
            out[p] += (p + 1) * (p * (c[p + 1] @ (2 * M1 - M0).T) + c[p + 1] @ (P1 - P0).T)
        if p + 2 <= d:
            out[p] += (p + 2) * (p + 1) * (c[p + 2] @ (M0 - M1).T)
    return VectorPoly(out).trim()


def _div_by_one_minus_t(coeffs: np.ndarray, rel_tol: float = 1e-9) -> np.ndarray:
    """Quotient of sum_j g_j t^j by (1-t); the remainder is g(1) and must vanish."""
    q = np.cumsum(coeffs, axis=0)
    rem = float(np.abs(q[-1]).max())
    scale = max(float(np.abs(coeffs).max()), 1.0)
    if rem > rel_tol * scale:
        raise ValueError(
            f"not divisible by (1-t): remainder {rem:.3e} exceeds {rel_tol:g} x scale {scale:.3e}"
        )
    if len(coeffs) == 1:
        return np.zeros_like(coeffs)
    return q[:-1]


def apply_D_t(st: StructureSet, H: VectorPoly) -> VectorPoly:
    """First operator in t: -(t(1-t)H'' + (A0 - t(A0+n))H' + (1-t)^{-1}(B0+tB1)H).

    Raises when the zero-order term fails to cancel against (1-t), which signals
    input outside the operator's natural domain image.
    """
    n = float(st.params.n_eff)
    A0 = st.A0
    c = H.coeffs
    d = H.degree
    dim = H.dim
    g = np.zeros((d + 2, dim))
    g[: d + 1] += c @ st.B0.T
    g[1:] += c @ st.B1.T
    q = _div_by_one_minus_t(g)
    out = np.zeros((d + 1, dim))
    out[: len(q)] += q
    for p in range(d + 1):
        out[p] -= p * (p - 1) * c[p] + p * (c[p] @ A0.T + n * c[p])
        if p + 1 <= d:
            out[p] += (p + 1) * p * c[p + 1] + (p + 1) * (c[p + 1] @ A0.T)
    return VectorPoly(-out).trim()


def apply_E_t(st: StructureSet, H: VectorPoly) -> VectorPoly:
    """Second operator in t: -(t(1-t)M H'' + (C0 - tC1)H' + (1-t)^{-1}(D0+tD1)H)."""
    Md, C0, C1 = st.Mdiag, st.C0, st.C1
    c = H.coeffs
    d = H.degree
    dim = H.dim
    g = np.zeros((d + 2, dim))
    g[: d + 1] += c @ st.D0.T
    g[1:] += c @ st.D1.T
    q = _div_by_one_minus_t(g)
    out = np.zeros((d + 1, dim))
    out[: len(q)] += q
    for p in range(d + 1):
        out[p] -= p * (p - 1) * (c[p] @ Md.T) + p * (c[p] @ C1.T)
        if p + 1 <= d:
            out[p] += (p + 1) * p * (c[p + 1] @ Md.T) + (p + 1) * (c[p + 1] @ C0.T)
    return VectorPoly(-out).trim()


def _e_tilde_t(st: StructureSet, F: VectorPoly) -> VectorPoly:
    """Conjugated second operator in t: t(M0-tM1)F'' + (P0-tP1)F' - (m-k)VF."""
    mk = float(st.params.m_eff) - st.params.k
    M0, M1, P0, P1, V = st.M0, st.M1, st.P0, st.P1, st.V
    c = F.coeffs
    d = F.degree
    out = np.zeros_like(c)
    for p in range(d + 1):
        out[p] = -(p * (p - 1) * (c[p] @ M1.T) + p * (c[p] @ P1.T) + mk * (c[p] @ V.T))
        if p + 1 <= d:
            out[p] += (p + 1) * (p * (c[p + 1] @ M0.T) + c[p + 1] @ P0.T)
    return VectorPoly(out).trim()


def _psi_times_t(X: np.ndarray, F: VectorPoly) -> VectorPoly:
    """H = X diag((1-t)^s) F as an exact polynomial in t."""
    d, dim = F.degree, F.dim
    tf = np.zeros((d + dim, dim))
    for s in range(dim):
        binomial = np.array([math.comb(s, i) * (-1.0) ** i for i in range(s + 1)])
        conv = np.convolve(F.coeffs[:, s], binomial)
        tf[: len(conv), s] = conv
    return VectorPoly(tf @ X.T)


def conjugation_residual(st: StructureSet, F: VectorPoly, samples, which: str = "D") -> float:
    """Mismatch between Psi times the conjugated action and the raw t-form operator.

    F is a polynomial in t; samples are u-points in (0,1), evaluated at t = 1-u.
    Returns the max sample residual divided by scale = max(1, magnitudes of both
    sides), so a return value <= tol satisfies a "<= tol x scale" contract.
    """
    params = st.params
    H = _psi_times_t(st.X, F)
    if which == "D":
        tilde = hypergeometric_action(st.C, st.U, st.V, F)
        raw = apply_D_t(st, H)
    elif which == "E":
        tilde = _e_tilde_t(st, F)
        raw = apply_E_t(st, H)
    else:
        raise ValueError("which must be 'D' or 'E'")
    worst = 0.0
    scale = 1.0
    for u in np.atleast_1d(np.asarray(samples, dtype=float)):
        if not 0.0 < u < 1.0:
            raise ValueError("samples must lie in (0,1)")
        t = 1.0 - u
        lhs = psi_at(params, u) @ tilde.evaluate_at(t)
        rhs = -raw.evaluate_at(t)
        worst = max(worst, float(np.abs(lhs - rhs).max()))
        scale = max(scale, float(np.abs(lhs).max()), float(np.abs(rhs).max()))
    return worst / scale
