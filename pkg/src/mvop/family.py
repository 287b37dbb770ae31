"""Construction of the polynomial eigenfunction family.

Each label (w, r) in S yields the polynomial F_{w,r}(u) of degree w via the
matrix hypergeometric series started at the normalized eigenvector of M(lambda).
From F the module recovers H = Psi F, the profile on the circle parameter, the
t-power three-term recursion residual, and the vanishing orders at t = 0 that
appear once m is negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hypergeom import H1Series, h1_apply
from .linalg import MatrixPoly, VectorPoly
from .params import ParamError, Params, SpectralPair, in_S, lambda_eig, mu_eig
from .spectral import eigvec
from .structure import StructureSet, build_structure, pascal

__all__ = [
    "EigenFunction",
    "PolynomialPackage",
    "f_wr",
    "assemble_P",
    "h_from_f",
    "reexpand_in_t",
    "spherical_profile",
    "t_recursion_residual",
    "vanishing_orders",
]

# Series length margin beyond the guaranteed termination degree w.
_TERMINATION_MARGIN = 10
_LEADING_TOL = 1e-10


@dataclass(frozen=True)
class EigenFunction:
    w: int
    r: int
    spectral: SpectralPair
    poly: VectorPoly


@dataclass(frozen=True)
class PolynomialPackage:
    w: int
    P: MatrixPoly


def f_wr(params: Params, w: int, r: int, structure: StructureSet | None = None) -> EigenFunction:
    """Eigenfunction F_{w,r}: the terminating series applied to the eigenvector at 0.

    The series must terminate at degree exactly w, with leading coefficient of
    the shape (x_0..x_r, 0..0), x_r nonzero; violations raise rather than
    returning a defective family member.
    """
    if not in_S(params, w, r):
        raise ParamError(f"label (w={w}, r={r}) outside the admissible set S")
    st = structure if structure is not None else build_structure(params)
    lam = lambda_eig(params, w, r)
    mu = mu_eig(params, w, r)
    v0 = eigvec(st, lam, r)
    dim = st.dim
    series = H1Series.build(st.U - st.C, st.U, st.V + float(lam) * np.eye(dim),
                            w + _TERMINATION_MARGIN)
    poly = h1_apply(series, v0, must_terminate=True)
    if poly.degree != w:
        raise RuntimeError(f"series terminated at degree {poly.degree}, expected w={w}")
    lead = poly.coeffs[-1]
    scale = poly.max_abs
    if abs(lead[r]) <= _LEADING_TOL * scale:
        raise RuntimeError(f"leading coefficient entry {r} vanished for label ({w},{r})")
    if r + 1 <= st.ell and np.abs(lead[r + 1:]).max() > _LEADING_TOL * scale:
        raise RuntimeError(f"leading coefficient extends past position r={r} for label ({w},{r})")
    return EigenFunction(w=w, r=r, spectral=SpectralPair(w, r, lam, mu), poly=poly)


def assemble_P(params: Params, w: int, structure: StructureSet | None = None) -> PolynomialPackage:
    """Stack the row vectors F_{w,r}^t, r = 0..ell, into one matrix polynomial."""
    st = structure if structure is not None else build_structure(params)
    dim = st.dim
    rows = [f_wr(params, w, r, st) for r in range(dim)]
    coeffs = np.zeros((w + 1, dim, dim))
    for r, ef in enumerate(rows):
        coeffs[: ef.poly.degree + 1, r, :] = ef.poly.coeffs
    lead = coeffs[-1]
    scale = float(np.abs(coeffs).max())
    upper = np.triu(lead, 1)
    if np.abs(upper).max() > _LEADING_TOL * scale:
        raise RuntimeError(f"leading coefficient of P_{w} is not lower triangular")
    if (np.abs(np.diag(lead)) <= _LEADING_TOL * scale).any():
        raise RuntimeError(f"leading coefficient of P_{w} is singular on the diagonal")
    return PolynomialPackage(w=w, P=MatrixPoly(coeffs))


def h_from_f(params: Params, F: VectorPoly) -> VectorPoly:
    """H = Psi F in the u variable; component s of Psi-free input is shifted by u^s, then X acts."""
    X = pascal(params.ell).astype(float)
    d, dim = F.degree, F.dim
    shifted = np.zeros((d + dim, dim))
    for s in range(dim):
        shifted[s: s + d + 1, s] = F.coeffs[:, s]
    return VectorPoly(shifted @ X.T).trim()


def reexpand_in_t(F: VectorPoly) -> VectorPoly:
    """Rewrite sum_p u^p c_p in powers of t = 1-u, exactly via binomials."""
    d = F.degree
    out = np.zeros_like(F.coeffs)
    for j in range(d + 1):
        acc = np.zeros_like(F.coeffs[0])
        for p in range(j, d + 1):
            acc += math.comb(p, j) * F.coeffs[p]
        out[j] = (-1.0) ** j * acc
    return VectorPoly(out)


def spherical_profile(params: Params, w: int, r: int, theta_grid) -> np.ndarray:
    """Profile values phi_s(theta) = t^((m+ell-s)/2) h_s(t), t = cos^2(theta).

    Rows follow theta_grid, columns s = 0..ell. Requires |theta| < pi/2.
    """
    theta = np.atleast_1d(np.asarray(theta_grid, dtype=float))
    if (np.abs(theta) >= math.pi / 2).any():
        raise ParamError("theta must lie in the open interval (-pi/2, pi/2)")
    m = float(params.m_eff)
    ell = params.ell
    H = h_from_f(params, f_wr(params, w, r).poly)
    out = np.zeros((len(theta), ell + 1))
    for i, th in enumerate(theta):
        t = math.cos(th) ** 2
        h = H.evaluate_at(1.0 - t)
        for s in range(ell + 1):
            out[i, s] = t ** ((m + ell - s) / 2.0) * h[s]
    return out


def t_recursion_residual(params: Params, F: VectorPoly, lam: float,
                         structure: StructureSet | None = None) -> float:
    """Residual of the three-term recursion among the t-power coefficients of H = Psi F.

    lam is the u-form eigenvalue; the recursion lives in the t-form where the
    eigenvalue flips sign, handled internally. Returns max row residual divided
    by the largest coefficient magnitude, so <= tol means the contract
    "<= tol x coefficient scale" holds.
    """
    st = structure if structure is not None else build_structure(params)
    lam_t = -float(lam)
    n = float(params.n_eff)
    A0, B0, B1 = st.A0, st.B0, st.B1
    G = reexpand_in_t(h_from_f(params, F))
    c = G.coeffs
    d = G.degree
    dim = G.dim
    zero = np.zeros(dim)

    def coef(j: int) -> np.ndarray:
        return c[j] if 0 <= j <= d else zero

    worst = 0.0
    for j in range(d + 2):
        prev, cur, nxt = coef(j - 1), coef(j), coef(j + 1)
        row = ((j - 1) * (j - 2) - lam_t) * prev + (j - 1) * (A0 @ prev + n * prev) + B1 @ prev
        row -= (2 * j * (j - 1) - lam_t) * cur + j * (2 * (A0 @ cur) + n * cur) - B0 @ cur
        row += (j + 1) * (j * nxt + A0 @ nxt)
        worst = max(worst, float(np.abs(row).max()))
    scale = max(float(np.abs(c).max()), 1e-300)
    return worst / scale


def vanishing_orders(params: Params, F: VectorPoly) -> list[int]:
    """Order of vanishing at t = 0 of each component of H = Psi F.

    Only meaningful for Integer mode with m < 0, where the profile forces
    h_s to vanish to order at least s - m - ell for s >= m + ell + 1. A
    component that is zero throughout reports degree+1.
    """
    if params.is_jacobi or params.m >= 0:
        raise ParamError("not applicable: vanishing orders require integer m < 0")
    G = reexpand_in_t(h_from_f(params, F))
    scale = max(G.max_abs, 1e-300)
    orders = []
    for s in range(G.dim):
        col = np.abs(G.coeffs[:, s])
        nz = np.nonzero(col > 1e-10 * scale)[0]
        orders.append(int(nz[0]) if len(nz) else G.degree + 1)
    return orders
