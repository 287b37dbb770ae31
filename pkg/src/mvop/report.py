"""Batch verification harness behind `mvop verify` and the acceptance suite.

Each check computes a worst-case residual over the labels (w, r) with w <= wmax
and compares it against the contract tolerance. Checks are grouped in three
suites (eigen, ortho, recursion); "all" runs everything applicable.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .family import assemble_P, f_wr, t_recursion_residual
from .linalg import VectorPoly
from .operators import apply_D_u, apply_E_u, conjugation_residual
from .orthogonality import (WeightSpec, gram, max_block_offdiag_ratio,
                            max_offdiag_ratio, weight_W_at)
from .params import Params, in_S, lambda_eig, mu_eig, mu_of_lambda, spectrum_injectivity_check
from .recurrence import blocks, three_term_residual, walk
from .spectral import build_M, charpoly_residual, m_superdiagonal
from .structure import build_structure, psi_at

__all__ = ["CheckResult", "RunReport", "run_suite", "run_grid", "default_grid", "thread_count"]

SUITES = ("eigen", "ortho", "recursion", "all")


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    max_residual: float
    tolerance: float
    wall_time: float


@dataclass(frozen=True)
class RunReport:
    params: dict
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.status == "pass" for c in self.checks)


def _labels(params: Params, wmax: int) -> list:
    return [(w, r) for w in range(wmax + 1) for r in range(params.ell + 1)
            if in_S(params, w, r)]


def _check(name, tol, fn) -> CheckResult:
    t0 = time.perf_counter()
    try:
        resid = float(fn())
    except Exception:
        return CheckResult(name, "fail", float("inf"), tol, time.perf_counter() - t0)
    status = "pass" if resid <= tol else "fail"
    return CheckResult(name, status, resid, tol, time.perf_counter() - t0)


def _eigen_checks(params: Params, wmax: int) -> list:
    st = build_structure(params)
    eigs = {lab: f_wr(params, lab[0], lab[1], st) for lab in _labels(params, wmax)}

    def operator_resid():
        worst = 0.0
        for ef in eigs.values():
            for apply_op, val in ((apply_D_u, ef.spectral.lam), (apply_E_u, ef.spectral.mu)):
                lhs = apply_op(st, ef.poly)
                rhs = ef.poly.scale(val)
                scale = max(1.0, lhs.max_abs, rhs.max_abs)
                worst = max(worst, (lhs - rhs).max_abs / scale)
        return worst

    def degree_leading():
        # f_wr already hard-checks termination and the leading-entry shape;
        # report the worst above-diagonal leakage in the leading coefficient.
        worst = 0.0
        for (w, r), ef in eigs.items():
            if ef.poly.degree != w:
                return float("inf")
            lead = ef.poly.coeffs[w]
            scale = max(ef.poly.max_abs, 1e-300)
            if r + 1 <= params.ell:
                worst = max(worst, float(np.abs(lead[r + 1:]).max()) / scale)
        return worst

    def charpoly():
        return max(charpoly_residual(st, ef.spectral.lam) for ef in eigs.values())

    def superdiag_flat():
        if params.ell == 0:
            return 0.0
        lams = [-0.37, 4.25]
        m_a = build_M(st, lams[0]).matrix
        m_b = build_M(st, lams[1]).matrix
        sup_a = np.diag(m_a, 1)
        sup_b = np.diag(m_b, 1)
        closed = m_superdiagonal(params)
        scale = max(1.0, float(np.abs(closed).max()))
        flat = float(np.abs(sup_a - sup_b).max())
        form = float(np.abs(sup_a - closed).max())
        return max(flat, form) / scale

    def conjugation():
        rng = np.random.default_rng(20240601)
        samples = rng.uniform(0.05, 0.95, size=8)
        worst = 0.0
        for _ in range(50):
            coeffs = rng.uniform(-1.0, 1.0, size=(5, params.ell + 1))
            F = VectorPoly(coeffs)
            for which in ("D", "E"):
                worst = max(worst, conjugation_residual(st, F, samples, which))
        return worst

    def exact_ids():
        wtop = max(8, wmax)
        for w in range(wtop + 1):
            for r in range(params.ell + 1):
                if not in_S(params, w, r):
                    continue
                lam = lambda_eig(params, w, r)
                mu = mu_eig(params, w, r)
                via = mu_of_lambda(params, r, lam)
                if params.is_jacobi:
                    if abs(mu - via) > 1e-12 * max(1.0, abs(mu)):
                        return 1.0
                elif mu != via:
                    return 1.0
        return 0.0 if spectrum_injectivity_check(params, 8) else 1.0

    return [
        _check("eigen/operator_residuals", 1e-9, operator_resid),
        _check("eigen/degree_and_leading", 1e-10, degree_leading),
        _check("eigen/charpoly", 1e-7, charpoly),
        _check("eigen/superdiag_flat", 1e-10, superdiag_flat),
        _check("eigen/conjugation", 1e-9, conjugation),
        _check("eigen/exact_identities", 0.5, exact_ids),
    ]


def _ortho_checks(params: Params, wmax: int) -> list:
    wspec = WeightSpec(params)
    gres = gram(wspec, wmax)

    def weight_consistency():
        # W must equal Psi* V Psi and stay symmetric positive definite inside (0,1).
        from .orthogonality import weight_V_at
        worst = 0.0
        for u in np.linspace(0.08, 0.92, 7):
            W = weight_W_at(params, u)
            psi = psi_at(params, u)
            rebuilt = psi.T @ weight_V_at(params, u) @ psi
            worst = max(worst, float(np.abs(W - rebuilt).max()) / max(1.0, float(np.abs(W).max())))
            if float(np.abs(W - W.T).max()) != 0.0:
                return float("inf")
            if float(np.linalg.eigvalsh(W).min()) <= 0.0:
                return float("inf")
        return worst

    return [
        _check("ortho/weight_consistency", 1e-12, weight_consistency),
        _check("ortho/gram_vector", 1e-9, lambda: max_offdiag_ratio(gres.matrix)),
        _check("ortho/gram_matrix", 1e-9, lambda: max_block_offdiag_ratio(gres)),
    ]


def _recursion_checks(params: Params, wmax: int) -> list:
    blks = {w: blocks(params, w) for w in range(wmax + 1)}

    def row_sums():
        worst = 0.0
        for blk in blks.values():
            sums = (blk.A + blk.B + blk.C).sum(axis=1)
            worst = max(worst, float(np.abs(sums - 1.0).max()))
        return worst

    def nonneg():
        low = min(float(min(blk.A.min(), blk.B.min(), blk.C.min())) for blk in blks.values())
        return max(0.0, -low)

    def three_term():
        return max(three_term_residual(params, w) for w in range(wmax + 1))

    def t_power():
        st = build_structure(params)
        worst = 0.0
        for (w, r) in _labels(params, wmax):
            ef = f_wr(params, w, r, st)
            worst = max(worst, t_recursion_residual(params, ef.poly, ef.spectral.lam, st))
        return worst

    def walk_repro():
        a = walk(params, 300, seed=123)
        b = walk(params, 300, seed=123)
        return 0.0 if a == b else 1.0

    return [
        _check("recursion/row_sums", 1e-12, row_sums),
        _check("recursion/nonnegativity", 1e-14, nonneg),
        _check("recursion/three_term", 1e-9, three_term),
        _check("recursion/t_power", 1e-9, t_power),
        _check("recursion/walk_reproducible", 0.5, walk_repro),
    ]


def run_suite(params: Params, suite: str = "all", wmax: int = 4) -> RunReport:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES}")
    checks = []
    if suite in ("eigen", "all"):
        checks += _eigen_checks(params, wmax)
    if suite in ("ortho", "all"):
        checks += _ortho_checks(params, wmax)
    if suite in ("recursion", "all"):
        checks += _recursion_checks(params, wmax)
    return RunReport(params=params.describe(), checks=checks)


def default_grid() -> list:
    grid = []
    for n in (2, 3):
        for k in range(1, n):
            for ell in (0, 1, 2):
                for m in (0, 1):
                    grid.append(Params.integer(n=n, k=k, ell=ell, m=m))
    return grid


def thread_count() -> int:
    raw = os.environ.get("MVOP_THREADS", "")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap <= 0:
        cap = os.cpu_count() or 1
    return cap


def run_grid(param_list=None, suite: str = "all", wmax: int = 4) -> list:
    """Run a suite over many parameter sets in parallel; reports sorted by label."""
    if param_list is None:
        param_list = default_grid()
    workers = min(thread_count(), max(1, len(param_list)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        reports = list(pool.map(lambda p: run_suite(p, suite, wmax), param_list))
    return sorted(reports, key=lambda rep: str(sorted(rep.params.items())))
