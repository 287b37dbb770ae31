import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvop.family import f_wr
from mvop.linalg import VectorPoly
from mvop.orthogonality import (WeightSpec, gen_binom, gram, inner_mat,
                                inner_vec, max_block_offdiag_ratio,
                                max_offdiag_ratio, quad_rule, weight_V_at,
                                weight_W_at)
from mvop.params import ParamError, Params
from mvop.structure import psi_at

P0 = Params.integer(n=2, k=1, ell=1, m=0)


def test_quad_rule_exactness_frozen():
    u, w = quad_rule(2)
    assert np.dot(w, u**2) == pytest.approx(1.0 / 3.0, abs=1e-15)
    u, w = quad_rule(8)
    # Beta(6, 4) = 5! 3! / 9!
    assert np.dot(w, u**5 * (1 - u) ** 3) == pytest.approx(1.0 / 504.0, abs=1e-16)


def test_quad_rule_rejects_negative_degree():
    with pytest.raises(ParamError):
        quad_rule(-1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 12), st.integers(0, 6))
def test_gen_binom_matches_comb_on_integers(x, j):
    assert gen_binom(x, j) == pytest.approx(math.comb(x, j), rel=1e-15)


def test_gen_binom_general_values():
    assert gen_binom(2.5, 0) == 1.0
    assert gen_binom(-1.3, 0) == 1.0
    assert gen_binom(0.5, 2) == pytest.approx(0.5 * (-0.5) / 2.0, rel=1e-15)


def test_weight_rejects_negative_m():
    p = Params.integer(n=2, k=1, ell=1, m=-1)
    with pytest.raises(ParamError, match="weight undefined"):
        weight_V_at(p, 0.5)


def test_weight_V_frozen_values():
    assert np.allclose(weight_V_at(P0, 1.0), np.diag([0.0, 4.0]), rtol=0, atol=1e-15)
    assert np.abs(weight_V_at(P0, 0.0)).max() == 0.0
    V_half = weight_V_at(P0, 0.5)
    assert V_half[0, 0] > 0 and V_half[1, 1] > 0
    assert V_half[0, 1] == 0.0


@pytest.mark.parametrize("params", [
    P0,
    Params.integer(n=2, k=1, ell=2, m=1),
    Params.integer(n=3, k=2, ell=2, m=0),
    Params.jacobi(alpha=0.5, beta=1.5, k=1, ell=2),
], ids=str)
def test_weight_W_matches_conjugated_V(params):
    for u in (0.11, 0.4, 0.73, 0.99):
        W = weight_W_at(params, u)
        psi = psi_at(params, u)
        ref = psi.T @ weight_V_at(params, u) @ psi
        assert np.abs(W - ref).max() <= 1e-12 * max(1.0, np.abs(ref).max())
        assert np.array_equal(W, W.T)


@pytest.mark.parametrize("params", [
    P0,
    Params.integer(n=3, k=1, ell=2, m=1),
    Params.jacobi(alpha=0.5, beta=1.5, k=1, ell=1),
], ids=str)
def test_weight_W_positive_definite_inside(params):
    for u in (0.05, 0.5, 0.95):
        eig = np.linalg.eigvalsh(weight_W_at(params, u))
        assert eig.min() > 0.0


def test_inner_vec_diagonal_positive_and_orthogonal():
    wspec = WeightSpec(P0)
    f00 = f_wr(P0, 0, 0).poly
    f01 = f_wr(P0, 0, 1).poly
    f10 = f_wr(P0, 1, 0).poly
    n00 = inner_vec(wspec, f00, f00)
    n01 = inner_vec(wspec, f01, f01)
    assert n00 > 0 and n01 > 0
    assert abs(inner_vec(wspec, f00, f01)) <= 1e-12 * math.sqrt(n00 * n01)
    n10 = inner_vec(wspec, f10, f10)
    assert abs(inner_vec(wspec, f00, f10)) <= 1e-12 * math.sqrt(n00 * n10)


def test_inner_vec_oversample_consistent():
    wspec = WeightSpec(P0)
    f11 = f_wr(P0, 1, 1).poly
    base = inner_vec(wspec, f11, f11)
    assert inner_vec(wspec, f11, f11, oversample=3) == pytest.approx(base, rel=1e-13)


def test_inner_mat_block_symmetry():
    from mvop.family import assemble_P
    wspec = WeightSpec(P0)
    P1 = assemble_P(P0, 1).P
    blk = inner_mat(wspec, P1, P1)
    assert blk.shape == (2, 2)
    assert np.abs(blk - blk.T).max() <= 1e-12 * np.abs(blk).max()
    assert np.linalg.eigvalsh(blk).min() > 0


@pytest.mark.parametrize("params", [
    P0,
    Params.integer(n=2, k=1, ell=2, m=1),
    Params.integer(n=3, k=2, ell=1, m=1),
    Params.jacobi(alpha=0.5, beta=1.5, k=1, ell=2),
], ids=str)
def test_gram_off_diagonals_vanish(params):
    res = gram(WeightSpec(params), wmax=3)
    assert max_offdiag_ratio(res.matrix) <= 1e-9
    assert max_block_offdiag_ratio(res) <= 1e-9


def test_gram_labels_cover_S():
    res = gram(WeightSpec(P0), wmax=2)
    assert res.labels == [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1)]
    assert res.matrix.shape == (6, 6)
    assert (np.diag(res.matrix) > 0).all()


def test_jacobi_twin_matches_integer_inner_products():
    # alpha = m, beta = n-1 runs the same family through the other quadrature
    p_int = Params.integer(n=2, k=1, ell=1, m=1)
    p_jac = Params.jacobi(alpha=1.0, beta=1.0, k=1, ell=1)
    wi, wj = WeightSpec(p_int), WeightSpec(p_jac)
    for (w, r) in [(0, 0), (0, 1), (1, 0), (2, 1)]:
        fi = f_wr(p_int, w, r).poly
        fj = f_wr(p_jac, w, r).poly
        assert np.abs(fi.coeffs - fj.coeffs).max() == 0.0
        a = inner_vec(wi, fi, fi)
        b = inner_vec(wj, fj, fj)
        assert b == pytest.approx(a, rel=1e-12)


def test_gram_rejects_negative_m():
    p = Params.integer(n=2, k=1, ell=1, m=-1)
    with pytest.raises(ParamError, match="weight undefined"):
        gram(WeightSpec(p), wmax=1)


def test_weight_poly_prefactor_scales_inner_products():
    # the scalar 2n prefactor is part of the weight; halving params.n changes it
    wspec = WeightSpec(P0)
    f00 = f_wr(P0, 0, 0).poly
    base = inner_vec(wspec, f00, f00)
    direct = 0.0
    u, wq = quad_rule(8)
    for ui, wi in zip(u, wq):
        val = f00.evaluate_at(ui)
        direct += wi * val @ weight_W_at(P0, ui) @ val
    assert base == pytest.approx(direct, rel=1e-13)
