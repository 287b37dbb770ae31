"""Three-term recurrence blocks for (1-u) P_w and the associated random walk.

(1-u) P_w = A_w P_{w-1} + B_w P_w + C_w P_{w+1}, with nonnegative entries and
unit row sums across [A | B | C], so each row is a probability distribution
over moves in the (w, r) lattice. Entries are products a^2 * b^2 of one-step
weight-shift factors; a 0/0 product is resolved numerator-first to 0.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .params import ParamError, Params, in_S, validate

__all__ = ["RecursionBlocks", "a_sq", "b_sq", "blocks", "three_term_residual", "walk"]

_NEG_TOL = 1e-14


@dataclass(frozen=True)
class RecursionBlocks:
    w: int
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray


def _direction(params: Params, i) -> str:
    """Map a shift index (1, k+1, or n+1; 'n+1' as a string in Jacobi mode) to a tag."""
    if isinstance(i, str):
        tag = i.replace(" ", "")
        if tag == "1":
            return "e1"
        if tag == "k+1":
            return "ek"
        if tag == "n+1":
            return "en"
        raise ParamError(f"shift index must be 1, k+1, or n+1 (got {i!r})")
    if i == 1:
        return "e1"
    if i == params.k + 1:
        return "ek"
    n = float(params.n_eff)
    if abs(float(i) - (n + 1.0)) < 1e-12:
        return "en"
    raise ParamError(f"shift index must be 1, k+1, or n+1 (got {i!r})")


def _ratio(num_factors, den_factors) -> float:
    num = 1.0
    for f in num_factors:
        num *= float(f)
    if num == 0.0:
        return 0.0
    den = 1.0
    for f in den_factors:
        den *= float(f)
    return num / den


def a_sq(params: Params, i, w: int, r: int) -> float:
    """Squared norm ratio for splitting off one positive step in direction i at (w, r)."""
    validate(params)
    k, ell = params.k, params.ell
    m = float(params.m_eff)
    n = float(params.n_eff)
    d = _direction(params, i)
    if d == "e1":
        return _ratio((w + k, w + ell + n), (w + ell - r + k, 2 * w + m + n + ell + r))
    if d == "ek":
        return _ratio((ell - r, r + n - k), (w + ell - r + k, w + m + n + 2 * r - k))
    return _ratio((w + m + n + ell + r - k, w + m + r), (w + m + n + 2 * r - k, 2 * w + m + n + ell + r))


def b_sq(params: Params, i, j, w: int, r: int) -> float:
    """Squared norm ratio for absorbing a step in direction j after a step in i."""
    validate(params)
    k, ell = params.k, params.ell
    m = float(params.m_eff)
    n = float(params.n_eff)
    di = _direction(params, i)
    dj = _direction(params, j)
    if di == "e1":
        if dj == "e1":
            return _ratio((w + 1, w + ell + k + 1), (w + ell - r + k + 1, 2 * w + m + n + ell + r + 1))
        if dj == "ek":
            return _ratio((w, w + ell + k), (w + ell - r + k - 1, 2 * w + m + n + ell + r))
        return _ratio((w, w + ell + k), (w + ell - r + k, 2 * w + m + n + ell + r - 1))
    if di == "ek":
        if dj == "e1":
            return _ratio((r, ell - r + k), (w + ell - r + k + 1, w + m + n + 2 * r - k))
        if dj == "ek":
            return _ratio((r + 1, ell - r + k - 1), (w + ell - r + k - 1, w + m + n + 2 * r - k + 1))
        return _ratio((r, ell - r + k), (w + ell - r + k, w + m + n + 2 * r - k - 1))
    if dj == "e1":
        return _ratio((w + m + n + ell + r, w + m + n + r - k), (w + m + n + 2 * r - k, 2 * w + m + n + ell + r + 1))
    if dj == "ek":
        return _ratio((w + m + n + ell + r, w + m + n + r - k), (w + m + n + 2 * r - k + 1, 2 * w + m + n + ell + r))
    return _ratio((w + m + n + ell + r - 1, w + m + n + r - k - 1), (w + m + n + 2 * r - k - 1, 2 * w + m + n + ell + r - 1))


def blocks(params: Params, w: int) -> RecursionBlocks:
    """Recurrence blocks A_w, B_w, C_w; entries checked nonnegative."""
    validate(params)
    if w < 0:
        raise ParamError("w >= 0 violated")
    for r in range(params.ell + 1):
        if not in_S(params, w, r):
            raise ParamError(f"(w, r) = ({w}, {r}) outside the parameter set")
    ell = params.ell
    dim = ell + 1
    A = np.zeros((dim, dim))
    B = np.zeros((dim, dim))
    C = np.zeros((dim, dim))

    def prod(a_dir, b_dir, r):
        # Two-step weight: split along a_dir, then absorb along b_dir at the
        # shifted parameter, so b_sq is evaluated with shift a_dir.
        a = a_sq(params, a_dir, w, r)
        if a == 0.0:
            return 0.0
        return a * b_sq(params, b_dir, a_dir, w, r)

    for r in range(dim):
        # w+1 block: split along e1, absorb along e_{n+1} (same r) or e_{k+1} (r-1).
        C[r, r] = prod("1", "n+1", r)
        if r >= 1:
            C[r, r - 1] = prod("1", "k+1", r)
        # w block: split and absorb along the same direction, or trade k+1/n+1.
        B[r, r] = prod("1", "1", r) + prod("k+1", "k+1", r) + prod("n+1", "n+1", r)
        if r + 1 <= ell:
            B[r, r + 1] = prod("k+1", "n+1", r)
        if r >= 1:
            B[r, r - 1] = prod("n+1", "k+1", r)
        # w-1 block: absorb along e1; its weight carries a factor w, so A_0 = 0.
        A[r, r] = prod("n+1", "1", r)
        if r + 1 <= ell:
            A[r, r + 1] = prod("k+1", "1", r)

    for name, mat in (("A", A), ("B", B), ("C", C)):
        low = mat.min()
        if low < -_NEG_TOL:
            raise ValueError(f"negative entry {low:g} in block {name} at w={w}")
    return RecursionBlocks(w=w, A=A, B=B, C=C)


def three_term_residual(params: Params, w: int) -> float:
    """Max coefficient residual of (1-u) P_w - A P_{w-1} - B P_w - C P_{w+1}, relative."""
    from .family import assemble_P
    from .linalg import MatrixPoly
    from .structure import build_structure

    st = build_structure(params)
    blk = blocks(params, w)
    Pw = assemble_P(params, w, st).P
    Pup = assemble_P(params, w + 1, st).P
    if w == 0:
        Pdn = MatrixPoly.zeros(params.ell + 1)
    else:
        Pdn = assemble_P(params, w - 1, st).P
    lhs = Pw - Pw.shift_mul_by_u()
    rhs = Pdn.left_mul(blk.A) + Pw.left_mul(blk.B) + Pup.left_mul(blk.C)
    diff = lhs - rhs
    scale = max(1.0, lhs.max_abs, rhs.max_abs)
    return diff.max_abs / scale


def walk(params: Params, steps: int, seed: int, start: tuple = (0, 0)) -> list:
    """Sample a trajectory of the lattice walk defined by the recurrence rows.

    Reproducibility contract: the generator is random.Random(seed) (CPython's
    Mersenne Twister), exactly one rng.random() call is made per step, and the
    transition row is scanned in the fixed order [A row | B row | C row] with
    cumulative sums, picking the first slot whose cumulative mass exceeds the
    draw. Same seed, same trajectory, on every platform.
    """
    validate(params)
    if steps < 0:
        raise ParamError("steps >= 0 violated")
    w, r = int(start[0]), int(start[1])
    if not in_S(params, w, r):
        raise ParamError(f"start state ({w}, {r}) outside the parameter set")
    dim = params.ell + 1
    rng = random.Random(seed)
    rows_cache: dict = {}
    path = [(w, r)]
    for _ in range(steps):
        if w not in rows_cache:
            blk = blocks(params, w)
            rows_cache[w] = np.cumsum(np.hstack([blk.A, blk.B, blk.C]), axis=1)
        cum = rows_cache[w][r]
        x = rng.random()
        idx = int(np.searchsorted(cum, x, side="right"))
        if idx >= 3 * dim:
            idx = 3 * dim - 1
        move, r_new = divmod(idx, dim)
        w = w + move - 1
        r = r_new
        path.append((w, r))
    return path
