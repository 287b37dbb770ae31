"""Parameter domain and closed-form eigenvalues of the polynomial family.

Two parameter modes share one dataclass. Integer mode fixes integers
(n, k, ell, m) with n >= 2 and 1 <= k <= n-1; every eigenvalue formula is then
evaluated in exact integer arithmetic. Jacobi mode keeps the integers k and ell
but replaces m by a real alpha > -1 and n-1 by a real beta > -1, i.e. every
formula below reads m = alpha, n = beta + 1.
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = [
    "ParamError",
    "Params",
    "SpectralPair",
    "validate",
    "in_S",
    "lambda_eig",
    "mu_eig",
    "mu_of_lambda",
    "spectrum_injectivity_check",
]


class ParamError(ValueError):
    """Parameters or labels outside their admissible domain."""


@dataclass(frozen=True)
class Params:
    k: int
    ell: int
    n: int | None = None
    m: int | None = None
    alpha: float | None = None
    beta: float | None = None

    @classmethod
    def integer(cls, n: int, k: int, ell: int, m: int) -> "Params":
        return cls(k=k, ell=ell, n=n, m=m)

    @classmethod
    def jacobi(cls, alpha: float, beta: float, k: int, ell: int) -> "Params":
        return cls(k=k, ell=ell, alpha=float(alpha), beta=float(beta))

    @property
    def is_jacobi(self) -> bool:
        return self.alpha is not None or self.beta is not None

    @property
    def m_eff(self):
        """m in Integer mode, alpha in Jacobi mode."""
        return self.alpha if self.is_jacobi else self.m

    @property
    def n_eff(self):
        """n in Integer mode, beta + 1 in Jacobi mode."""
        return self.beta + 1.0 if self.is_jacobi else self.n

    def describe(self) -> dict:
        """Loggable/serializable echo of the parameter values."""
        if self.is_jacobi:
            return {"mode": "jacobi", "alpha": self.alpha, "beta": self.beta,
                    "k": self.k, "ell": self.ell}
        return {"mode": "integer", "n": self.n, "k": self.k,
                "ell": self.ell, "m": self.m}


@dataclass(frozen=True)
class SpectralPair:
    """Label (w, r) together with its eigenvalue pair."""

    w: int
    r: int
    lam: float
    mu: float


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def validate(params: Params) -> None:
    """Raise ParamError naming the violated constraint; return None when valid."""
    if not _is_int(params.k) or params.k < 1:
        raise ParamError("k must be a positive integer")
    if not _is_int(params.ell) or params.ell < 0:
        raise ParamError("ell >= 0 violated")
    if params.is_jacobi:
        if params.n is not None or params.m is not None:
            raise ParamError("Jacobi mode takes alpha/beta only, not n/m")
        if params.alpha is None or params.beta is None:
            raise ParamError("Jacobi mode needs both alpha and beta")
        if not params.alpha > -1:
            raise ParamError("alpha > -1 violated")
        if not params.beta > -1:
            raise ParamError("beta > -1 violated")
        if not params.beta + 1 - params.k > 0:
            raise ParamError("beta + 1 - k > 0 violated")
    else:
        if params.n is None or params.m is None:
            raise ParamError("Integer mode needs both n and m")
        if not _is_int(params.n) or params.n < 2:
            raise ParamError("n >= 2 violated")
        if not _is_int(params.m):
            raise ParamError("m must be an integer")
        if params.k > params.n - 1:
            raise ParamError("k <= n-1 violated")


def in_S(params: Params, w: int, r: int) -> bool:
    """Membership of the label (w, r) in the admissible set S."""
    return w >= 0 and 0 <= r <= params.ell and params.m_eff + w + r >= 0


def _check_r(params: Params, r: int) -> None:
    if not 0 <= r <= params.ell:
        raise ParamError(f"r must lie in [0, {params.ell}], got {r}")


def lambda_eig(params: Params, w: int, r: int):
    """Eigenvalue of the first operator: -w(w+m+ell+r+n) - r(m+r-k+n).

    Exact (int) in Integer mode, float in Jacobi mode.
    """
    _check_r(params, r)
    m, n, k, ell = params.m_eff, params.n_eff, params.k, params.ell
    return -w * (w + m + ell + r + n) - r * (m + r - k + n)


def mu_eig(params: Params, w: int, r: int):
    """Eigenvalue of the second operator: -w(m+ell-r)(w+m+ell+r+n) - r(m-k)(m+r-k+n)."""
    _check_r(params, r)
    m, n, k, ell = params.m_eff, params.n_eff, params.k, params.ell
    return -w * (m + ell - r) * (w + m + ell + r + n) - r * (m - k) * (m + r - k + n)


def mu_of_lambda(params: Params, r: int, lam):
    """Second eigenvalue as a function of the first: lam(m+ell-r) + r(m+r-k+n)(ell-r+k)."""
    _check_r(params, r)
    m, n, k, ell = params.m_eff, params.n_eff, params.k, params.ell
    return lam * (m + ell - r) + r * (m + r - k + n) * (ell - r + k)


def spectrum_injectivity_check(params: Params, wmax: int) -> bool:
    """True iff (w, r) -> (lambda, mu) is injective on {0..wmax} x {0..ell} within S.

    Integer mode compares exact integers, so the answer carries no roundoff.
    """
    if wmax < 0:
        raise ParamError("wmax >= 0 violated")
    seen: dict = {}
    for w in range(wmax + 1):
        for r in range(params.ell + 1):
            if not in_S(params, w, r):
                continue
            key = (lambda_eig(params, w, r), mu_eig(params, w, r))
            if key in seen:
                return False
            seen[key] = (w, r)
    return True
