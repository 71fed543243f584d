"""q-shifted factorials and Gaussian binomial coefficients.

All functions are pure and operate on Python ``complex`` scalars. The base
``q`` may be complex; only ``0 < |q| < 1`` is enforced.
"""

from __future__ import annotations

import cmath
from numbers import Number

from .errors import DegenerateDenominator, DomainError

POLE_EPS = 1e-8


def as_complex(value: Number | complex, name: str = "value") -> complex:
    """Coerce ``value`` to a finite ``complex``; raise DomainError otherwise."""
    try:
        z = complex(value)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{name} is not a number: {value!r}") from exc
    if not (cmath.isfinite(z)):
        raise DomainError(f"{name} must be finite, got {z!r}")
    return z


def check_base(q: Number | complex) -> complex:
    """Validate a q-base: finite, with 0 < |q| < 1."""
    q = as_complex(q, "q")
    if not 0.0 < abs(q) < 1.0:
        raise DomainError(f"|q| must lie in (0, 1), got |q| = {abs(q)!r}")
    return q


def _finite_result(z: complex, what: str) -> complex:
    if not cmath.isfinite(z):
        raise DomainError(f"{what} overflowed to a non-finite value")
    return z


def qpoch_finite(x: complex, q: complex, n: int, pole_eps: float = POLE_EPS) -> complex:
    """Finite q-shifted factorial ``(x; q)_n`` for any signed integer ``n``.

    For ``n >= 0`` this is ``prod_{k<n} (1 - x q^k)``. For ``n < 0`` it is
    ``1 / prod_{k=1}^{|n|} (1 - x q^{-k})``, which agrees with the
    infinite-product quotient ``(x;q)_inf / (x q^n; q)_inf``.

    Raises:
        DegenerateDenominator: if ``n < 0`` and a divisor factor has
            modulus below ``pole_eps``.
    """
    x = as_complex(x, "x")
    q = check_base(q)
    n = int(n)
    if n >= 0:
        prod = 1.0 + 0.0j
        xq = x
        for _ in range(n):
            prod *= 1.0 - xq
            xq *= q
        return _finite_result(prod, "(x;q)_n")
    prod = 1.0 + 0.0j
    qinv = 1.0 / q
    xq = x * qinv
    for k in range(1, -n + 1):
        factor = 1.0 - xq
        if abs(factor) < pole_eps:
            raise DegenerateDenominator(
                f"(x;q)_{n}: factor 1 - x q^-{k} = {factor!r} is within {pole_eps:g} of zero"
            )
        prod *= factor
        xq *= qinv
    return _finite_result(1.0 / prod, "(x;q)_n")


def qpoch_inf(x: complex, q: complex, tol: float = 1e-16) -> complex:
    """Infinite q-shifted factorial ``(x; q)_inf``.

    The product is truncated at the first ``K`` with
    ``|x| |q|^K / (1 - |q|) < tol``, which bounds the relative error of the
    discarded tail by roughly ``tol``.
    """
    x = as_complex(x, "x")
    q = check_base(q)
    if tol <= 0:
        raise DomainError("tol must be positive")
    r = abs(q)
    prod = 1.0 + 0.0j
    xq = x
    bound = abs(x) / (1.0 - r)
    while bound >= tol:
        prod *= 1.0 - xq
        xq *= q
        bound *= r
    return _finite_result(prod, "(x;q)_inf")


def qbinom(n: int, k: int, q: complex) -> complex:
    """Gaussian binomial coefficient ``[n, k]_q``.

    Computed as ``(q;q)_n / ((q;q)_k (q;q)_{n-k})``. Out-of-range ``k``
    (``k < 0`` or ``k > n``, hence also any ``n < 0``) gives exactly zero.
    """
    q = check_base(q)
    n, k = int(n), int(k)
    if k < 0 or k > n:
        return 0.0 + 0.0j
    k = min(k, n - k)
    # [n,k] = prod_{j=1}^{k} (1 - q^{n-k+j}) / (1 - q^j)
    num = 1.0 + 0.0j
    den = 1.0 + 0.0j
    for j in range(1, k + 1):
        num *= 1.0 - q ** (n - k + j)
        den *= 1.0 - q**j
    return num / den


def qbinom_pascal(n: int, q: complex) -> list[complex]:
    """Row ``n`` of the q-Pascal triangle, built with ``[n,k] = q^k [n-1,k] + [n-1,k-1]``.

    Independent of :func:`qbinom`; used to cross-check it.
    """
    q = check_base(q)
    row = [1.0 + 0.0j]
    for m in range(1, n + 1):
        new = [1.0 + 0.0j] * (m + 1)
        for k in range(1, m):
            new[k] = q**k * row[k] + row[k - 1]
        row = new
    return row


def binom2(m: int) -> int:
    """``m (m - 1) / 2``, the exponent convention for ``q^{binom(m, 2)}``."""
    return m * (m - 1) // 2
