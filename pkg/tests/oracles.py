"""Independent reference implementations used only by the tests.

Nothing here imports the package's numerical code: products are written out
term by term and series are summed over fixed rectangles.
"""

from __future__ import annotations


def poch(x: complex, q: complex, n: int) -> complex:
    """(x;q)_n for n >= 0 by the plain product."""
    out = 1.0 + 0j
    for k in range(n):
        out *= 1 - x * q**k
    return out


def poch_inf(x: complex, q: complex, cutoff: float = 1e-17) -> complex:
    """(x;q)_inf, multiplying factors until |x q^k| < cutoff."""
    out = 1.0 + 0j
    k = 0
    while abs(x * q**k) >= cutoff:
        out *= 1 - x * q**k
        k += 1
    return out


def poch_quotient(x: complex, q: complex, n: int) -> complex:
    """(x;q)_n for any integer n as (x;q)_inf / (x q^n;q)_inf."""
    return poch_inf(x, q) / poch_inf(x * q**n, q)


def qbinom_dp(n: int, k: int, q: complex) -> complex:
    """Gaussian binomial by the q-Pascal recurrence [n,k] = [n-1,k-1] + q^k [n-1,k]."""
    if k < 0 or k > n:
        return 0j
    row = [1.0 + 0j]
    for m in range(1, n + 1):
        row = [1.0 + 0j] + [row[j - 1] + q**j * row[j] for j in range(1, m)] + [1.0 + 0j]
    return row[k]


def summand(kind: str, p: dict, q: complex, x: complex, y: complex, m: int, n: int, pochfn=poch) -> complex:
    qq = pochfn(q, q, m) * pochfn(q, q, n)
    if kind == "phi1":
        num = pochfn(p["a"], q, m + n) * pochfn(p["b"], q, m) * pochfn(p["bp"], q, n)
        den = pochfn(p["c"], q, m + n)
    elif kind == "phi2":
        num = pochfn(p["a"], q, m + n) * pochfn(p["b"], q, m) * pochfn(p["bp"], q, n)
        den = pochfn(p["c"], q, m) * pochfn(p["cp"], q, n)
    elif kind == "phi3":
        num = pochfn(p["a"], q, m) * pochfn(p["ap"], q, n) * pochfn(p["b"], q, m) * pochfn(p["bp"], q, n)
        den = pochfn(p["c"], q, m + n)
    else:
        num = pochfn(p["a"], q, m + n) * pochfn(p["b"], q, m + n)
        den = pochfn(p["c"], q, m) * pochfn(p["cp"], q, n)
    return num / (qq * den) * x**m * y**n


def brute_phi(kind: str, p: dict, q: complex, x: complex, y: complex, size: int = 80) -> complex:
    """Rectangular double sum over 0 <= m, n < size, walking each row by term ratios."""
    total = 0j
    for m in range(size):
        t = summand(kind, p, q, x, y, m, 0)
        for n in range(size):
            total += t
            t *= _col_ratio(kind, p, q, y, m, n)
    return total


def _col_ratio(kind, p, q, y, m, n):
    """summand(m, n+1) / summand(m, n)."""
    qn, qmn = q**n, q ** (m + n)
    r = y / (1 - q ** (n + 1))
    if kind == "phi1":
        r *= (1 - p["a"] * qmn) * (1 - p["bp"] * qn) / (1 - p["c"] * qmn)
    elif kind == "phi2":
        r *= (1 - p["a"] * qmn) * (1 - p["bp"] * qn) / (1 - p["cp"] * qn)
    elif kind == "phi3":
        r *= (1 - p["ap"] * qn) * (1 - p["bp"] * qn) / (1 - p["c"] * qmn)
    else:
        r *= (1 - p["a"] * qmn) * (1 - p["b"] * qmn) / (1 - p["cp"] * qn)
    return r


def single_2phi1(a, b, c, q, x, terms: int = 400) -> complex:
    """2phi1(a, b; c; q, x) summed to a fixed number of terms."""
    total = 0j
    for m in range(terms):
        total += poch(a, q, m) * poch(b, q, m) / (poch(q, q, m) * poch(c, q, m)) * x**m
    return total
