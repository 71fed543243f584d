"""Direct evaluation of the four q-Appell double series.

Each function is summed over anti-diagonal layers ``m + n = N`` until three
consecutive layers are numerically quiet. Terms are generated in bulk with
numpy: every summand factors as ``row[m] * col[n] * diag[m + n]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np

from . import qcore
from .errors import DegenerateDenominator, DomainError, NoConvergence


class PhiKind(enum.Enum):
    PHI1 = "phi1"
    PHI2 = "phi2"
    PHI3 = "phi3"
    PHI4 = "phi4"

    @classmethod
    def parse(cls, text: str) -> "PhiKind":
        try:
            return cls(text.lower())
        except ValueError:
            raise DomainError(f"unknown function kind {text!r}") from None


# Parameter names per kind, as (numerators, denominators).
# ``ap``, ``bp``, ``cp`` stand for a', b', c'.
PARAMS: dict[PhiKind, tuple[tuple[str, ...], tuple[str, ...]]] = {
    PhiKind.PHI1: (("a", "b", "bp"), ("c",)),
    PhiKind.PHI2: (("a", "b", "bp"), ("c", "cp")),
    PhiKind.PHI3: (("a", "ap", "b", "bp"), ("c",)),
    PhiKind.PHI4: (("a", "b"), ("c", "cp")),
}


@dataclass(frozen=True)
class PhiSpec:
    """One q-Appell function with all its parameters and arguments fixed."""

    kind: PhiKind
    q: complex
    numerators: tuple[complex, ...]
    denominators: tuple[complex, ...]
    x: complex
    y: complex

    def __post_init__(self) -> None:
        num_names, den_names = PARAMS[self.kind]
        if len(self.numerators) != len(num_names) or len(self.denominators) != len(den_names):
            raise DomainError(
                f"{self.kind.value} takes numerators {num_names} and denominators {den_names}"
            )
        object.__setattr__(self, "q", qcore.check_base(self.q))
        object.__setattr__(
            self, "numerators", tuple(qcore.as_complex(v, n) for v, n in zip(self.numerators, num_names))
        )
        object.__setattr__(
            self, "denominators", tuple(qcore.as_complex(v, n) for v, n in zip(self.denominators, den_names))
        )
        object.__setattr__(self, "x", qcore.as_complex(self.x, "x"))
        object.__setattr__(self, "y", qcore.as_complex(self.y, "y"))

    @classmethod
    def build(cls, kind: PhiKind | str, q: complex, x: complex, y: complex, **params: complex) -> "PhiSpec":
        """Construct from named parameters, e.g. ``PhiSpec.build("phi1", q, x, y, a=.., b=.., bp=.., c=..)``."""
        if isinstance(kind, str):
            kind = PhiKind.parse(kind)
        num_names, den_names = PARAMS[kind]
        expected = set(num_names) | set(den_names)
        if set(params) != expected:
            missing = sorted(expected - set(params))
            extra = sorted(set(params) - expected)
            raise DomainError(f"{kind.value}: missing parameters {missing}, unexpected {extra}")
        return cls(
            kind,
            q,
            tuple(params[n] for n in num_names),
            tuple(params[n] for n in den_names),
            x,
            y,
        )

    @property
    def names(self) -> tuple[str, ...]:
        num_names, den_names = PARAMS[self.kind]
        return num_names + den_names

    def params(self) -> dict[str, complex]:
        return dict(zip(self.names, self.numerators + self.denominators))

    def __getitem__(self, name: str) -> complex:
        if name == "x":
            return self.x
        if name == "y":
            return self.y
        if name == "q":
            return self.q
        try:
            return self.params()[name]
        except KeyError:
            raise KeyError(f"{self.kind.value} has no parameter {name!r}") from None

    def shift(self, **powers: int) -> "PhiSpec":
        """Multiply the named parameters (or ``x``/``y``) by ``q**power``.

        ``spec.shift(a=2, x=1)`` is the same function with ``a -> a q^2`` and
        ``x -> x q``. Zero powers leave the value bit-identical.
        """
        values = self.params()
        x, y = self.x, self.y
        for name, power in powers.items():
            if power == 0:
                continue
            factor = self.q**power
            if name == "x":
                x = x * factor
            elif name == "y":
                y = y * factor
            elif name in values:
                values[name] = values[name] * factor
            else:
                raise KeyError(f"{self.kind.value} has no parameter {name!r}")
        return PhiSpec.build(self.kind, self.q, x, y, **values)

    def replace(self, **new: complex) -> "PhiSpec":
        """Return a copy with the named parameters (or ``x``/``y``/``q``) replaced."""
        values = self.params()
        q, x, y = new.pop("q", self.q), new.pop("x", self.x), new.pop("y", self.y)
        for name in new:
            if name not in values:
                raise KeyError(f"{self.kind.value} has no parameter {name!r}")
        values.update(new)
        return PhiSpec.build(self.kind, q, x, y, **values)

    def swapped(self) -> "PhiSpec":
        """The same value written with the two summation indices exchanged."""
        p = self.params()
        if self.kind is PhiKind.PHI1:
            return self.replace(b=p["bp"], bp=p["b"], x=self.y, y=self.x)
        if self.kind is PhiKind.PHI2:
            return self.replace(b=p["bp"], bp=p["b"], c=p["cp"], cp=p["c"], x=self.y, y=self.x)
        if self.kind is PhiKind.PHI3:
            return self.replace(a=p["ap"], ap=p["a"], b=p["bp"], bp=p["b"], x=self.y, y=self.x)
        return self.replace(c=p["cp"], cp=p["c"], x=self.y, y=self.x)

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind.value, "q": _pair(self.q)}
        for name, value in self.params().items():
            out[name] = _pair(value)
        out["x"] = _pair(self.x)
        out["y"] = _pair(self.y)
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "PhiSpec":
        data = dict(data)
        kind = PhiKind.parse(data.pop("kind"))
        values = {k: _unpair(v) for k, v in data.items()}
        return cls.build(kind, values.pop("q"), values.pop("x"), values.pop("y"), **values)


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _unpair(v) -> complex:
    if isinstance(v, (list, tuple)):
        re, im = v
        return complex(re, im)
    return complex(v)


@dataclass(frozen=True)
class EvalConfig:
    tol: float = 1e-13
    max_layers: int = 500
    pole_eps: float = qcore.POLE_EPS

    def __post_init__(self) -> None:
        if not self.tol > 0:
            raise DomainError("tol must be positive")
        if self.max_layers < 1:
            raise DomainError("max_layers must be >= 1")
        if not self.pole_eps > 0:
            raise DomainError("pole_eps must be positive")


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    layers_used: int
    tail_bound: float = field(default=0.0)


# --------------------------------------------------------------------------
# single terms
# --------------------------------------------------------------------------


def term(spec: PhiSpec, m: int, n: int, pole_eps: float = qcore.POLE_EPS) -> complex:
    """The ``(m, n)`` summand of the defining double series of ``spec``."""
    if m < 0 or n < 0:
        raise DomainError("summation indices must be non-negative")
    q = spec.q
    p = spec.params()

    def poch(v: complex, k: int) -> complex:
        return qcore.qpoch_finite(v, q, k)

    def den(v: complex, k: int) -> complex:
        d = poch(v, k)
        _check_factors(v, q, k, pole_eps)
        return d

    kind = spec.kind
    if kind is PhiKind.PHI1:
        num = poch(p["a"], m + n) * poch(p["b"], m) * poch(p["bp"], n)
        dd = den(p["c"], m + n)
    elif kind is PhiKind.PHI2:
        num = poch(p["a"], m + n) * poch(p["b"], m) * poch(p["bp"], n)
        dd = den(p["c"], m) * den(p["cp"], n)
    elif kind is PhiKind.PHI3:
        num = poch(p["a"], m) * poch(p["ap"], n) * poch(p["b"], m) * poch(p["bp"], n)
        dd = den(p["c"], m + n)
    else:
        num = poch(p["a"], m + n) * poch(p["b"], m + n)
        dd = den(p["c"], m) * den(p["cp"], n)
    return num / (poch(q, m) * poch(q, n) * dd) * spec.x**m * spec.y**n


def _check_factors(c: complex, q: complex, count: int, pole_eps: float) -> None:
    cq = c
    for j in range(count):
        if abs(1.0 - cq) < pole_eps:
            raise DegenerateDenominator(
                f"denominator parameter {c!r} is within {pole_eps:g} of q^-{j}"
            )
        cq *= q


# --------------------------------------------------------------------------
# bulk evaluation
# --------------------------------------------------------------------------


def _poch_array(v: complex, q: complex, length: int) -> np.ndarray:
    """``[(v;q)_0, ..., (v;q)_{length-1}]``."""
    factors = np.empty(length, dtype=complex)
    factors[0] = 1.0
    if length > 1:
        factors[1:] = 1.0 - v * q ** np.arange(length - 1)
    return np.cumprod(factors)


def _den_array(v: complex, q: complex, length: int, pole_eps: float) -> np.ndarray:
    factors = np.empty(length, dtype=complex)
    factors[0] = 1.0
    if length > 1:
        factors[1:] = 1.0 - v * q ** np.arange(length - 1)
        small = np.flatnonzero(np.abs(factors[1:]) < pole_eps)
        if small.size:
            raise DegenerateDenominator(
                f"denominator parameter {v!r} is within {pole_eps:g} of q^-{int(small[0])}"
            )
    return np.cumprod(factors)


@lru_cache(maxsize=64)
def _triangle(L: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Index arrays of the triangle ``m + n <= L`` ordered by layer, then by ``m``."""
    ms, ns = [], []
    for N in range(L + 1):
        m = np.arange(N + 1)
        ms.append(m)
        ns.append(N - m)
    m = np.concatenate(ms)
    n = np.concatenate(ns)
    starts = np.array([N * (N + 1) // 2 for N in range(L + 1)])
    for arr in (m, n, starts):
        arr.setflags(write=False)
    return m, n, starts


def _factors(spec: PhiSpec, L: int, pole_eps: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split the summand as ``row[m] * col[n] * diag[m+n]`` for ``m, n <= L``."""
    q, p = spec.q, spec.params()
    size = L + 1
    qq = _poch_array(q, q, size)
    xs = spec.x ** np.arange(size)
    ys = spec.y ** np.arange(size)
    kind = spec.kind
    if kind is PhiKind.PHI1:
        row = _poch_array(p["b"], q, size) * xs / qq
        col = _poch_array(p["bp"], q, size) * ys / qq
        diag = _poch_array(p["a"], q, size) / _den_array(p["c"], q, size, pole_eps)
    elif kind is PhiKind.PHI2:
        row = _poch_array(p["b"], q, size) * xs / (qq * _den_array(p["c"], q, size, pole_eps))
        col = _poch_array(p["bp"], q, size) * ys / (qq * _den_array(p["cp"], q, size, pole_eps))
        diag = _poch_array(p["a"], q, size)
    elif kind is PhiKind.PHI3:
        row = _poch_array(p["a"], q, size) * _poch_array(p["b"], q, size) * xs / qq
        col = _poch_array(p["ap"], q, size) * _poch_array(p["bp"], q, size) * ys / qq
        diag = 1.0 / _den_array(p["c"], q, size, pole_eps)
    else:
        row = xs / (qq * _den_array(p["c"], q, size, pole_eps))
        col = ys / (qq * _den_array(p["cp"], q, size, pole_eps))
        diag = _poch_array(p["a"], q, size) * _poch_array(p["b"], q, size)
    return row, col, diag


def layer_terms(spec: PhiSpec, L: int, pole_eps: float = qcore.POLE_EPS) -> tuple[np.ndarray, np.ndarray]:
    """All summands with ``m + n <= L`` in layer order, plus the layer start offsets."""
    row, col, diag = _factors(spec, L, pole_eps)
    m, n, starts = _triangle(L)
    with np.errstate(over="ignore", invalid="ignore"):
        terms = row[m] * col[n] * diag[m + n]
    if not np.all(np.isfinite(terms)):
        raise NoConvergence("series terms overflowed double precision")
    return terms, starts


def _initial_layers(spec: PhiSpec, cfg: EvalConfig) -> int:
    rho = max(abs(spec.x), abs(spec.y))
    if rho == 0.0:
        return min(4, cfg.max_layers)
    guess = math.log(cfg.tol) / math.log(rho) + 12 if rho < 1 else cfg.max_layers
    return int(min(cfg.max_layers, max(16, guess)))


def eval_phi(spec: PhiSpec, cfg: EvalConfig | None = None) -> SeriesValue:
    """Sum the double series of ``spec`` to absolute tolerance ``cfg.tol``.

    Layers ``m + n = N`` are added in increasing ``N``; the sum stops at the
    first ``T`` whose layers ``T-2, T-1, T`` all have maximal term modulus
    below ``cfg.tol``. The returned ``tail_bound`` is the geometric estimate
    ``sum_{j>=1} (T + 1 + j) * boundary * rho**j`` where ``boundary`` is the
    largest term of the last three layers and ``rho`` is the larger of
    ``max(|x|, |y|, |q|)`` and the decay ratio of the last two layers.

    Raises:
        DomainError: ``|x| >= 1`` or ``|y| >= 1``.
        DegenerateDenominator: a denominator factor ``1 - c q^j`` is within
            ``cfg.pole_eps`` of zero.
        NoConvergence: the tolerance is not met within ``cfg.max_layers``.
    """
    cfg = cfg or EvalConfig()
    if abs(spec.x) >= 1.0 or abs(spec.y) >= 1.0:
        raise DomainError(f"series requires |x| < 1 and |y| < 1, got {abs(spec.x)!r}, {abs(spec.y)!r}")
    L = _initial_layers(spec, cfg)
    while True:
        terms, starts = layer_terms(spec, L, cfg.pole_eps)
        layer_max = np.maximum.reduceat(np.abs(terms), starts)
        quiet = layer_max < cfg.tol
        # stop at the first T >= 2 with three consecutive quiet layers
        run = quiet[2:] & quiet[1:-1] & quiet[:-2]
        hits = np.flatnonzero(run)
        if hits.size:
            T = int(hits[0]) + 2
            break
        if L >= cfg.max_layers:
            raise NoConvergence(
                f"{spec.kind.value}: no three quiet layers within {cfg.max_layers} layers "
                f"(last layer max {float(layer_max[-1]):.3e}, tol {cfg.tol:g})"
            )
        L = min(2 * L, cfg.max_layers)
    layer_sums = np.add.reduceat(terms[: starts[T] + T + 1], starts[: T + 1])
    value = complex(0.0)
    for s in layer_sums:
        value += complex(s)
    boundary = float(layer_max[T - 2 : T + 1].max())
    rho = max(abs(spec.x), abs(spec.y), abs(spec.q))
    if layer_max[T - 1] > 0:
        # decay seen over the last layers, when slower than the asymptotic rate
        observed = float(layer_max[T] / layer_max[T - 1])
        if observed < 1:
            rho = max(rho, observed)
    # layer T + j holds T + j + 1 terms, each roughly boundary * rho**j
    tail = boundary * ((T + 1) * rho / (1.0 - rho) + rho / (1.0 - rho) ** 2) if rho < 1 else math.inf
    return SeriesValue(value, T, tail)


def single_series(spec: PhiSpec, tol: float = 1e-16, max_terms: int = 2000) -> complex:
    """The ``y = 0`` column of ``spec`` summed as a one-variable basic series.

    Written term-ratio style, independently of :func:`eval_phi`.
    """
    # every kind collapses to 2phi1(a, b; c; q, x) on the n = 0 column
    q, p, x = spec.q, spec.params(), spec.x
    nums, dens = [p["a"], p["b"]], [p["c"]]
    total = 0.0j
    t = 1.0 + 0.0j
    quiet = 0
    for m in range(max_terms):
        total += t
        quiet = quiet + 1 if abs(t) < tol else 0
        if quiet >= 3:
            return total
        qm = q**m
        ratio = x / (1.0 - q * qm)
        for v in nums:
            ratio *= 1.0 - v * qm
        for v in dens:
            ratio /= 1.0 - v * qm
        t *= ratio
    raise NoConvergence("single series did not converge")
