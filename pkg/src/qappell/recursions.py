"""n-step recursion formulas for the q-Appell functions.

Sixteen shift IDs (``thm1`` to ``thm16``), two formulas each. Odd/even pairs such as (1, 2) give the
same shift twice: once as an iterated sum of single steps and once as a
closed double sum with Gaussian binomial weights.

Formula 1 always shifts ``a`` or ``b`` up by ``q^n`` and ``c`` down by
``q^-n``; formula 2 is the opposite direction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import MutableMapping

from .errors import DomainError, UnknownIdentity, UnsupportedRelation
from .phi_series import EvalConfig, PhiKind, PhiSpec, SeriesValue
from .qcore import binom2, qbinom, qpoch_finite
from .relations import (
    A_PAIRS,
    Direction,
    Param,
    RelationId,
    ResidualEntry,
    TermList,
    Variant,
    c_argument_shift,
    cached_eval,
    evaluate_term_list,
    residual,
    safe_div,
)

MAX_N = 12

ITERATED, CLOSED, CSHIFT = "iterated", "closed", "c-shift"

# theorem -> (kind, shifted parameter, form)
THEOREMS: dict[int, tuple[PhiKind, Param, str]] = {
    1: (PhiKind.PHI1, Param.A, ITERATED),
    2: (PhiKind.PHI1, Param.A, CLOSED),
    3: (PhiKind.PHI1, Param.B, ITERATED),
    4: (PhiKind.PHI1, Param.B, CLOSED),
    5: (PhiKind.PHI1, Param.C, CSHIFT),
    6: (PhiKind.PHI2, Param.A, ITERATED),
    7: (PhiKind.PHI2, Param.A, CLOSED),
    8: (PhiKind.PHI2, Param.B, ITERATED),
    9: (PhiKind.PHI2, Param.B, CLOSED),
    10: (PhiKind.PHI2, Param.C, CSHIFT),
    11: (PhiKind.PHI3, Param.B, ITERATED),
    12: (PhiKind.PHI3, Param.B, CLOSED),
    13: (PhiKind.PHI3, Param.C, CSHIFT),
    14: (PhiKind.PHI4, Param.A, ITERATED),
    15: (PhiKind.PHI4, Param.A, CLOSED),
    16: (PhiKind.PHI4, Param.C, CSHIFT),
}

# Iterated/closed pairs that compute the same left-hand side.
CROSS_PAIRS: tuple[tuple[int, int], ...] = ((1, 2), (3, 4), (6, 7), (8, 9), (11, 12), (14, 15))

# Formulas whose printed form is off: the c-down exponent carries an extra
# "-1", and the c-up formula thm16.2 also shifts y.
EXPONENT_FLAGGED = frozenset({(5, 1), (10, 1), (13, 1), (16, 1)})
ARGUMENT_FLAGGED = frozenset({(16, 2)})

_THM_RE = re.compile(r"^thm(\d{1,2})\.([12])(?:\.(printed|derived))?$")


@dataclass(frozen=True)
class TheoremId:
    theorem: int
    formula: int
    variant: Variant | None = None

    def __post_init__(self) -> None:
        if self.theorem not in THEOREMS or self.formula not in (1, 2):
            raise UnknownIdentity(f"no recursion formula thm{self.theorem}.{self.formula}")

    @classmethod
    def parse(cls, text: str) -> "TheoremId":
        m = _THM_RE.match(text.strip().lower())
        if not m:
            raise UnknownIdentity(f"not a recursion formula id: {text!r}")
        variant = Variant(m.group(3)) if m.group(3) else None
        return cls(int(m.group(1)), int(m.group(2)), variant)

    @property
    def base_id(self) -> str:
        return f"thm{self.theorem}.{self.formula}"

    def __str__(self) -> str:
        return self.base_id + (f".{self.variant.value}" if self.variant else "")

    @property
    def kind(self) -> PhiKind:
        return THEOREMS[self.theorem][0]

    @property
    def parameter(self) -> Param:
        return THEOREMS[self.theorem][1]

    @property
    def form(self) -> str:
        return THEOREMS[self.theorem][2]

    @property
    def flagged(self) -> bool:
        key = (self.theorem, self.formula)
        return key in EXPONENT_FLAGGED or key in ARGUMENT_FLAGGED

    def with_variant(self, variant: Variant | None) -> "TheoremId":
        return TheoremId(self.theorem, self.formula, variant)

    @property
    def direction(self) -> Direction:
        """Direction of the parameter shift on the left-hand side."""
        up = self.formula == 1
        if self.parameter is Param.C:
            up = not up
        return Direction.UP if up else Direction.DOWN

    def shift_power(self, n: int) -> int:
        return n if self.direction is Direction.UP else -n

    def lhs(self, base: PhiSpec, n: int) -> PhiSpec:
        return base.shift(**{self.parameter.value: self.shift_power(n)})

    def generating_relation(self) -> RelationId:
        """The single-step relation this formula iterates (its ``n = 1`` case)."""
        return RelationId(self.kind, self.parameter, self.direction, self.variant)


def all_theorems() -> list[TheoremId]:
    return [TheoremId(t, f) for t in THEOREMS for f in (1, 2)]


@dataclass(frozen=True)
class ShiftRequest:
    id: TheoremId
    base: PhiSpec
    n: int

    def __post_init__(self) -> None:
        if not 0 <= self.n <= MAX_N:
            raise DomainError(f"n must lie in [0, {MAX_N}], got {self.n}")
        if self.base.kind is not self.id.kind:
            raise UnsupportedRelation(f"{self.id} is a {self.id.kind.value} formula, got {self.base.kind.value}")


# --------------------------------------------------------------------------
# expansions
# --------------------------------------------------------------------------


def _iterated_a(tid: TheoremId, base: PhiSpec, n: int) -> list:
    q, a, x, y = base.q, base["a"], base.x, base.y
    (xn, xd), (yn, yd) = A_PAIRS[base.kind]
    cx = safe_div(a * x * (1 - base[xn]), 1 - base[xd], f"1 - {xd}")
    cy = safe_div(a * y * (1 - base[yn]), 1 - base[yd], f"1 - {yd}")
    terms = [(1.0, base)]
    if tid.formula == 1:
        terms += [(cx * q ** (k - 1), base.shift(a=k, **{xn: 1, xd: 1})) for k in range(1, n + 1)]
        terms += [(cy * q ** (k - 1), base.shift(a=k, **{yn: 1, yd: 1}, x=1)) for k in range(1, n + 1)]
    else:
        terms += [(-cx * q**-k, base.shift(a=1 - k, **{xn: 1, xd: 1})) for k in range(1, n + 1)]
        terms += [(-cy * q**-k, base.shift(a=1 - k, **{yn: 1, yd: 1}, x=1)) for k in range(1, n + 1)]
    return terms


def _closed_a(tid: TheoremId, base: PhiSpec, n: int) -> list:
    q, a, x, y = base.q, base["a"], base.x, base.y
    kind = base.kind
    terms = []
    for k in range(n + 1):
        if tid.formula == 1:
            scale = q ** (2 * binom2(k)) * a**k
            a_shift = k
        else:
            scale = q ** (binom2(k) - n * k) * (-a) ** k
            a_shift = 0
        nk = qbinom(n, k, q)
        for i in range(k + 1):
            j = k - i
            if kind is PhiKind.PHI1:
                ratio = qpoch_finite(base["b"], q, j) * qpoch_finite(base["bp"], q, i)
                ratio = safe_div(ratio, qpoch_finite(base["c"], q, k), "(c;q)_k")
                spec = base.shift(a=a_shift, b=j, bp=i, c=k, x=i)
            elif kind is PhiKind.PHI2:
                ratio = qpoch_finite(base["b"], q, j) * qpoch_finite(base["bp"], q, i)
                den = qpoch_finite(base["c"], q, j) * qpoch_finite(base["cp"], q, i)
                ratio = safe_div(ratio, den, "(c;q)_{k-i} (c';q)_i")
                spec = base.shift(a=a_shift, b=j, bp=i, c=j, cp=i, x=i)
            else:
                den = qpoch_finite(base["c"], q, j) * qpoch_finite(base["cp"], q, i)
                ratio = safe_div(qpoch_finite(base["b"], q, k), den, "(c;q)_{k-i} (c';q)_i")
                spec = base.shift(a=a_shift, b=k, c=j, cp=i, x=i)
            coeff = nk * qbinom(k, i, q) * ratio * scale * x**j * y**i
            terms.append((coeff, spec))
    return terms


def _iterated_b(tid: TheoremId, base: PhiSpec, n: int) -> list:
    q = base.q
    coeff = safe_div(base["b"] * base.x * (1 - base["a"]), 1 - base["c"], "1 - c")
    terms = [(1.0, base)]
    if tid.formula == 1:
        terms += [(coeff * q ** (k - 1), base.shift(a=1, b=k, c=1)) for k in range(1, n + 1)]
    else:
        terms += [(-coeff * q**-k, base.shift(a=1, b=1 - k, c=1)) for k in range(1, n + 1)]
    return terms


def _closed_b(tid: TheoremId, base: PhiSpec, n: int) -> list:
    q, a, b, c, x = base.q, base["a"], base["b"], base["c"], base.x
    terms = []
    for k in range(n + 1):
        ratio = safe_div(qpoch_finite(a, q, k), qpoch_finite(c, q, k), "(c;q)_k")
        if tid.formula == 1:
            coeff = qbinom(n, k, q) * q ** (2 * binom2(k)) * (b * x) ** k * ratio
            spec = base.shift(a=k, b=k, c=k)
        else:
            coeff = qbinom(n, k, q) * q ** (binom2(k) - n * k) * (-b * x) ** k * ratio
            spec = base.shift(a=k, c=k)
        terms.append((coeff, spec))
    return terms


def _c_shift(tid: TheoremId, base: PhiSpec, n: int) -> list:
    q, c = base.q, base["c"]
    key = (tid.theorem, tid.formula)
    printed = tid.variant is Variant.PRINTED
    if key in ARGUMENT_FLAGGED:
        args = c_argument_shift(base.kind, tid.variant)
    else:
        # the printed argument shift is already the derived one here
        args = c_argument_shift(base.kind, Variant.DERIVED)
    terms = []
    if tid.formula == 1:
        prefactor = safe_div(1.0, qpoch_finite(safe_div(q, c, "c"), q, n), "(q/c;q)_n")
        offset = -1 if (printed and key in EXPONENT_FLAGGED) else 0
        for k in range(n + 1):
            coeff = prefactor * qbinom(n, k, q) * (-c) ** (k - n) * q ** (binom2(n + 1 - k) + offset)
            terms.append((coeff, base.shift(**{name: k for name in args})))
    else:
        for k in range(n + 1):
            coeff = qbinom(n, k, q) * c**k * q ** (2 * binom2(k)) * qpoch_finite(c * q**k, q, n - k)
            terms.append((coeff, base.shift(c=k, **{name: k for name in args})))
    return terms


_BUILDERS = {
    (Param.A, ITERATED): _iterated_a,
    (Param.A, CLOSED): _closed_a,
    (Param.B, ITERATED): _iterated_b,
    (Param.B, CLOSED): _closed_b,
    (Param.C, CSHIFT): _c_shift,
}


def recursion_rhs(req: ShiftRequest) -> TermList:
    """Right-hand side of the recursion formula ``req.id`` at order ``req.n``.

    Evaluating the returned list reproduces ``eval_phi(req.id.lhs(req.base, req.n))``.
    Order ``n = 0`` is the identity ``[(1, base)]``.
    """
    tid, base, n = req.id, req.base, req.n
    if n == 0:
        return TermList(((1.0, base),))
    build = _BUILDERS[(tid.parameter, tid.form)]
    return TermList(tuple(build(tid, base, n)))


def recursion_residual(
    req: ShiftRequest,
    cfg: EvalConfig | None = None,
    cache: MutableMapping[PhiSpec, SeriesValue] | None = None,
) -> ResidualEntry:
    cfg = cfg or EvalConfig()
    rhs = recursion_rhs(req)
    left = cached_eval(req.id.lhs(req.base, req.n), cfg, cache).value
    right = evaluate_term_list(rhs, cfg, cache).value
    return ResidualEntry(residual(left, right), left, right)


def cross_check(
    pair: tuple[TheoremId, TheoremId],
    base: PhiSpec,
    n: int,
    cfg: EvalConfig | None = None,
    cache: MutableMapping[PhiSpec, SeriesValue] | None = None,
) -> ResidualEntry:
    """Compare two expansions of the same shifted function without evaluating it directly."""
    first, second = pair
    if first.kind is not second.kind or first.parameter is not second.parameter or first.direction is not second.direction:
        raise UnsupportedRelation(f"{first} and {second} do not expand the same shift")
    cfg = cfg or EvalConfig()
    left = evaluate_term_list(recursion_rhs(ShiftRequest(first, base, n)), cfg, cache).value
    right = evaluate_term_list(recursion_rhs(ShiftRequest(second, base, n)), cfg, cache).value
    return ResidualEntry(residual(left, right), left, right)
