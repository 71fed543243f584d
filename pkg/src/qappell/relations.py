"""Single-step contiguous relations of the q-Appell functions.

A relation expresses the function with one parameter multiplied (``UP``) or
divided (``DOWN``) by ``q`` as a short weighted sum of neighbouring
functions. Right-hand sides are returned as :class:`TermList` objects and
checked numerically against :func:`~qappell.phi_series.eval_phi`.

Relations for the primed parameters are not separate entries: they follow
from the index-swap symmetry (:meth:`PhiSpec.swapped`).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterator, MutableMapping

from .errors import DegenerateCoefficient, QAppellError, UnknownIdentity, UnsupportedRelation
from .phi_series import EvalConfig, PhiKind, PhiSpec, SeriesValue, eval_phi
from .qcore import POLE_EPS


class Param(enum.Enum):
    A = "a"
    B = "b"
    C = "c"


class Direction(enum.Enum):
    UP = "up"
    DOWN = "down"


class Variant(enum.Enum):
    PRINTED = "printed"
    DERIVED = "derived"


@dataclass(frozen=True)
class TermList:
    """A finite sum ``sum_i coeff_i * Phi(spec_i)``."""

    terms: tuple[tuple[complex, PhiSpec], ...]

    def __post_init__(self) -> None:
        terms = tuple((complex(c), s) for c, s in self.terms)
        if not terms:
            raise ValueError("a TermList needs at least one term")
        kind, q = terms[0][1].kind, terms[0][1].q
        for _, spec in terms:
            if spec.kind is not kind or spec.q != q:
                raise ValueError("all specs of a TermList must share kind and q")
        object.__setattr__(self, "terms", terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[complex, PhiSpec]]:
        return iter(self.terms)

    def __getitem__(self, i: int) -> tuple[complex, PhiSpec]:
        return self.terms[i]

    @property
    def coefficients(self) -> list[complex]:
        return [c for c, _ in self.terms]

    @property
    def specs(self) -> list[PhiSpec]:
        return [s for _, s in self.terms]

    def to_json(self) -> list[dict]:
        return [{"coeff": [c.real, c.imag], "spec": s.to_dict()} for c, s in self.terms]


class TermEvaluationError(QAppellError):
    """Evaluating one term of a TermList failed; ``index`` names the term."""

    def __init__(self, index: int, cause: Exception):
        super().__init__(f"term {index}: {type(cause).__name__}: {cause}")
        self.index = index
        self.cause = cause


def evaluate_term_list(
    tl: TermList,
    cfg: EvalConfig | None = None,
    cache: MutableMapping[PhiSpec, SeriesValue] | None = None,
) -> SeriesValue:
    """Evaluate ``sum coeff_i * Phi(spec_i)``.

    The tail bound is ``sum |coeff_i| * tail_i``. ``cache`` may be shared
    between calls to reuse evaluations of identical specs.
    """
    cfg = cfg or EvalConfig()
    total = 0j
    tail = 0.0
    layers = 0
    for i, (coeff, spec) in enumerate(tl):
        try:
            sv = cached_eval(spec, cfg, cache)
        except QAppellError as exc:
            raise TermEvaluationError(i, exc) from exc
        total += coeff * sv.value
        tail += abs(coeff) * sv.tail_bound
        layers = max(layers, sv.layers_used)
    return SeriesValue(total, layers, tail)


def cached_eval(
    spec: PhiSpec, cfg: EvalConfig, cache: MutableMapping[PhiSpec, SeriesValue] | None
) -> SeriesValue:
    if cache is None:
        return eval_phi(spec, cfg)
    sv = cache.get(spec)
    if sv is None:
        sv = cache[spec] = eval_phi(spec, cfg)
    return sv


def residual(left: complex, right: complex) -> float:
    """``|L - R| / max(1, |L|, |R|)``: absolute near zero, relative for large values."""
    return abs(left - right) / (1e-300 + max(1.0, abs(left), abs(right)))


@dataclass(frozen=True)
class ResidualEntry:
    residual: float
    left: complex
    right: complex


def safe_div(num: complex, den: complex, what: str, eps: float = POLE_EPS) -> complex:
    """``num / den``, raising DegenerateCoefficient when ``|den| < eps``."""
    if abs(den) < eps:
        raise DegenerateCoefficient(f"coefficient divisor {what} = {den!r} is within {eps:g} of zero")
    return num / den


# --------------------------------------------------------------------------
# relation identifiers
# --------------------------------------------------------------------------

VALID_PARAMS: dict[PhiKind, tuple[Param, ...]] = {
    PhiKind.PHI1: (Param.A, Param.B, Param.C),
    PhiKind.PHI2: (Param.A, Param.B, Param.C),
    PhiKind.PHI3: (Param.B, Param.C),
    PhiKind.PHI4: (Param.A, Param.C),
}

# The c-relations of the functions whose c pairs with m alone: the printed
# displays also shift y, the series definition shifts x only.
FLAGGED_RELATIONS = frozenset(
    (kind, Param.C, d) for kind in (PhiKind.PHI2, PhiKind.PHI4) for d in Direction
)

_REL_RE = re.compile(r"^phi([1-4])\.([abc])\.(up|down)(?:\.(printed|derived))?$")


@dataclass(frozen=True)
class RelationId:
    kind: PhiKind
    parameter: Param
    direction: Direction
    variant: Variant | None = None

    def __post_init__(self) -> None:
        if self.parameter not in VALID_PARAMS[self.kind]:
            raise UnsupportedRelation(
                f"no contiguous relation in {self.parameter.value} for {self.kind.value}"
            )

    @classmethod
    def parse(cls, text: str) -> "RelationId":
        m = _REL_RE.match(text.strip().lower())
        if not m:
            raise UnknownIdentity(f"not a contiguous relation id: {text!r}")
        kind = PhiKind(f"phi{m.group(1)}")
        param = Param(m.group(2))
        if param not in VALID_PARAMS[kind]:
            raise UnknownIdentity(f"no contiguous relation {text!r} in the catalog")
        variant = Variant(m.group(4)) if m.group(4) else None
        return cls(kind, param, Direction(m.group(3)), variant)

    @property
    def base_id(self) -> str:
        return f"{self.kind.value}.{self.parameter.value}.{self.direction.value}"

    def __str__(self) -> str:
        return self.base_id + (f".{self.variant.value}" if self.variant else "")

    @property
    def flagged(self) -> bool:
        return (self.kind, self.parameter, self.direction) in FLAGGED_RELATIONS

    def with_variant(self, variant: Variant | None) -> "RelationId":
        return RelationId(self.kind, self.parameter, self.direction, variant)

    def lhs(self, base: PhiSpec) -> PhiSpec:
        """The spec whose value the relation's right-hand side reproduces."""
        step = 1 if self.direction is Direction.UP else -1
        return base.shift(**{self.parameter.value: step})


def all_relations() -> list[RelationId]:
    """The 20 catalog relations in canonical order."""
    return [
        RelationId(kind, param, d)
        for kind in PhiKind
        for param in VALID_PARAMS[kind]
        for d in (Direction.UP, Direction.DOWN)
    ]


# --------------------------------------------------------------------------
# right-hand sides
# --------------------------------------------------------------------------

# For the a-relations: (numerator, denominator) picked up by the x-term and
# by the y-term when the summation index m resp. n is lowered by one.
A_PAIRS: dict[PhiKind, tuple[tuple[str, str], tuple[str, str]]] = {
    PhiKind.PHI1: (("b", "c"), ("bp", "c")),
    PhiKind.PHI2: (("b", "c"), ("bp", "cp")),
    PhiKind.PHI4: (("b", "c"), ("b", "cp")),
}


def c_argument_shift(kind: PhiKind, variant: Variant | None) -> tuple[str, ...]:
    """Arguments rescaled by ``q`` in the c-relations.

    ``c`` enters through ``(c;q)_{m+n}`` for PHI1/PHI3 (both arguments move)
    and through ``(c;q)_m`` for PHI2/PHI4 (only ``x`` moves, unless the
    printed variant is requested).
    """
    if kind in (PhiKind.PHI1, PhiKind.PHI3) or variant is Variant.PRINTED:
        return ("x", "y")
    return ("x",)


def contiguous_rhs(rel: RelationId, base: PhiSpec) -> TermList:
    """Right-hand side of ``rel`` for the function ``base``.

    Its value equals ``eval_phi(rel.lhs(base))``.

    Raises:
        UnsupportedRelation: kind mismatch or invalid parameter.
        DegenerateCoefficient: a coefficient divisor such as ``1 - c`` or
            ``1 - q/c`` is within ``POLE_EPS`` of zero.
    """
    if base.kind is not rel.kind:
        raise UnsupportedRelation(f"relation {rel} applied to a {base.kind.value} spec")
    q, x, y = base.q, base.x, base.y
    up = rel.direction is Direction.UP

    if rel.parameter is Param.A:
        a = base["a"]
        (xn, xd), (yn, yd) = A_PAIRS[rel.kind]
        cx = safe_div(a * x * (1 - base[xn]), 1 - base[xd], f"1 - {xd}")
        cy = safe_div(a * y * (1 - base[yn]), 1 - base[yd], f"1 - {yd}")
        if up:
            return TermList((
                (1.0, base),
                (cx, base.shift(a=1, **{xn: 1, xd: 1})),
                (cy, base.shift(a=1, **{yn: 1, yd: 1}, x=1)),
            ))
        return TermList((
            (1.0, base),
            (-cx / q, base.shift(**{xn: 1, xd: 1})),
            (-cy / q, base.shift(**{yn: 1, yd: 1}, x=1)),
        ))

    if rel.parameter is Param.B:
        coeff = safe_div(base["b"] * x * (1 - base["a"]), 1 - base["c"], "1 - c")
        if up:
            return TermList(((1.0, base), (coeff, base.shift(a=1, b=1, c=1))))
        return TermList(((1.0, base), (-coeff / q, base.shift(a=1, c=1))))

    c = base["c"]
    moved = {name: 1 for name in c_argument_shift(rel.kind, rel.variant)}
    if up:
        return TermList(((1 - c, base), (c, base.shift(c=1, **moved))))
    q_over_c = safe_div(q, c, "c")
    return TermList((
        (safe_div(1.0, 1 - q_over_c, "1 - q/c"), base.shift(**moved)),
        (-safe_div(q_over_c, 1 - q_over_c, "1 - q/c"), base),
    ))


def contiguous_residual(
    rel: RelationId,
    base: PhiSpec,
    cfg: EvalConfig | None = None,
    cache: MutableMapping[PhiSpec, SeriesValue] | None = None,
) -> ResidualEntry:
    """Residual between ``eval_phi(rel.lhs(base))`` and the evaluated right-hand side."""
    cfg = cfg or EvalConfig()
    rhs = contiguous_rhs(rel, base)
    left = cached_eval(rel.lhs(base), cfg, cache).value
    right = evaluate_term_list(rhs, cfg, cache).value
    return ResidualEntry(residual(left, right), left, right)
