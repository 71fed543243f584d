"""Seeded sampling of parameter points and batch residual checks over the catalog.

Sample points come from numpy's Philox-4x64 counter-based generator keyed by
the suite seed; the counter's upper words encode ``(kind, sample index)``, so
each point is a pure function of ``(seed, kind, index)`` and independent of
how many other points were drawn before it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import catalog as cat
from .errors import QAppellError
from .phi_series import PARAMS, EvalConfig, PhiKind, PhiSpec, SeriesValue
from .recursions import MAX_N, ShiftRequest, TheoremId, cross_check, recursion_residual
from .relations import RelationId, Variant, contiguous_residual

log = logging.getLogger(__name__)

_KIND_CODE = {PhiKind.PHI1: 1, PhiKind.PHI2: 2, PhiKind.PHI3: 3, PhiKind.PHI4: 4}

# Shifts c down by up to MAX_N steps, so c q^j must stay clear of 1 for negative j too.
_POLE_J = range(-MAX_N, 41)


@dataclass(frozen=True)
class SampleDomain:
    q_modulus_range: tuple[float, float] = (0.1, 0.8)
    q_complex: bool = True
    param_modulus_max: float = 0.9
    arg_modulus_max: float = 0.4
    pole_margin: float = 0.05
    seed: int = 0

    def __post_init__(self) -> None:
        lo, hi = self.q_modulus_range
        if not 0.0 < lo <= hi < 1.0:
            raise ValueError(f"q_modulus_range must lie inside (0, 1), got {self.q_modulus_range}")
        if not 0.0 < self.arg_modulus_max < 1.0:
            raise ValueError("arg_modulus_max must lie in (0, 1)")
        if not self.param_modulus_max > 0 or not self.pole_margin > 0:
            raise ValueError("param_modulus_max and pole_margin must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _generator(dom: SampleDomain, kind: PhiKind, index: int) -> np.random.Generator:
    bitgen = np.random.Philox(key=dom.seed, counter=[0, 0, index, _KIND_CODE[kind]])
    return np.random.Generator(bitgen)


def _disk(rng: np.random.Generator, radius: float) -> complex:
    """Uniform point in the closed disk ``|z| <= radius``."""
    r = radius * math.sqrt(rng.random())
    return complex(r * np.exp(2j * math.pi * rng.random()))


def admissible(spec: PhiSpec, dom: SampleDomain) -> bool:
    """Whether ``spec`` keeps every identity of the catalog away from its poles."""
    q, margin = spec.q, dom.pole_margin
    if abs(spec.x) > dom.arg_modulus_max or abs(spec.y) > dom.arg_modulus_max:
        return False
    p = spec.params()
    for name, value in p.items():
        if name in ("c", "cp"):
            if abs(value) < margin or abs(value - q) < margin:
                return False
            if any(abs(value * q**j - 1.0) < margin for j in _POLE_J):
                return False
        elif abs(1.0 - value) < margin:
            return False
    return True


def sample_point(kind: PhiKind, dom: SampleDomain, index: int) -> PhiSpec:
    """Deterministic admissible parameter point number ``index`` for ``kind``.

    Draws ``q`` with modulus uniform in ``dom.q_modulus_range`` (uniform phase
    when ``dom.q_complex``), parameters uniform in the disk of radius
    ``dom.param_modulus_max`` and ``x, y`` uniform in the disk of radius
    ``dom.arg_modulus_max``, rejecting until :func:`admissible` holds.
    """
    rng = _generator(dom, kind, index)
    names = PARAMS[kind][0] + PARAMS[kind][1]
    lo, hi = dom.q_modulus_range
    while True:
        modulus = rng.uniform(lo, hi)
        phase = 2 * math.pi * rng.random() if dom.q_complex else 0.0
        q = complex(modulus * np.exp(1j * phase))
        values = {name: _disk(rng, dom.param_modulus_max) for name in names}
        x, y = _disk(rng, dom.arg_modulus_max), _disk(rng, dom.arg_modulus_max)
        spec = PhiSpec.build(kind, q, x, y, **values)
        if admissible(spec, dom):
            return spec


@dataclass
class ResidualReport:
    identity: str
    samples: int
    max_residual: float | None
    mean_residual: float | None
    failures: list[dict] = field(default_factory=list)
    variant_adjudication: dict | None = None

    @property
    def passed(self) -> bool:
        if self.failures:
            return False
        return self.variant_adjudication is None or self.variant_adjudication["winner"] is not None

    def to_dict(self) -> dict:
        return asdict(self)


def _check_one(target, spec: PhiSpec, n: int | None, cfg: EvalConfig, cache) -> float:
    if isinstance(target, RelationId):
        return contiguous_residual(target, spec, cfg, cache).residual
    if isinstance(target, TheoremId):
        return recursion_residual(ShiftRequest(target, spec, n), cfg, cache).residual
    first, second = target
    worst = 0.0
    for formula in (1, 2):
        pair = (TheoremId(first, formula), TheoremId(second, formula))
        worst = max(worst, cross_check(pair, spec, n, cfg, cache).residual)
    return worst


def _target_kind(target) -> PhiKind:
    if isinstance(target, (RelationId, TheoremId)):
        return target.kind
    return TheoremId(target[0], 1).kind


def _sweep(target, label: str, points: Sequence[PhiSpec], n, threshold, cfg, caches) -> ResidualReport:
    residuals = []
    failures = []
    for index, spec in enumerate(points):
        try:
            r = _check_one(target, spec, n, cfg, caches[index])
        except QAppellError as exc:
            failures.append({
                "index": index,
                "parameters": spec.to_dict(),
                "residual": None,
                "error": f"{type(exc).__name__}: {exc}",
            })
            continue
        residuals.append(r)
        if not r <= threshold:
            failures.append({"index": index, "parameters": spec.to_dict(), "residual": r})
    return ResidualReport(
        identity=label,
        samples=len(points),
        max_residual=max(residuals) if residuals else None,
        mean_residual=math.fsum(residuals) / len(residuals) if residuals else None,
        failures=failures,
    )


def _adjudicate(target, label, points, n, threshold, cfg, caches) -> ResidualReport:
    printed = _sweep(target.with_variant(Variant.PRINTED), label, points, n, threshold, cfg, caches)
    derived = _sweep(target.with_variant(Variant.DERIVED), label, points, n, threshold, cfg, caches)
    passing = [v for v, rep in ((Variant.PRINTED, printed), (Variant.DERIVED, derived)) if rep.passed]
    winner = passing[0] if len(passing) == 1 else None
    chosen, other = (printed, derived) if winner is Variant.PRINTED else (derived, printed)
    chosen.variant_adjudication = {
        "winner": winner.value if winner else None,
        "loser_max_residual": other.max_residual,
        "printed_max_residual": printed.max_residual,
        "derived_max_residual": derived.max_residual,
    }
    return chosen


def run_suite(
    identities: Iterable[str],
    dom: SampleDomain | None = None,
    samples_per_identity: int = 50,
    n_values: Sequence[int] = (1, 2, 3, 4),
    threshold: float = 1e-8,
    cfg: EvalConfig | None = None,
) -> list[ResidualReport]:
    """Check every identity on ``samples_per_identity`` seeded points.

    Recursion formulas and cross-checks get one report per ``n`` (label
    ``"<id>[n=<n>]"``). A flagged identity given without a variant suffix is
    run in both variants and the report names the single passing one.
    Evaluation errors become failures, not exceptions.

    Raises:
        UnknownIdentity: an ID does not resolve.
    """
    dom = dom or SampleDomain()
    cfg = cfg or EvalConfig()
    if samples_per_identity < 1:
        raise ValueError("samples_per_identity must be positive")
    for n in n_values:
        if not 1 <= n <= MAX_N:
            raise ValueError(f"n values must lie in [1, {MAX_N}], got {n}")
    targets = [(text, cat.resolve(text)) for text in identities]

    points: dict[PhiKind, list[PhiSpec]] = {}
    caches: dict[PhiKind, list[dict[PhiSpec, SeriesValue]]] = {}
    reports = []
    for text, target in targets:
        kind = _target_kind(target)
        if kind not in points:
            points[kind] = [sample_point(kind, dom, i) for i in range(samples_per_identity)]
            caches[kind] = [{} for _ in range(samples_per_identity)]
        orders: Sequence[int | None] = [None] if isinstance(target, RelationId) else n_values
        for n in orders:
            label = str(target) if isinstance(target, (RelationId, TheoremId)) else text.strip().lower()
            if n is not None:
                label = f"{label}[n={n}]"
            adjudicate = isinstance(target, (RelationId, TheoremId)) and target.flagged and target.variant is None
            run = _adjudicate if adjudicate else _sweep
            report = run(target, label, points[kind], n, threshold, cfg, caches[kind])
            log.debug("%s: max residual %.3e", label, report.max_residual)
            reports.append(report)
    return reports


def suite_passed(reports: Iterable[ResidualReport]) -> bool:
    """True iff every plain identity passed and every flagged one has exactly one passing variant."""
    return all(r.passed for r in reports)

