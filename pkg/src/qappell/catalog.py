"""Identity catalog: every checkable ID with its source anchor and discrepancy flag."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import UnknownIdentity
from .phi_series import PhiKind
from .recursions import CROSS_PAIRS, TheoremId, all_theorems
from .relations import Direction, RelationId, all_relations

# Equation labels of the PHI1 section; the other kinds carry unnumbered displays.
_REL_REFS = {
    "phi1.a.up": "Eq. (3)",
    "phi1.a.down": "Eq. (4)",
    "phi1.b.up": "Eq. (10)",
    "phi1.b.down": "Eq. (11)",
    "phi1.c.down": "Eq. (16)",
    "phi1.c.up": "Eq. (16) with c -> cq (unnumbered)",
}
_THM_EQS = {
    (1, 1): "(1)", (1, 2): "(2)", (2, 1): "(5)", (2, 2): "(6)",
    (3, 1): "(8)", (3, 2): "(9)", (4, 1): "(12)", (4, 2): "(13)",
    (5, 1): "(14)", (5, 2): "(15)",
}
_SECTION = {PhiKind.PHI1: 1, PhiKind.PHI2: 2, PhiKind.PHI3: 3, PhiKind.PHI4: 4}


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    paper_ref: str
    flagged: bool

    def to_dict(self) -> dict:
        return {"id": self.id, "paper_ref": self.paper_ref, "flagged": self.flagged}


def _relation_ref(rel: RelationId) -> str:
    if rel.base_id in _REL_REFS:
        return _REL_REFS[rel.base_id]
    step = "q" if rel.direction is Direction.UP else "q^-1"
    return f"Sec. {_SECTION[rel.kind]}, {rel.parameter.value} -> {rel.parameter.value}{step} display"


def _theorem_ref(tid: TheoremId) -> str:
    eq = _THM_EQS.get((tid.theorem, tid.formula))
    if eq:
        return f"Theorem {tid.theorem}, Eq. {eq}"
    which = "first" if tid.formula == 1 else "second"
    return f"Theorem {tid.theorem}, {which} formula"


def catalog() -> list[CatalogEntry]:
    """The 52 identities: 20 contiguous relations then 32 recursion formulas."""
    entries = [CatalogEntry(r.base_id, _relation_ref(r), r.flagged) for r in all_relations()]
    entries += [CatalogEntry(t.base_id, _theorem_ref(t), t.flagged) for t in all_theorems()]
    return entries


def cross_ids() -> list[str]:
    return [f"cross.thm{a}.thm{b}" for a, b in CROSS_PAIRS]


_CROSS_RE = re.compile(r"^cross\.thm(\d{1,2})\.thm(\d{1,2})$")


def parse_cross(text: str) -> tuple[int, int]:
    m = _CROSS_RE.match(text.strip().lower())
    if not m or (int(m.group(1)), int(m.group(2))) not in CROSS_PAIRS:
        raise UnknownIdentity(f"not a cross-check id: {text!r}")
    return int(m.group(1)), int(m.group(2))


def resolve(text: str) -> RelationId | TheoremId | tuple[int, int]:
    """Parse any identity string; raise UnknownIdentity when nothing matches."""
    t = text.strip().lower()
    if t.startswith("phi"):
        return RelationId.parse(t)
    if t.startswith("thm"):
        return TheoremId.parse(t)
    if t.startswith("cross."):
        return parse_cross(t)
    raise UnknownIdentity(f"unknown identity {text!r}")


def default_suite() -> list[str]:
    """Every contiguous relation, recursion formula and cross-check pair."""
    return [e.id for e in catalog()] + cross_ids()

