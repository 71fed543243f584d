import pytest

from conftest import generic, random_spec
from qappell.errors import DegenerateCoefficient, UnknownIdentity, UnsupportedRelation
from qappell.phi_series import PhiKind, eval_phi
from qappell.relations import (
    Direction,
    Param,
    RelationId,
    VALID_PARAMS,
    TermList,
    Variant,
    all_relations,
    contiguous_residual,
    contiguous_rhs,
    evaluate_term_list,
)
from qappell.verifier import SampleDomain, sample_point


def test_catalog_size():
    rels = all_relations()
    assert len(rels) == 20
    assert len({str(r) for r in rels}) == 20
    assert sum(r.flagged for r in rels) == 4


@pytest.mark.parametrize("text", ["phi1.a.up", "phi4.c.up.derived", "phi2.b.down.printed"])
def test_id_round_trip(text):
    assert str(RelationId.parse(text)) == text


@pytest.mark.parametrize("text", ["phi3.a.up", "phi4.b.down", "phi5.a.up", "phi1.a.sideways", "phi1.a.up.fixed"])
def test_bad_ids(text):
    with pytest.raises(UnknownIdentity):
        RelationId.parse(text)


def test_invalid_combination():
    with pytest.raises(UnsupportedRelation):
        RelationId(PhiKind.PHI3, Param.A, Direction.UP)


def test_kind_mismatch():
    with pytest.raises(UnsupportedRelation):
        contiguous_rhs(RelationId.parse("phi1.a.up"), generic("phi2"))


def test_a_up_structure():
    base = generic("phi1")
    tl = contiguous_rhs(RelationId.parse("phi1.a.up"), base)
    a, b, bp, c, x, y, q = 0.3, 0.2, 0.1, 0.7, 0.2, 0.1, 0.5
    assert len(tl) == 3
    assert tl.coefficients == pytest.approx([1, a * x * (1 - b) / (1 - c), a * y * (1 - bp) / (1 - c)], rel=1e-15)
    assert tl.specs[0] == base
    assert tl.specs[1] == base.shift(a=1, b=1, c=1)
    assert tl.specs[2] == base.shift(a=1, bp=1, c=1, x=1)
    assert tl.specs[2].params() == pytest.approx(dict(a=a * q, b=b, bp=bp * q, c=c * q))


def test_a_zero_annihilates_corrections():
    base = generic("phi1", a=0.0)
    rel = RelationId.parse("phi1.a.up")
    tl = contiguous_rhs(rel, base)
    assert tl.coefficients[1:] == [0, 0]
    assert rel.lhs(base) == base
    assert contiguous_residual(rel, base).residual == 0


@pytest.mark.parametrize("rel", all_relations(), ids=str)
def test_origin(rel):
    base = generic(rel.kind, x=0, y=0)
    assert contiguous_residual(rel, base).residual <= 1e-14


def test_b_up_at_origin_telescopes():
    base = generic("phi1", x=0, y=0)
    tl = contiguous_rhs(RelationId.parse("phi1.b.up"), base)
    assert sum(tl.coefficients) == 1


def test_phi1_c_down_reference_point():
    rel = RelationId.parse("phi1.c.down")
    entry = contiguous_residual(rel, generic("phi1"))
    assert abs(entry.left - entry.right) / max(1, abs(entry.left)) <= 1e-10


def test_phi2_a_down_sampled():
    spec = sample_point(PhiKind.PHI2, SampleDomain(seed=3), 0)
    assert contiguous_residual(RelationId.parse("phi2.a.down"), spec).residual <= 1e-10


@pytest.mark.parametrize("text", ["phi2.c.up", "phi2.c.down", "phi4.c.up", "phi4.c.down"])
def test_flagged_variants_adjudicate(text):
    rel = RelationId.parse(text)
    base = generic(rel.kind)
    printed = contiguous_residual(rel.with_variant(Variant.PRINTED), base).residual
    derived = contiguous_residual(rel.with_variant(Variant.DERIVED), base).residual
    assert derived <= 1e-10 < 1e-3 <= printed


@pytest.mark.parametrize("rel", [r for r in all_relations() if not r.flagged], ids=str)
def test_unflagged_variants_coincide(rel):
    base = generic(rel.kind)
    p = contiguous_rhs(rel.with_variant(Variant.PRINTED), base)
    d = contiguous_rhs(rel.with_variant(Variant.DERIVED), base)
    assert p == d


@pytest.mark.parametrize("rel", all_relations(), ids=str)
def test_holds_on_sampled_points(rel):
    dom = SampleDomain(seed=11)
    for i in range(50):
        assert contiguous_residual(rel, sample_point(rel.kind, dom, i)).residual <= 1e-9


@pytest.mark.parametrize(
    "kind,param", [(k, p) for k, ps in VALID_PARAMS.items() for p in ps], ids=lambda v: v.value
)
def test_up_down_inverse(kind, param, rng):
    down = RelationId(kind, param, Direction.DOWN)
    for _ in range(10):
        base = random_spec(rng, kind)
        lifted = base.shift(**{param.value: 1})
        value = evaluate_term_list(contiguous_rhs(down, lifted)).value
        assert abs(value - eval_phi(base).value) <= 1e-9 * max(1, abs(value))


def test_degenerate_coefficients():
    with pytest.raises(DegenerateCoefficient):
        contiguous_rhs(RelationId.parse("phi1.a.up"), generic("phi1", c=1.0))
    with pytest.raises(DegenerateCoefficient):
        contiguous_rhs(RelationId.parse("phi1.c.down"), generic("phi1", c=0.5))  # c = q
    with pytest.raises(DegenerateCoefficient):
        contiguous_rhs(RelationId.parse("phi2.a.down"), generic("phi2", cp=1.0))


class TestTermList:
    def test_singleton(self):
        s = generic("phi3")
        assert evaluate_term_list(TermList(((1, s),))).value == eval_phi(s).value

    def test_cancellation(self):
        s = generic("phi3")
        sv = evaluate_term_list(TermList(((2, s), (-2, s))))
        assert sv.value == 0
        assert sv.tail_bound == pytest.approx(4 * eval_phi(s).tail_bound)

    def test_invariants(self):
        with pytest.raises(ValueError):
            TermList(())
        with pytest.raises(ValueError):
            TermList(((1, generic("phi1")), (1, generic("phi2"))))
        with pytest.raises(ValueError):
            TermList(((1, generic("phi1")), (1, generic("phi1", q=0.3))))

    def test_error_names_term(self):
        from qappell.relations import TermEvaluationError

        tl = TermList(((1, generic("phi1")), (1, generic("phi1", c=2.0))))
        with pytest.raises(TermEvaluationError) as info:
            evaluate_term_list(tl)
        assert info.value.index == 1
