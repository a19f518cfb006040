"""Stanley-Reisner arithmetic and the blowup pullback/pushforward pair."""
from fractions import Fraction

import pytest

from punctref.chowring import (
    divisor_of_pl,
    multiply,
    pullback,
    pushforward,
    ray_class,
    reduce,
    serialize,
    stratum_class,
    truncate,
    unit,
    zero,
)
from punctref.conecx import build_complex, pl_function, star_subdivide


@pytest.fixture()
def square():
    # Two adjacent 2-cones; (a, c) is not a cone.
    return build_complex(["a", "b", "c"], [["a", "b"], ["b", "c"]])


def test_reduce_kills_non_cone_monomials(square):
    cls = reduce([({"a": 1, "c": 1}, 5), ({"a": 1, "b": 1}, 2)], square)
    assert cls.coeff({"a": 1, "c": 1}) == 0
    assert cls.coeff({"a": 1, "b": 1}) == 2


def test_reduce_merges_and_drops_zeros(square):
    cls = reduce([({"a": 1}, 3), ({"a": 1}, -3), ({"b": 1}, Fraction(1, 2))], square)
    assert cls.terms == (((("b", 1),), Fraction(1, 2)),)


def test_terms_sorted_graded_lex(square):
    cls = reduce([({"b": 2}, 1), ({"c": 1}, 1), ({"a": 1}, 1), ({}, 1)], square)
    monos = [m for m, _ in cls.terms]
    assert monos == [(), (("a", 1),), (("c", 1),), (("b", 2),)]


def test_algebra_operations(square):
    a = ray_class(square, "a")
    b = ray_class(square, "b")
    assert (a + b) - a == b
    assert a.scale(0).is_zero()
    assert zero(square).is_zero()
    prod = multiply(a + b, b)
    assert prod.coeff({"a": 1, "b": 1}) == 1
    assert prod.coeff({"b": 2}) == 1
    assert multiply(a, ray_class(square, "c")).is_zero()
    assert multiply(unit(square), a) == a


def test_cross_complex_arithmetic_rejected(square):
    other = build_complex(["a"], [["a"]])
    with pytest.raises(ValueError, match="different complexes"):
        multiply(ray_class(square, "a"), ray_class(other, "a"))


def test_stratum_class_squarefree(square):
    w = stratum_class(square, ("b", "c"))
    assert w.coeff({"b": 1, "c": 1}) == 1
    assert len(w.terms) == 1


def test_divisor_of_pl_uses_sparse_values(square):
    f = pl_function({"a": 2})
    d = divisor_of_pl(f, square)
    assert d.coeff({"a": 1}) == 2
    assert d.coeff({"b": 1}) == 0
    assert len(d.terms) == 1


def test_truncate_picks_homogeneous_part(square):
    cls = reduce([({}, 7), ({"a": 1}, 1), ({"a": 2}, 3), ({"b": 2}, 4)], square)
    assert truncate(cls, 2).degrees() == (2,)
    assert truncate(cls, 0).coeff({}) == 7
    assert truncate(cls, 5).is_zero()


def test_serialize_format(square):
    cls = reduce([({"a": 1}, Fraction(-3, 2)), ({}, 1)], square)
    assert serialize(cls) == [
        {"monomial": {}, "coeff": "1/1"},
        {"monomial": {"a": 1}, "coeff": "-3/2"},
    ]


@pytest.fixture()
def blown():
    pre = build_complex(["a", "b", "c"], [["a", "b"], ["b", "c"]])
    post, step = star_subdivide(pre, ("a", "b"), new_ray="e")
    return pre, post, step


def test_pullback_substitutes_center_rays(blown):
    pre, post, step = blown
    xa = pullback(ray_class(pre, "a"), step)
    assert xa.coeff({"a": 1}) == 1
    assert xa.coeff({"e": 1}) == 1
    xc = pullback(ray_class(pre, "c"), step)
    assert xc == ray_class(post, "c")


def test_pullback_kills_center_stratum(blown):
    pre, _, step = blown
    # (a, b) is no longer a cone upstairs: (x_a + x_e)(x_b + x_e) reduces to
    # the pure exceptional square plus the two mixed terms.
    w = pullback(stratum_class(pre, ("a", "b")), step)
    assert w.coeff({"a": 1, "b": 1}) == 0
    assert w.coeff({"e": 2}) == 1
    assert w.coeff({"a": 1, "e": 1}) == 1
    assert w.coeff({"b": 1, "e": 1}) == 1


def test_pushforward_degree_rules(blown):
    pre, post, step = blown
    assert pushforward(unit(post), step) == unit(pre)
    assert pushforward(ray_class(post, "e"), step).is_zero()
    e2 = multiply(ray_class(post, "e"), ray_class(post, "e"))
    down = pushforward(e2, step)
    assert down.coeff({"a": 1, "b": 1}) == -1
    assert len(down.terms) == 1


def test_pushforward_cubic_exceptional(blown):
    pre, post, step = blown
    e = ray_class(post, "e")
    e3 = multiply(multiply(e, e), e)
    down = pushforward(e3, step)
    # -h_1(x_a, x_b) x_a x_b, truncated by the Stanley-Reisner relations of
    # the base: both surviving monomials have support {a, b}.
    assert down.coeff({"a": 2, "b": 1}) == -1
    assert down.coeff({"a": 1, "b": 2}) == -1


def test_push_pull_identity(blown):
    pre, _, step = blown
    for cls in (
        unit(pre),
        ray_class(pre, "a"),
        ray_class(pre, "b"),
        stratum_class(pre, ("b", "c")),
        reduce([({"a": 2}, Fraction(3, 4)), ({"c": 1}, -2)], pre),
    ):
        assert pushforward(pullback(cls, step), step) == cls


def test_projection_formula_instance(blown):
    pre, post, step = blown
    alpha = ray_class(pre, "b")
    beta = ray_class(post, "e")
    lhs = pushforward(multiply(pullback(alpha, step), beta), step)
    rhs = multiply(alpha, pushforward(beta, step))
    assert lhs == rhs


def test_domain_checks(blown):
    pre, post, step = blown
    with pytest.raises(ValueError, match="source"):
        pullback(unit(post), step)
    with pytest.raises(ValueError, match="refined"):
        pushforward(unit(pre), step)
