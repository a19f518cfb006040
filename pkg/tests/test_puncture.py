"""Offsets, principalization, Segre classes, and refined classes."""
from fractions import Fraction

import pytest

from punctref.chowring import multiply, ray_class, reduce, truncate, unit
from punctref.conecx import PLFunction, build_complex, pl_function
from punctref.puncture import (
    PrincipalizationError,
    PuncturingData,
    monomial_ideal,
    normalized_ideal,
    principalize,
    puncturing_components,
    puncturing_data,
    refined_class,
    refined_class_excess,
    segre_class,
)


def test_puncturing_data_validation():
    pd = puncturing_data({"p1.1": {"x": 2}, "p1.2": {"y": 0}})
    assert pd.k_P == 2
    assert pd.offsets[0][0] == "p1.1"
    with pytest.raises(ValueError, match="duplicate"):
        PuncturingData(((("p"), pl_function({})), (("p"), pl_function({}))))
    with pytest.raises(ValueError, match="negative"):
        puncturing_data({"p": {"x": -1}})
    with pytest.raises(ValueError, match="integral"):
        PuncturingData((("p", PLFunction((("x", Fraction(1, 2)),))),))


def test_monomial_ideal_validation():
    c = build_complex(["x", "y"], [["x", "y"]])
    with pytest.raises(ValueError, match="at least one"):
        monomial_ideal(c, [])
    with pytest.raises(ValueError, match="unknown ray"):
        monomial_ideal(c, [{"zzz": 1}])
    with pytest.raises(ValueError, match="nonnegative"):
        monomial_ideal(c, [pl_function({"x": -2})])


def test_normalized_ideal_divides_by_per_ray_gcd():
    c = build_complex(["x", "y"], [["x", "y"]])
    pd = puncturing_data({"a": {"x": 4, "y": 2}, "b": {"x": 2}})
    ideal = normalized_ideal(c, pd)
    assert ideal.generators[0].as_dict() == {"x": 2, "y": 1}
    assert ideal.generators[1].as_dict() == {"x": 1}


def test_normalized_ideal_keeps_unit_gcd_rays(f1):
    ideal = normalized_ideal(f1.complex, f1.offsets)
    g1, g2 = ideal.generators
    assert g1.as_dict() == {k: 1 for k in ("Z1", "Z2", "R1", "R2", "R5", "R6", "W0a")}
    assert g2.as_dict() == {k: 1 for k in ("Z1", "Z2", "R3", "R4", "R7", "R8", "W0b")}


def test_normalized_ideal_requires_offsets():
    c = build_complex(["x"], [["x"]])
    with pytest.raises(ValueError, match="no offsets"):
        normalized_ideal(c, puncturing_data({}))


def test_components_p2(p2):
    assert puncturing_components(p2.complex, p2.offsets) == (("Z0",),)


def test_components_pr(pr):
    assert puncturing_components(pr.complex, pr.offsets) == (("ray1",), ("ray2",))


def test_components_f1(f1):
    assert puncturing_components(f1.complex, f1.offsets) == (
        ("Z1",),
        ("Z2",),
        ("W0a", "W0b"),
    )


def test_empty_components_give_zero_class():
    c = build_complex(["x", "y"], [["x"], ["y"]])
    pd = puncturing_data({"p1": {"x": 1}, "p2": {"y": 1}})
    assert puncturing_components(c, pd) == ()
    res = refined_class(c, pd)
    assert res.cls.is_zero()
    assert res.components == ()


def test_no_offsets_give_unit_class():
    c = build_complex(["x"], [["x"]])
    res = refined_class(c, puncturing_data({}))
    assert res.cls == unit(c)
    assert res.components == ((),)


def test_principalize_toy_cross():
    c = build_complex(["x", "y"], [["x", "y"]])
    ideal = monomial_ideal(c, [{"x": 1}, {"y": 1}])
    c2, trace, total = principalize(c, ideal)
    assert len(trace) == 1
    assert trace[0].center == ("x", "y")
    assert total.as_dict() == {trace[0].new_ray: Fraction(1)}
    assert not c2.has_cone(("x", "y"))


def test_principalize_noop_on_principal_ideal(p2):
    ideal = normalized_ideal(p2.complex, p2.offsets)
    c2, trace, total = principalize(p2.complex, ideal)
    assert trace == ()
    assert c2 == p2.complex
    assert total.as_dict() == {"Z0": Fraction(1)}


def test_principalize_f1_deterministic_center(f1):
    ideal = normalized_ideal(f1.complex, f1.offsets)
    c2, trace, total = principalize(f1.complex, ideal)
    assert len(trace) == 1
    assert trace[0].center == ("W0a", "W0b")
    assert total.as_dict() == {
        "Z1": Fraction(1),
        "Z2": Fraction(1),
        trace[0].new_ray: Fraction(1),
    }


def test_principalize_budget_exhaustion():
    c = build_complex(["x", "y"], [["x", "y"]])
    ideal = monomial_ideal(c, [{"x": 1}, {"y": 1}])
    with pytest.raises(PrincipalizationError, match="budget"):
        principalize(c, ideal, max_steps=0)


def test_segre_seed_independence():
    c = build_complex(["x", "y", "z"], [["x", "y"], ["y", "z"]])
    ideal = monomial_ideal(c, [{"x": 2, "y": 1}, {"y": 1, "z": 2}, {"y": 3}])
    base = segre_class(c, ideal)
    for seed in (1, 2, 3, 11):
        assert segre_class(c, ideal, choice_seed=seed) == base


def test_segre_p2(p2):
    ideal = normalized_ideal(p2.complex, p2.offsets)
    s = segre_class(p2.complex, ideal)
    expected = reduce([({"Z0": 1}, 1), ({"Z0": 2}, -1)], p2.complex)
    assert s == expected
    assert segre_class(p2.complex, ideal, backend="aluffi-crosscheck") == expected


def test_segre_f1_intermediates(f1):
    ideal = normalized_ideal(f1.complex, f1.offsets)
    s = segre_class(f1.complex, ideal)
    assert truncate(s, 1) == reduce([({"Z1": 1}, 1), ({"Z2": 1}, 1)], f1.complex)
    assert truncate(s, 2) == reduce(
        [
            ({"Z1": 2}, -1),
            ({"Z2": 2}, -1),
            ({"Z1": 1, "Z2": 1}, -2),
            ({"W0a": 1, "W0b": 1}, 1),
        ],
        f1.complex,
    )


def test_segre_max_codim_truncates(p2):
    ideal = normalized_ideal(p2.complex, p2.offsets)
    s1 = segre_class(p2.complex, ideal, max_codim=1)
    assert s1 == reduce([({"Z0": 1}, 1)], p2.complex)


def test_segre_rejects_unknown_backend(p2):
    ideal = normalized_ideal(p2.complex, p2.offsets)
    with pytest.raises(ValueError, match="backend"):
        segre_class(p2.complex, ideal, backend="magic")
    with pytest.raises(ValueError, match="backend"):
        refined_class(p2.complex, p2.offsets, backend="magic")


def p2_refined_expected(c):
    return reduce(
        [({"Z0": 2}, 1), ({"Z0": 1, "Z1": 1}, 1), ({"Z0": 1, "Z2": 1}, 1)], c
    )


def test_refined_p2(p2):
    res = refined_class(p2.complex, p2.offsets)
    assert res.cls == p2_refined_expected(p2.complex)
    assert res.trace == ()
    assert res.components == (("Z0",),)
    crossed = refined_class(p2.complex, p2.offsets, backend="aluffi-crosscheck")
    assert crossed.cls == res.cls


def test_refined_p2_excess_shortcut(p2):
    cls = refined_class_excess(p2.complex, p2.offsets, [("Z0",)])
    assert cls == p2_refined_expected(p2.complex)


def test_refined_pr_is_sum_of_component_rays(pr):
    res = refined_class(pr.complex, pr.offsets)
    assert res.cls == ray_class(pr.complex, "ray1") + ray_class(pr.complex, "ray2")
    # k_P = 1: the refined class agrees with the plain Segre truncation
    ideal = normalized_ideal(pr.complex, pr.offsets)
    assert res.cls == truncate(segre_class(pr.complex, ideal), 1)


def test_refined_f1_twelve_terms(f1):
    res = refined_class(f1.complex, f1.offsets)
    expected = reduce(
        [
            ({"Z1": 2}, 3),
            ({"Z2": 2}, 1),
            ({"Z1": 1, "Z2": 1}, 4),
            ({"W0a": 1, "W0b": 1}, 1),
            ({"Z1": 1, "R1": 1}, 3),
            ({"Z1": 1, "R2": 1}, 1),
            ({"Z1": 1, "R3": 1}, 3),
            ({"Z1": 1, "R4": 1}, 1),
            ({"Z2": 1, "R5": 1}, 3),
            ({"Z2": 1, "R6": 1}, 1),
            ({"Z2": 1, "R7": 1}, 3),
            ({"Z2": 1, "R8": 1}, 1),
        ],
        f1.complex,
    )
    assert res.cls == expected
    assert len(res.cls.terms) == 12


def test_refined_counterexample_original(f1ce):
    res = refined_class(f1ce.complex, f1ce.offsets)
    assert res.cls == reduce([({"Z1": 2}, 1)], f1ce.complex)


def test_refined_homogeneous_of_degree_k_P(p2, pr, f1, f1ce):
    for fx in (p2, pr, f1, f1ce):
        res = refined_class(fx.complex, fx.offsets)
        assert res.cls.degrees() == (fx.offsets.k_P,)


def test_excess_error_paths(p2):
    with pytest.raises(ValueError, match="transverse"):
        refined_class_excess(p2.complex, p2.offsets, [("Z0",), ("Z0",)])
    with pytest.raises(ValueError, match="do not span"):
        refined_class_excess(p2.complex, p2.offsets, [("Z1", "Z2")])
    with pytest.raises(ValueError, match="codimension mismatch"):
        one = puncturing_data({"p1.1": {"Z0": 1}})
        refined_class_excess(p2.complex, one, [("Z0", "Z1")])


def test_excess_zero_excess_degree():
    # k_P punctures across k_P transverse divisors: pure stratum class.
    c = build_complex(["a", "b"], [["a", "b"]])
    pd = puncturing_data({"p1.1": {"a": 1}, "p1.2": {"b": 1}})
    cls = refined_class_excess(c, pd, [("a",), ("b",)])
    assert cls == multiply(ray_class(c, "a"), ray_class(c, "b"))
