import itertools

import pytest

from twozone.builder import build_text, reference_instance
from twozone.detect import detect_all
from twozone.forest import canonical_code, parse_forest
from twozone.verify import SameCycle, contains, extract_forest, verify_realization


@pytest.fixture(scope="module")
def three_teeth():
    return build_text("(()()())")


def test_contains_envelope_and_teeth(three_teeth):
    rz = three_teeth
    cycles = rz.detection.verified
    env = max(cycles, key=lambda c: c.candidate.h_outer)
    teeth = [c for c in cycles if c is not env]
    for t in teeth:
        assert contains(env, t)
        assert not contains(t, env)
    for a, b in itertools.combinations(teeth, 2):
        assert not contains(a, b)
        assert not contains(b, a)


def test_contains_same_cycle_raises(three_teeth):
    cyc = three_teeth.detection.verified[0]
    with pytest.raises(SameCycle):
        contains(cyc, cyc)


def test_contains_agrees_with_integral_order_on_nested_family():
    """Cycles sharing one cap are concentric: containment must follow the
    outer-integral order."""
    rz = build_text("((((()))))")  # deep chain, one multi-root cap family
    cycles = sorted(rz.detection.verified, key=lambda c: c.candidate.h_outer)
    for small, big in zip(cycles, cycles[1:]):
        assert contains(big, small)
        assert not contains(small, big)


def test_extract_forest_shapes(three_teeth):
    forest = extract_forest(three_teeth.detection.verified)
    assert canonical_code(forest) == canonical_code(parse_forest("(()()())"))
    one = extract_forest(three_teeth.detection.verified[:1])
    assert canonical_code(one) == "()"
    empty = extract_forest([])
    assert canonical_code(empty) == ""


def test_extract_forest_permutation_invariant(three_teeth):
    cycles = list(three_teeth.detection.verified)
    code = canonical_code(extract_forest(cycles))
    for perm in itertools.permutations(cycles):
        assert canonical_code(extract_forest(list(perm))) == code


def test_containment_is_strict_partial_order(three_teeth):
    cycles = three_teeth.detection.verified
    n = len(cycles)
    rel = [
        [contains(cycles[j], cycles[i]) if i != j else False for j in range(n)]
        for i in range(n)
    ]
    for i in range(n):
        for j in range(n):
            if rel[i][j]:
                assert not rel[j][i]  # antisymmetry
            for k in range(n):
                if rel[i][j] and rel[j][k]:
                    assert rel[i][k]  # transitivity


def test_verify_realization_match(three_teeth):
    rz = three_teeth
    report = verify_realization(
        rz.system, rz.boundary, rz.detection, parse_forest("(()()())")
    )
    assert report.match
    assert all(r.verdict == "isolated" for r in report.isolation)
    assert report.exclusion_ok


def test_verify_realization_mismatch_on_paper_instance():
    boundary, system = reference_instance("keycurve-3")
    detection = detect_all(system, boundary)
    report = verify_realization(system, boundary, detection,
                                parse_forest("(()()())"))
    assert not report.match
    assert report.realized_code == "()"
    assert report.n_rejected == 3


def test_verify_empty_against_empty():
    rz = build_text("")
    assert rz.report.match
    assert rz.report.realized_code == ""
