import random

import pytest

from twozone.forest import (
    ConfigForest,
    StrayCharacter,
    UnbalancedBrackets,
    canonical_code,
    is_equivalent,
    parse_forest,
    random_forest,
)


def test_parse_basic_shapes():
    f = parse_forest("(()())")
    assert len(f.roots) == 1
    assert len(f.roots[0].children) == 2
    assert all(not c.children for c in f.roots[0].children)

    assert parse_forest("").roots == []
    assert parse_forest(" ( ( ) ) ").node_count() == 2


def test_parse_error_positions():
    with pytest.raises(UnbalancedBrackets) as exc:
        parse_forest("(()")
    assert exc.value.position == 3

    with pytest.raises(UnbalancedBrackets) as exc:
        parse_forest("())")
    assert exc.value.position == 2

    with pytest.raises(StrayCharacter) as exc:
        parse_forest("(x)")
    assert exc.value.position == 1


def test_canonical_code_sorts_siblings():
    assert canonical_code(parse_forest("(()(()))")) == canonical_code(
        parse_forest("((())())")
    )
    assert canonical_code(parse_forest("()")) == "()"
    assert canonical_code(parse_forest("()()")) != canonical_code(parse_forest("(())"))


def test_is_equivalent():
    assert is_equivalent(parse_forest("(()())"), parse_forest("(()())"))
    assert not is_equivalent(parse_forest("()"), parse_forest("(())"))
    assert is_equivalent(ConfigForest(), ConfigForest())


def _shuffle_everywhere(node, rng):
    rng.shuffle(node.children)
    for c in node.children:
        _shuffle_everywhere(c, rng)


def test_canonical_invariant_under_permutation():
    rng = random.Random(7)
    for seed in range(100):
        f = random_forest(rng.randrange(13), 4, seed)
        code = canonical_code(f)
        for _ in range(100):
            rng.shuffle(f.roots)
            for r in f.roots:
                _shuffle_everywhere(r, rng)
            assert canonical_code(f) == code


def test_parse_roundtrip_of_canonical_code():
    for seed in range(50):
        f = random_forest((seed % 12) + 1, 4, seed)
        assert is_equivalent(parse_forest(canonical_code(f)), f)


def test_random_forest_contracts():
    assert canonical_code(random_forest(1, 3, 0)) == "()"
    a = random_forest(5, 3, 42)
    b = random_forest(5, 3, 42)
    assert canonical_code(a) == canonical_code(b)
    for budget in (0, 1, 5, 12):
        f = random_forest(budget, 4, 11)
        assert f.node_count() == budget
        assert f.depth() <= 4
