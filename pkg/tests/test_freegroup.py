"""Free-group words, tree geometry, primitive roots."""

import pytest

from conjlab import InputError
from conjlab.freegroup import (
    cyclic_reduce,
    finv,
    fmul,
    fpow,
    freduce,
    parse_free_word,
    format_free_word,
    primitive_root,
    tree_distance,
    tree_geodesic,
)


def w(s):
    return parse_free_word(s, 2)


def test_reduce_and_mul():
    assert freduce([1, -1]) == ()
    assert fmul(w("a b"), w("b^-1 a")) == (1, 1)
    assert finv(w("a b")) == (-2, -1)
    assert fpow(w("a b"), 2) == (1, 2, 1, 2)
    assert fpow(w("a"), -3) == (-1, -1, -1)


def test_parse_format_roundtrip():
    word = w("a b^-1 a^2")
    assert parse_free_word(format_free_word(word), 2) == word
    with pytest.raises(InputError):
        parse_free_word("z", 2)


def test_tree_distance_examples():
    assert tree_distance((), w("a b")) == 2
    assert tree_distance(w("a"), w("a b")) == 1
    assert tree_distance(w("a"), w("b")) == 2


def test_tree_geodesic():
    path = tree_geodesic(w("a"), w("b"))
    assert path == [(1,), (), (2,)]
    path = tree_geodesic(w("a b"), w("a"))
    assert path == [(1, 2), (1,)]
    for u, v in [(w("a b a"), w("a b^-1")), ((), w("b a^3"))]:
        path = tree_geodesic(u, v)
        assert path[0] == u and path[-1] == v
        assert all(tree_distance(x, y) == 1 for x, y in zip(path, path[1:]))
        assert len(path) == tree_distance(u, v) + 1


def test_cyclic_reduce():
    p, core = cyclic_reduce(w("a b a^-1"))
    assert p == (1,) and core == (2,)
    p, core = cyclic_reduce(w("a b"))
    assert p == () and core == (1, 2)


def test_primitive_root_examples():
    assert primitive_root(w("a^3")) == ((1,), 3)
    assert primitive_root(w("a b")) == ((1, 2), 1)
    assert primitive_root(w("a b a b")) == ((1, 2), 2)
    # conjugated power: root returned in original coordinates
    h = fmul(fmul(w("b"), fpow(w("a"), 3)), w("b^-1"))
    root, n = primitive_root(h)
    assert n == 3
    assert fpow(root, 3) == h


def test_primitive_root_identity():
    with pytest.raises(InputError):
        primitive_root(())
