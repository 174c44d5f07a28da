"""Ball enumeration against the growth series, nearest points, and the two
conjugator searches against each other."""

import itertools

import pytest

from conjlab import BudgetExceededError, NormalForm, normal_form
from conjlab.cayley import (
    enumerate_ball,
    min_conjugator,
    nearest_in_set,
    shortest_conjugator_bruteforce,
)

from oracles import sphere_counts


def nf(s, g):
    return normal_form(s, g)


def test_ball_f2_radius1(f2):
    ball = enumerate_ball(f2, 1)
    assert ball.element_count() == 5
    names = {str(x) for x in ball.elements}
    assert names == {"", "a", "a^-1", "b", "b^-1"}


def test_ball_z2_radius2(z2):
    assert enumerate_ball(z2, 2).element_count() == 13


def test_ball_f2_radius3(f2):
    ball = enumerate_ball(f2, 3)
    assert ball.sphere_sizes() == [1, 4, 12, 36]
    assert ball.element_count() == 53


@pytest.mark.parametrize("gname,r", [("f2", 6), ("z2", 6), ("path3", 5), ("pentagon", 4)])
def test_ball_matches_growth_series(gname, r, request):
    graph = request.getfixturevalue(gname)
    ball = enumerate_ball(graph, r)
    assert ball.sphere_sizes() == sphere_counts(graph, r)


def test_ball_closed_under_inverse(path3):
    ball = enumerate_ball(path3, 4)
    elems = ball.elements
    for x in elems:
        assert ~x in elems


def test_ball_distance_is_length(path3):
    ball = enumerate_ball(path3, 4)
    for r, layer in enumerate(ball.layers):
        for code in layer:
            assert len(code) == r


def test_ball_budget(f2):
    with pytest.raises(BudgetExceededError):
        enumerate_ball(f2, 6, budget=50)


def test_nearest_examples(z2, path3):
    S = [nf("a^%d" % n, z2) for n in range(-3, 4)]
    res = nearest_in_set(nf("a b", z2), S)
    assert str(res.element) == "a" and res.distance == 1 and res.unique

    res = nearest_in_set(nf("a b", z2), [nf("a b", z2), nf("a", z2)])
    assert res.distance == 0 and str(res.element) == "a b"

    S = [nf("a^%d" % n, path3) for n in range(-3, 4)]
    res = nearest_in_set(nf("c", path3), S)
    assert res.element.is_identity() and res.distance == 1


def test_nearest_uniqueness_flag(f2):
    res = nearest_in_set(nf("", f2), [nf("a", f2), nf("b", f2)])
    assert res.distance == 1 and not res.unique
    assert str(res.element) == "a"  # shortlex tie-break


def test_nearest_empty(f2):
    from conjlab import InputError

    with pytest.raises(InputError):
        nearest_in_set(nf("a", f2), [])


def test_bruteforce_examples(f2):
    g = shortest_conjugator_bruteforce(nf("a", f2), nf("b a b^-1", f2), 4)
    assert str(g) == "b"
    g = shortest_conjugator_bruteforce(nf("a b", f2), nf("a b", f2), 3)
    assert g.is_identity()
    assert shortest_conjugator_bruteforce(nf("a", f2), nf("b", f2), 6) is None


def test_bruteforce_validity_and_minimality(path3):
    a = nf("a c", path3)
    h = nf("c b a", path3)
    b = a.conjugated_by(h)
    g = shortest_conjugator_bruteforce(a, b, 5)
    assert a.conjugated_by(g) == b
    ball = enumerate_ball(path3, len(g) - 1)
    for code in ball.codes():
        assert a.conjugated_by(NormalForm(path3, code, _canonical=True)) != b


def test_bruteforce_symmetric_lengths(f2):
    a = nf("a b", f2)
    b = a.conjugated_by(nf("b b a", f2))
    g1 = shortest_conjugator_bruteforce(a, b, 6)
    g2 = shortest_conjugator_bruteforce(b, a, 6)
    assert len(g1) == len(g2)


def test_min_conjugator_matches_bruteforce(f2, path3):
    """Bidirectional conjugation BFS returns the same minimum as the ball scan."""
    for graph in (f2, path3):
        n = 2 * len(graph.vertices)
        cores = []
        for L in range(0, 4):
            for w in itertools.product(range(n), repeat=L):
                x = NormalForm(graph, w)
                if len(x) == L:
                    cores.append(x)
        import random

        rng = random.Random(7)
        sample = rng.sample(cores, min(25, len(cores)))
        for a in sample:
            h = NormalForm(graph, tuple(rng.randrange(n) for _ in range(3)))
            b = a.conjugated_by(h)
            fast = min_conjugator(a, b, 8)
            slow = shortest_conjugator_bruteforce(a, b, 8)
            assert fast is not None and slow is not None
            assert len(fast) == len(slow)
            assert a.conjugated_by(fast) == b


def test_min_conjugator_not_found(f2):
    assert min_conjugator(nf("a", f2), nf("b", f2), 5) is None


def test_min_conjugator_identity(f2):
    assert min_conjugator(nf("a b", f2), nf("a b", f2), 3).is_identity()
