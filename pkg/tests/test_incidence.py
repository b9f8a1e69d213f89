import math

import pytest

from eil.errors import ParameterError
from eil.evasive import line_intersection_counts
from eil.geom3 import point_index
from eil.gf import FieldCtx
from eil.incidence import (
    build_incidence,
    count_ktt_via_lines,
    verify_construction,
)
from eil.report import validate_report
from eil.subgraph import BitGraph, count_biclique, is_ksm_free


def test_build_is_deterministic():
    a = build_incidence(7, 3, 42)
    b = build_incidence(7, 3, 42)
    assert a.graph == b.graph
    assert a.x_set == b.x_set and a.y_set == b.y_set
    assert a.seed_y == b.seed_y != 42
    c = build_incidence(7, 3, 43)
    assert c.graph != a.graph


def test_build_validation():
    with pytest.raises(ParameterError):
        build_incidence(7, 3, 5, 5)  # equal seeds
    with pytest.raises(ParameterError):
        build_incidence(7, 2, 1)  # t < 3
    with pytest.raises(ParameterError):
        build_incidence(3, 4, 1)  # t > q
    with pytest.raises(ParameterError):
        build_incidence(6, 3, 1)  # q not prime


def test_size_bounds_and_edges():
    for seed in range(100):
        c = build_incidence(7, 3, 1000 + seed)
        assert c.n == c.x_set.count + c.y_set.count <= 2 * 3 * 49
        assert line_intersection_counts(c.x_set).max() <= 3
        assert line_intersection_counts(c.y_set).max() <= 3


def test_edges_match_incidence_relation():
    ctx = FieldCtx(5)
    c = build_incidence(5, 3, 11)
    xs = [tuple(map(int, divmod_point)) for divmod_point in _coords(c.x_set)]
    ys = [tuple(map(int, divmod_point)) for divmod_point in _coords(c.y_set)]
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            expected = sum(a * b for a, b in zip(x, y)) % 5 == 1
            assert bool(c.graph.rows[i] >> (len(xs) + j) & 1) == expected
    # the origin, when present, is isolated: the form vanishes at 0
    origin = point_index(ctx, (0, 0, 0))
    if c.x_set.contains_index(origin):
        v = list(c.x_set.indices()).index(origin)
        assert c.graph.degree(v) == 0


def _coords(point_set):
    q = point_set.q
    for idx in point_set.indices():
        yield (idx // (q * q), (idx // q) % q, idx % q)


@pytest.mark.parametrize("q", [3, 5])
def test_count_matches_bruteforce_oracle(q):
    for seed in range(10):
        c = build_incidence(q, 3, 500 + seed)
        assert count_ktt_via_lines(c) == count_biclique(c.graph, 3, 3)


def test_count_matches_bruteforce_oracle_t4():
    for seed in range(5):
        c = build_incidence(5, 4, 520 + seed)
        assert count_ktt_via_lines(c) == count_biclique(c.graph, 4, 4)


def test_count_zero_for_empty_x():
    from eil.evasive import PointSet
    from eil.incidence import IncidenceConstruction

    c = build_incidence(5, 3, 7)
    gutted = IncidenceConstruction(
        q=5, t=3, seed_x=7, seed_y=c.seed_y,
        x_set=PointSet.empty(5), y_set=c.y_set,
        vanishing_x=(), vanishing_y=c.vanishing_y,
        graph=BitGraph.from_edges(c.y_set.count, [], (0, c.y_set.count)),
    )
    assert count_ktt_via_lines(gutted) == 0


def test_freeness_is_deterministic():
    for seed in (1, 2, 3, 4, 5):
        c = build_incidence(7, 3, seed)
        assert is_ksm_free(c.graph, 2, 4).free


def test_vertex_removal_never_increases_count():
    for seed in (3, 14):
        c = build_incidence(5, 3, seed)
        base_count = count_biclique(c.graph, 3, 3)
        left, right = c.graph.sides
        for victim in list(range(c.n))[:: max(1, c.n // 8)]:
            keep = [v for v in range(c.n) if v != victim]
            remap = {v: i for i, v in enumerate(keep)}
            edges = [
                (remap[u], remap[v]) for u, v in c.graph.edges() if victim not in (u, v)
            ]
            sides = (left - 1, right) if victim < left else (left, right - 1)
            sub = BitGraph.from_edges(c.n - 1, edges, sides)
            assert count_biclique(sub, 3, 3) <= base_count


def test_verify_construction_report():
    c = build_incidence(7, 3, 42)
    report = verify_construction(c)
    validate_report(report.to_json_dict())
    assert report.all_passed()
    rec = report.trials[0]
    assert rec["n"] == c.n
    assert rec["ktt_count"] == count_ktt_via_lines(c)
    assert rec["ktt_count"] <= math.comb(c.n, 2)
    assert rec["ratio_count_n2"] == rec["ktt_count"] / c.n**2
