import random
from itertools import combinations

import numpy as np
import pytest

from eil.errors import GraphFormatError, ParameterError
from eil.furedi import (
    build_furedi,
    classes_from_text,
    classes_to_text,
    degree_profile,
    orbit_of,
    verify_appendix,
)
from eil.gf import FieldCtx
from eil.report import validate_report
from eil.subgraph import common_neighbors, count_biclique_general, is_ksm_free


def test_vertex_counts_frozen():
    assert build_furedi(7, 3).n == 16
    assert build_furedi(5, 2).n == 12
    assert build_furedi(13, 4).n == 42


def test_build_validation():
    with pytest.raises(ParameterError):
        build_furedi(7, 4)  # 4 does not divide 6
    with pytest.raises(ParameterError):
        build_furedi(7, 1)
    with pytest.raises(ParameterError):
        build_furedi(8, 7)  # q not prime


def test_orbits_partition_the_punctured_plane():
    g = build_furedi(7, 3)
    ctx = FieldCtx(7)
    seen = set()
    for rep in g.classes:
        orbit = orbit_of(ctx, g.subgroup, rep)
        assert len(set(orbit)) == 3
        assert min(orbit) == rep
        assert not (set(orbit) & seen)
        seen |= set(orbit)
    assert len(seen) == 48
    assert (0, 0) not in seen


@pytest.mark.parametrize("q,t", [(5, 2), (7, 3), (13, 3), (13, 4)])
def test_degree_profile(q, t):
    g = build_furedi(q, t)
    degrees = degree_profile(g)
    assert set(degrees) <= {q - 1, q}


def test_edge_relation_is_rescaling_invariant():
    q, t = 13, 3
    g = build_furedi(q, t)
    ctx = FieldCtx(q)
    subgroup = list(g.subgroup)
    rng = random.Random(99)
    baseline = set(g.graph.edges())
    for _ in range(50):
        # replace every representative by a random orbit member
        reps = []
        for a, b in g.classes:
            h = rng.choice(subgroup)
            reps.append((h * a % q, h * b % q))
        arr = np.array(reps, dtype=np.int64)
        dots = arr @ arr.T % q
        adj = np.isin(dots, np.array(subgroup))
        np.fill_diagonal(adj, False)
        edges = {
            (i, j) for i in range(len(reps)) for j in range(i + 1, len(reps)) if adj[i, j]
        }
        assert edges == baseline


def test_pairs_with_common_neighbors_are_linearly_independent():
    for q, t in [(7, 3), (13, 4)]:
        g = build_furedi(q, t)
        for u, v in combinations(range(g.n), 2):
            if g.graph.rows[u] & g.graph.rows[v]:
                (a, b), (c, d) = g.classes[u], g.classes[v]
                assert (a * d - b * c) % q != 0


@pytest.mark.parametrize("q,t", [(5, 2), (7, 3), (13, 3), (13, 4)])
def test_common_neighborhoods_at_most_t_and_tight(q, t):
    g = build_furedi(q, t)
    best = 0
    for u, v in combinations(range(g.n), 2):
        size = len(common_neighbors(g.graph, [u, v]))
        assert size <= t
        best = max(best, size)
    assert best == t


@pytest.mark.parametrize("q,t", [(7, 3), (13, 3), (13, 4)])
def test_no_k3t_and_no_ktt(q, t):
    g = build_furedi(q, t)
    assert is_ksm_free(g.graph, 3, t).free
    assert count_biclique_general(g.graph, t, t) == 0


def test_verify_appendix_report():
    g = build_furedi(7, 3)
    report = verify_appendix(g)
    validate_report(report.to_json_dict())
    assert report.all_passed()
    rec = report.trials[0]
    assert rec["n"] == rec["n_expected"] == 16
    assert rec["k2_free"] and rec["k3t_free"]
    assert rec["ktt_count"] == 0


def test_verify_appendix_t2():
    report = verify_appendix(build_furedi(5, 2))
    assert report.all_passed()
    assert report.trials[0]["ktt_count"] is None  # only tracked for t >= 3


def test_classes_sidecar_roundtrip():
    g = build_furedi(7, 3)
    text = classes_to_text(g)
    assert classes_from_text(text) == list(g.classes)
    assert text.splitlines()[0] == "0 0 1"
    with pytest.raises(GraphFormatError):
        classes_from_text("0 0 1\n2 0 2\n")
    with pytest.raises(GraphFormatError):
        classes_from_text("0 0\n")
