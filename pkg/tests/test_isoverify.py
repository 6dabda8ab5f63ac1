import pytest

from strandcontact.arcdiag import ArcDiagram, InvalidDiagramError, to_quad_surface
from strandcontact.contact import ca_table
from strandcontact.homology import summand_nonzero
from strandcontact.isoverify import (
    NotRealizable,
    corpus,
    phi,
    phi_inv,
    sfh_table,
    verify,
)

SQUARE = ArcDiagram((1, 1), (1, 1))
TORUS = ArcDiagram((4,), (1, 2, 1, 2))
ANNULUS = ArcDiagram((3, 1), (1, 2, 1, 2))
LOOP = ArcDiagram((2,), (1, 1))


def test_phi_identity_structure():
    table = ca_table(SQUARE)
    for e in table.identities:
        s, t, h = phi(SQUARE, table.basis[e])
        assert s == t
        assert all(m == 0 for m in h)


def test_phi_injective_and_nonzero():
    for d in (SQUARE, TORUS, ANNULUS):
        table = ca_table(d)
        triples = [phi(d, xi) for xi in table.basis]
        assert len(set(triples)) == len(triples)
        for trip in triples:
            assert summand_nonzero(d, *trip)


def test_phi_roundtrips():
    for d in (SQUARE, TORUS, ANNULUS):
        table = ca_table(d)
        for xi in table.basis:
            trip = phi(d, xi)
            assert phi_inv(d, *trip) == xi
            assert phi(d, phi_inv(d, *trip)) == trip


def test_phi_inv_rejects_zero_summand():
    with pytest.raises(NotRealizable):
        phi_inv(SQUARE, frozenset({1}), frozenset(), ())


def test_verify_square():
    report = verify(SQUARE)
    assert report.success
    assert report.ca_dim == 2
    assert report.homology_dim == 2
    assert report.unit_ok
    assert report.products_checked == 4


def test_verify_torus():
    report = verify(TORUS)
    assert report.success
    assert report.ca_dim == 10
    assert report.homology_dim == 10
    euler = {row["e"]: row for row in report.by_euler}
    assert euler[2]["ca_dim"] == 1
    assert euler[0]["ca_dim"] == 8
    assert euler[-2]["ca_dim"] == 1


def test_verify_annulus():
    report = verify(ANNULUS)
    assert report.success
    assert report.ca_dim == report.homology_dim


def test_verify_rejects_invalid():
    with pytest.raises(InvalidDiagramError):
        verify(LOOP)


def test_report_json_shape():
    data = verify(SQUARE).to_json()
    assert data["schema"] == 1
    assert data["success"] is True
    assert data["mismatches"] == []
    assert {"s", "t", "h", "contact", "local", "chain", "maslov2"} <= set(
        data["summands"][0]
    )


def test_sfh_table_square():
    table = sfh_table(SQUARE)
    assert table.dividing_sets == ((), (1,))
    assert table.matrix == ((1, 0), (0, 1))


def test_sfh_table_torus():
    table = sfh_table(TORUS)
    sets = table.dividing_sets
    assert sets == ((), (1,), (2,), (1, 2))
    by = {
        (sets[i], sets[j]): table.matrix[i][j]
        for i in range(4)
        for j in range(4)
    }
    assert by[((), ())] == 1
    assert by[((1,), (2,))] == 3
    assert by[((2,), (1,))] == 1
    # diagonal entries always carry the identity morphism
    for s in sets:
        assert by[(s, s)] >= 1
    assert sum(table.matrix[i][j] for i in range(4) for j in range(4)) == 10


def test_sfh_row_block_sums():
    table = sfh_table(TORUS)
    sets = table.dividing_sets
    block = sum(
        table.matrix[i][j]
        for i in range(4)
        for j in range(4)
        if len(sets[i]) == 1 and len(sets[j]) == 1
    )
    report = verify(TORUS)
    euler = {row["i"]: row for row in report.by_euler}
    assert block == euler[1]["h_dim"] == 8


def test_corpus_small():
    diagrams = corpus(1, 2)
    assert diagrams == [SQUARE]
    diagrams = corpus(2, 2)
    assert TORUS in diagrams
    for d in diagrams:
        assert d.k <= 2 and d.l <= 2


def test_corpus_dedups_segment_permutation():
    diagrams = corpus(2, 3)
    keys = set()
    for d in diagrams:
        from strandcontact.isoverify import _canonical_key

        key = _canonical_key(d)
        assert key not in keys
        keys.add(key)
    # (1,3) and (3,1) segment splits are the same diagram class
    sizes = sorted(tuple(sorted(d.segment_sizes)) for d in diagrams)
    assert all(s == tuple(sorted(s)) for s in sizes)


def test_corpus_verifies_quickly_at_k2():
    for d in corpus(2, 3):
        report = verify(d)
        assert report.success, (d, report.mismatches)
