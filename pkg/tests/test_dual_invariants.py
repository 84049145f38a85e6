from itertools import product

from hypothesis import given, strategies as st
import pytest

from alcove_pieces.dual_invariants import (NonFiniteGroup, PairDatum, TableError,
                                           char_poly_plus, fingerprints, endomorphism_fingerprint,
                                           group_closure, load_pair_tables, match_tables,
                                           orbit_count_union_find, orbit_series,
                                           parse_pair_tables, pi1_order, split_pairs)

RECORD = """side: {side}
pair: T
group: A1:sc
index: {index}
rank: {rank}
order: {order}
generators: {gens}
"""


def record(side="chi", index=0, rank=1, order=2, gens="-1"):
    return RECORD.format(side=side, index=index, rank=rank, order=order, gens=gens)


@pytest.fixture(scope="module")
def tables():
    return split_pairs(load_pair_tables())


def test_sl2_pgl2_records(tables):
    chi, c = tables["SL2/PGL2"]
    assert [(p.index_label, p.rank, p.group_order) for p in chi] == [(0, 1, 2), (1, 0, 1)]
    assert [(p.index_label, p.rank, p.group_order) for p in c] == [(0, 1, 2), (1, 0, 1)]
    assert chi[0].provenance and c[0].provenance


def test_series_examples(tables):
    chi, _ = tables["SL2/PGL2"]
    s = orbit_series(chi[0], 3)
    assert s.N == (1, 5, 13, 25) and s.e == (1, 0) and s.region == "box"
    assert orbit_series(chi[1], 3).N == (1, 1, 1, 1)
    assert orbit_series(chi[1], 3).e == (1,)
    a2 = tables["SL3/PGL3"][0][0]
    assert orbit_series(a2, 1).e == (1, 0, 0)


def test_matching(tables):
    for name, (chi, c) in tables.items():
        rep = match_tables(chi, c, 3)
        assert rep.ok, rep.lines()
        assert rep.chi_count == pi1_order(c[0].group_label)
        assert [(a.index_label, b.index_label) for a, b in rep.matching] == \
            [(a.index_label, a.index_label) for a in chi]
    chi, c = tables["SL2/PGL2"]
    rep = match_tables(chi, c[:1], 3)
    assert not rep.ok and [o.label for o in rep.orphans] == ["chi=1"]
    same = match_tables(chi, chi, 3)
    assert [(a, b) for a, b in same.matching] == [(a, a) for a in chi]


def test_endomorphism_fingerprint(tables):
    chi, _ = tables["SL2/PGL2"]
    blocks = endomorphism_fingerprint(chi, 1)
    assert blocks[0].series.N == (1, 5) and blocks[0].series.d == ((1, 0), (5, 4))
    assert blocks[1].series.N == (1, 1) and blocks[1].series.d == ((1,), (1,))
    assert endomorphism_fingerprint([], 2) == []


def test_parsing_errors(tmp_path):
    assert parse_pair_tables("") == []
    assert parse_pair_tables("# only a comment\n") == []
    assert len(parse_pair_tables(record() + "\n" + record(side="c"))) == 2
    with pytest.raises(TableError):
        parse_pair_tables(record(order=3))
    with pytest.raises(TableError):
        parse_pair_tables(record(gens="2"))
    with pytest.raises(TableError):
        parse_pair_tables(record(side="x"))
    with pytest.raises(TableError):
        parse_pair_tables(record().replace("rank: 1\n", ""))
    with pytest.raises(TableError):
        parse_pair_tables(record(rank=2, gens="1,1;0,1", order=1))
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    assert load_pair_tables(empty) == []


def test_closure_ceiling():
    with pytest.raises(NonFiniteGroup):
        group_closure((((1, 1), (0, 1)),), 2, ceiling=100)


def test_char_poly():
    assert char_poly_plus(((0, 1), (1, 0))) == [1, 0, -1]
    assert char_poly_plus(((-1,),)) == [1, -1]


signed_perms = st.sampled_from([((0, 1), (1, 0)), ((-1, 0), (0, 1)), ((0, -1), (1, 0)),
                                ((1, 0), (0, -1)), ((-1, 0), (0, -1))])
reflection_like = st.sampled_from([((-1, 1), (0, 1)), ((1, 0), (1, -1)), ((-1, 3), (0, 1)),
                                   ((1, 0), (3, -1)), ((0, 1), (1, 0)), ((-1, -1), (0, 1))])


@given(st.lists(st.one_of(signed_perms, reflection_like), min_size=1, max_size=2))
def test_burnside_matches_union_find(gens):
    try:
        elems = group_closure(tuple(gens), 2, ceiling=200)
    except NonFiniteGroup:
        return
    p = PairDatum("chi", "T", "A1:sc", 0, 2, tuple(gens), len(elems))
    s = orbit_series(p, 2)
    assert s.N == orbit_count_union_find(p, 2)
    assert s.alternating_ok
    assert s.e[0] == 1
    assert list(s.N) == sorted(s.N)


def test_parallel_fingerprints_agree(tables):
    chi, c = tables["SL3/PGL3"]
    assert fingerprints(chi + c, 2, workers=2) == fingerprints(chi + c, 2)
