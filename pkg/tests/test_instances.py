import pytest
from hypothesis import given, settings, strategies as st

from redlab.instances import (
    Ap2dmInstance,
    CnfFormula,
    Digraph,
    LinSystem,
    Parity,
    ParseError,
    SizeParamError,
    UGraph,
    Unit,
    XceInstance,
    XorSystem,
    parse,
    serialize,
    size_param,
    validate,
)

FIG1 = CnfFormula(3, ((1, -2), (2, 1), (-1, 3), (2, -3)))
FIG3 = Digraph(6, ((5, 2), (3, 2), (2, 4), (4, 3), (3, 6)), 5, 6)


class TestSizeParams:
    def test_fig1_formula(self):
        assert size_param(FIG1, "m_vbl") == 3
        assert size_param(FIG1, "m_cls") == 4

    def test_single_vertex_digraph_clamps_edges(self):
        g = Digraph(1, (), 1, 1)
        assert size_param(g, "m_ver") == 1
        # 0 edges is outside N+; the empty-instance convention maps it to 1
        assert size_param(g, "m_edg") == 1

    def test_fig3_graph(self):
        assert size_param(FIG3, "m_ver") == 6
        assert size_param(FIG3, "m_edg") == 5

    def test_lin_row_col_follow_source_naming(self):
        # m_row is the column count and m_col the row count, deliberately
        s = LinSystem("geq", 2, 5, 3, ((1, 1, 1),), (0, 0))
        assert size_param(s, "m_row") == 5
        assert size_param(s, "m_col") == 2

    def test_invalid_pairing(self):
        with pytest.raises(SizeParamError):
            size_param(FIG1, "m_ver")
        with pytest.raises(SizeParamError):
            size_param(FIG3, "m_vbl")


class TestValidate:
    def test_k4_degree_3(self):
        k4 = UGraph(4, ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)))
        assert validate(k4, {"deg_bound": 3}) == []

    def test_occ_bound_violation_carries_witness(self):
        f = CnfFormula(2, ((1, 2), (-1, 2), (1, -2), (-1, -2)))
        bad = validate(f, {"occ_bound": 3})
        assert {v.rule for v in bad} == {"occ_bound"}
        assert (1, 4) in {v.witness for v in bad}
        assert (2, 4) in {v.witness for v in bad}

    def test_lemma1_on_path(self):
        # connected path a-b-c: 3 <= 2*2 and 2 <= 2*3/2
        path = UGraph(3, ((1, 2), (2, 3)))
        assert validate(path, {"deg_bound": 2}) == []

    def test_lemma1_skipped_when_disconnected(self):
        g = UGraph(4, ((1, 2),))
        assert validate(g, {"deg_bound": 1}) == []

    def test_occ_soundness_by_independent_recount(self):
        # instances accepted under occ_bound=3 recount to <= 3 via Counter
        from collections import Counter
        from redlab.harness import GenSpec, generate

        for t in range(200):
            f = generate(GenSpec("2sat3", max_size=9, seed=77), t)
            if validate(f, {"occ_bound": 3}):
                continue
            counts = Counter(abs(l) for c in f.clauses for l in c)
            assert all(n <= 3 for n in counts.values())

    def test_ap2dm_connectivity_modes(self):
        # v=1 exempt with exactly one partner each way: fine in both modes
        a = Ap2dmInstance(3, (1,), ((1, 2), (3, 1)))
        assert validate(a, {}) == []
        assert validate(a, {"uniquely_connected": "exactly_one"}) == []
        # two outgoing partners: default accepts, strict rejects
        b = Ap2dmInstance(3, (1,), ((1, 2), (1, 3), (3, 1)))
        assert validate(b, {}) == []
        assert any(v.rule == "uniquely_connected_strict"
                   for v in validate(b, {"uniquely_connected": "exactly_one"}))

    def test_ap2dm_overlap_counts_trivial_pair(self):
        a = Ap2dmInstance(4, (), ((1, 2), (1, 3), (1, 4)))
        assert validate(a, {"overlap_bound": 4}) == []
        assert any(v.rule == "overlap_out" for v in validate(a, {"overlap_bound": 3}))

    def test_xce_overlap_is_a_type_invariant(self):
        x = XceInstance(2, (), ((1,), (1, 2), (1,)))
        assert any(v.rule == "overlap" for v in validate(x))


class TestFormats:
    def test_cnf_example(self):
        f = parse("p cnf2 2 1\n1 -2 0\n")
        assert f == CnfFormula(2, ((1, -2),))

    def test_digraph_example(self):
        g = parse("p digraph 2 1\ne 1 2\ns 1\nt 2\n")
        assert g == Digraph(2, ((1, 2),), 1, 2)

    def test_xce_example(self):
        x = parse("p xce 3 2\nr 3\nc 1 2\nc 2 3\n")
        assert x == XceInstance(3, (3,), ((1, 2), (2, 3)))

    def test_comments_ignored(self):
        g = parse("# heading\np graph 2 1\n# an edge\ne 1 2\n")
        assert g == UGraph(2, ((1, 2),))

    def test_parse_errors_carry_line_numbers(self):
        with pytest.raises(ParseError) as err:
            parse("p digraph 2 2\ne 1 2\ne 1 2\ns 1\nt 2\n")
        assert "duplicate edge" in str(err.value) and err.value.line == 3
        with pytest.raises(ParseError):
            parse("p cnf2 2 1\n1 -5 0\n")
        with pytest.raises(ParseError):
            parse("p wat 1 1\n")
        with pytest.raises(ParseError):
            parse("p graph 3 1\ne 2 1\n")  # requires u < v

    def test_expected_class_mismatch(self):
        with pytest.raises(ParseError):
            parse("p graph 1 0\n", expected=CnfFormula)

    def test_lin_band_roundtrip(self):
        s = LinSystem("band", 2, 2, 3, ((1, 1, 2), (1, 2, -3), (2, 1, 1)), (0, 1), (5, 1))
        assert parse(serialize(s)) == s

    def test_lin_bounds_must_cover_rows(self):
        with pytest.raises(ParseError):
            parse("p lin geq 2 2 3\na 1 1 1\nb 1 0\n")

    def test_xor_roundtrip(self):
        x = XorSystem(3, (Parity(1, 2, 1), Unit(3, 0)))
        assert parse(serialize(x)) == x

    def test_serialize_parse_canonical_text(self):
        text = "p cnf2 2 1\n1 -2 0\n"
        assert serialize(parse(text)) == text


def _clause(n):
    lit = st.integers(1, n).flatmap(lambda v: st.sampled_from([v, -v]))
    return st.lists(lit, min_size=1, max_size=2).map(tuple)


@st.composite
def cnfs(draw):
    n = draw(st.integers(1, 8))
    clauses = draw(st.lists(_clause(n), max_size=10))
    return CnfFormula(n, tuple(clauses))


@st.composite
def digraphs(draw):
    n = draw(st.integers(1, 8))
    pairs = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=12)) if pairs else []
    return Digraph(n, tuple(edges), draw(st.integers(1, n)), draw(st.integers(1, n)))


@st.composite
def ugraphs(draw):
    n = draw(st.integers(2, 8))
    pairs = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=12))
    return UGraph(n, tuple(edges))


class TestRoundTrip:
    @settings(max_examples=120, deadline=None)
    @given(cnfs())
    def test_cnf(self, f):
        assert parse(serialize(f)) == f

    @settings(max_examples=120, deadline=None)
    @given(digraphs())
    def test_digraph(self, g):
        assert parse(serialize(g)) == g

    @settings(max_examples=120, deadline=None)
    @given(ugraphs())
    def test_ugraph(self, g):
        assert parse(serialize(g)) == g

    def test_generator_instances_roundtrip(self):
        from redlab.harness import GENERATORS, GenSpec, generate

        for prob in GENERATORS:
            for t in range(50):
                inst = generate(GenSpec(prob, max_size=7, seed=11), t)
                assert parse(serialize(inst)) == inst


def test_instances_are_immutable():
    with pytest.raises(Exception):
        FIG1.num_vars = 5
