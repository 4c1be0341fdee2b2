from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import universe
from semigraphoid.core import Relation, all_triplets
from semigraphoid.graph import Dag
from semigraphoid.io import (
    ParseError,
    parse_dag,
    parse_relation,
    parse_statement,
    serialize_dag,
    serialize_relation,
)

GOLDEN = Path(__file__).parent / "golden"


class TestRelations:
    def test_plain_statement(self):
        r = parse_relation("vars: a b c d\na,b ; c | d")
        u = r.universe
        assert r.unstable == {u.triplet("ab", "c", "d")}
        assert r.stable == frozenset()

    def test_stable_statement(self):
        r = parse_relation("vars: a b\nstable: a ; b |")
        assert r.stable == {r.universe.triplet("a", "b")}
        assert not r.unstable

    def test_canonical_and_deduplicated(self):
        r = parse_relation("vars: a b c\nc ; a | b\na ; c | b\n")
        assert len(r) == 1

    def test_stable_mark_wins(self):
        r = parse_relation("vars: a b\na ; b |\nstable: b ; a |\n")
        assert len(r) == 1 and len(r.stable) == 1

    def test_whitespace_comments_and_blank_lines(self):
        text = "\n  # header\n vars:  a   b c \n\n   a ;b|  c   # trailing\n\n"
        r = parse_relation(text)
        assert r.triplets == {r.universe.triplet("a", "b", "c")}

    def test_names_are_case_sensitive_words(self):
        r = parse_relation("vars: A a x_1\nA ; a | x_1")
        assert r.universe.names == ("A", "a", "x_1")
        assert len(r) == 1

    @pytest.mark.parametrize(
        "text, line, message",
        [
            ("vars: a b\na ; a | b", 2, "overlapping sides"),
            ("vars: a b c\n\na ; b | a", 3, "overlapping sides"),
            ("vars: a b\n ; b |", 2, "empty X or Y"),
            ("vars: a b\na ;  |", 2, "empty X or Y"),
            ("vars: a b\n# note\na ; q |", 3, "q"),
            ("vars: a b c\na,a ; b |", 2, "repeated"),
            ("vars: a b\na b", 2, "X ; Y | Z"),
            ("a ; b |", 1, "vars:"),
            ("", 1, "vars:"),
            ("vars: a a", 1, ""),
            ("vars: a b-c", 1, "invalid"),
        ],
    )
    def test_errors_carry_line_numbers(self, text, line, message):
        with pytest.raises(ParseError) as err:
            parse_relation(text)
        assert err.value.line == line
        assert message in str(err.value)
        assert str(err.value).startswith(f"line {line}:")

    def test_parse_statement(self):
        u = universe(3)
        t, stable = parse_statement(u, "stable: c ; a | b")
        assert t == u.triplet("a", "c", "b") and stable


class TestDags:
    def test_chain(self):
        g = parse_dag("vars: a b c\na -> b\nb -> c")
        assert g.arc_names() == [("a", "b"), ("b", "c")]

    def test_single_vertex(self):
        g = parse_dag("vars: a\n")
        assert g.universe.size == 1 and not g.arcs

    def test_cycle_lists_vertices(self):
        with pytest.raises(ParseError) as err:
            parse_dag("vars: a b\na -> b\nb -> a")
        assert err.value.line == 3
        assert "cycle b -> a -> b" in str(err.value)

    def test_long_cycle(self):
        with pytest.raises(ParseError, match="cycle c -> a -> b -> c"):
            parse_dag("vars: a b c\na -> b\nb -> c\nc -> a\n")

    @pytest.mark.parametrize(
        "text, line, message",
        [
            ("vars: a b\na -> b\na -> b", 3, "duplicate arc"),
            ("vars: a b\na -> z", 2, "z"),
            ("vars: a b\na -> a", 2, "self-arc"),
            ("vars: a b\na => b", 2, "u -> v"),
        ],
    )
    def test_errors(self, text, line, message):
        with pytest.raises(ParseError) as err:
            parse_dag(text)
        assert err.value.line == line
        assert message in str(err.value)


@pytest.mark.parametrize("path", sorted(GOLDEN.iterdir()), ids=lambda p: p.name)
def test_golden_round_trip(path):
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".ind":
        assert serialize_relation(parse_relation(text)) == text
    else:
        assert serialize_dag(parse_dag(text)) == text


@st.composite
def relations(draw):
    u = universe(draw(st.integers(1, 4)))
    pool = sorted(all_triplets(u))
    if not pool:
        return Relation.partitioned(u, set(), set())
    ts = draw(st.sets(st.sampled_from(pool), max_size=6))
    marks = draw(st.sets(st.sampled_from(pool), max_size=6)) & ts
    return Relation.partitioned(u, marks, ts - marks)


@st.composite
def dags(draw):
    n = draw(st.integers(1, 6))
    order = draw(st.permutations(range(n)))
    pairs = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n)]
    arcs = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    return Dag(universe(n), frozenset(arcs))


@settings(max_examples=150, deadline=None)
@given(relations())
def test_relation_round_trip(r):
    text = serialize_relation(r)
    back = parse_relation(text)
    assert back == r
    assert serialize_relation(back) == text


@settings(max_examples=150, deadline=None)
@given(dags())
def test_dag_round_trip(g):
    back = parse_dag(serialize_dag(g))
    assert back == g
