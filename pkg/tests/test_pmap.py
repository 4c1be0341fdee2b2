from __future__ import annotations

import random

import pytest

from corpus import dag_corpus, random_relation, universe
from semigraphoid.closure import (
    NotClosedError,
    Representation,
    classify_stability,
    combined_representation,
    sem_close,
    stab_close,
)
from semigraphoid.core import GuardError, Relation, Universe
from semigraphoid.graph import Dag, extract_models
from semigraphoid.pmap import (
    ALL_S_DOMINANTS_SATURATED,
    SATURATED_O_DOMINANT,
    STABLE_TRANSITIVITY,
    ConditionReport,
    MissingMarksError,
    Outcome,
    Status,
    assess,
    decisive,
    check_conditions,
    check_stable_transitivity,
    find_pmap,
    full_report,
    is_pmap,
    labeled_dags,
    saturation_tests,
    violates,
)

U3 = Universe.of("abc")
U4 = Universe.of("abcd")
COUNTEREXAMPLE = Relation(U4, {U4.triplet("a", "b", "cd"), U4.triplet("c", "d", "ab")})


def dag(u, *arcs):
    return Dag.from_names(u, [a.split("->") for a in arcs])


def test_labeled_dag_counts():
    # OEIS A003024
    assert [sum(1 for _ in labeled_dags(universe(n))) for n in (1, 2, 3, 4)] == [1, 3, 25, 543]


class TestCheckConditions:
    @pytest.mark.parametrize("g", dag_corpus(15, seed=41), ids=str)
    def test_graph_models_pass(self, g):
        m, _ = extract_models(g)
        assert check_conditions(m).passed

    def test_counterexample_fails_chordality(self):
        report = check_conditions(sem_close(COUNTEREXAMPLE))
        assert [e.id for e in report.failed] == ["C7"]
        w = report["C7"].witness
        assert (w["alpha"], w["beta"], w["gamma"], w["delta"]) == tuple(U4.varset(c) for c in "abcd")
        assert violates("C7", w, COUNTEREXAMPLE)

    def test_empty_passes(self):
        assert check_conditions(Relation(U4)).passed

    def test_composition_failure_carries_replayable_witness(self):
        closed = sem_close(Relation(U3, {U3.triplet("a", "b"), U3.triplet("a", "c")}))
        report = check_conditions(closed)
        e = report["C2"]
        assert e.status is Status.FAIL and e.witness["direction"] == "composition"
        assert violates("C2", e.witness, closed)

    def test_rejects_unclosed(self):
        with pytest.raises(NotClosedError):
            check_conditions(Relation(U3, {U3.triplet("a", "bc")}))

    def test_guard(self):
        with pytest.raises(GuardError):
            check_conditions(Relation(universe(8)))


class TestStableTransitivity:
    @pytest.mark.parametrize("g", dag_corpus(15, seed=42), ids=str)
    def test_graph_models_pass(self, g):
        m, _ = extract_models(g)
        assert check_stable_transitivity(classify_stability(m)).passed

    def test_stab_closure_of_single_statement_fails(self):
        marked = classify_stability(stab_close(Relation(U3, {U3.triplet("a", "b")})))
        e = check_stable_transitivity(marked)[STABLE_TRANSITIVITY]
        assert e.status is Status.FAIL
        assert (e.witness["X"], e.witness["Y"], e.witness["Z"], e.witness["gamma"]) == (1, 2, 0, 4)
        assert violates(STABLE_TRANSITIVITY, e.witness, marked)
        # the failure is sound: none of the 25 labeled DAGs is a perfect map
        verdict = find_pmap(marked)
        assert verdict.outcome is Outcome.NOT_ISOMORPHIC and verdict.examined == 25

    def test_empty_stable_part(self):
        r = Relation(U3, {U3.triplet("a", "b", "c")}, frozenset())
        assert check_stable_transitivity(r).passed

    def test_requires_marks(self):
        with pytest.raises(MissingMarksError):
            check_stable_transitivity(Relation(U3))


class TestSaturation:
    def test_counterexample_passes_both(self):
        report = saturation_tests(combined_representation(COUNTEREXAMPLE))
        assert report.passed

    def test_unsaturated_s_dominant(self):
        rep = Representation(U3, d_s=frozenset({U3.triplet("a", "b")}))
        report = saturation_tests(rep)
        assert report[ALL_S_DOMINANTS_SATURATED].status is Status.FAIL
        assert report[ALL_S_DOMINANTS_SATURATED].witness["missing"] == U3.varset("c")
        assert report[SATURATED_O_DOMINANT].status is Status.PASS

    def test_no_saturated_statement(self):
        rep = Representation(U4, d_u=frozenset({U4.triplet("a", "b", "c")}))
        report = saturation_tests(rep)
        assert report[SATURATED_O_DOMINANT].status is Status.FAIL
        assert report[SATURATED_O_DOMINANT].witness is not None

    def test_single_pass(self):
        rng = random.Random(3)
        for _ in range(40):
            r = random_relation(rng, rng.choice((3, 4, 5)))
            rep = combined_representation(r)
            report = saturation_tests(rep)
            assert sum(e.inspected for e in report.entries) == len(rep.d_u) + len(rep.d_s)


class TestSearch:
    def test_is_pmap(self):
        chain = dag(U3, "a->b", "b->c")
        closed = sem_close(Relation(U3, {U3.triplet("a", "c", "b")}))
        assert is_pmap(chain, closed)
        assert not is_pmap(dag(U3, "a->b", "c->b"), closed)
        for g in dag_corpus(10, seed=9):
            assert is_pmap(g, extract_models(g)[0])

    def test_counterexample_not_isomorphic(self):
        v = find_pmap(sem_close(COUNTEREXAMPLE))
        assert v.outcome is Outcome.NOT_ISOMORPHIC and v.examined == 543 and v.dag is None

    def test_chain_model(self):
        m, _ = extract_models(dag(U3, "a->b", "b->c"))
        v = find_pmap(m)
        assert v.outcome is Outcome.ISOMORPHIC
        assert extract_models(v.dag)[0] == m

    def test_empty_pair(self):
        u = Universe.of("ab")
        v = find_pmap(Relation(u))
        assert v.outcome is Outcome.ISOMORPHIC and v.dag.arc_names() == [("a", "b")]

    def test_guard(self):
        with pytest.raises(GuardError):
            find_pmap(Relation(universe(6)))


def test_assess_is_inconclusive_without_search():
    m, _ = extract_models(dag(U3, "a->b", "b->c"))
    _, v = assess(m)
    assert v.outcome is Outcome.INCONCLUSIVE and v.dag is None
    _, v = assess(m, exhaustive=True)
    assert v.outcome is Outcome.ISOMORPHIC


def _fail_corpus():
    rng = random.Random(77)
    out = []
    for _ in range(60):
        r = random_relation(rng, rng.choice((3, 4)))
        from semigraphoid.closure import generated

        out.append(generated(r))
    for g in dag_corpus(20, sizes=(3, 4, 5), seed=8):
        out.append(extract_models(g)[0])
    return out


@pytest.mark.parametrize("closed", _fail_corpus(), ids=lambda r: f"{r.universe.size}v{len(r)}")
def test_failed_conditions_are_sound(closed):
    report = full_report(closed)
    verdict = find_pmap(closed)
    if report.refuted:
        assert verdict.outcome is Outcome.NOT_ISOMORPHIC
    if verdict.outcome is Outcome.ISOMORPHIC:
        assert all(e.id == SATURATED_O_DOMINANT for e in report.failed)
    for e in report.failed:
        if e.id.startswith("C"):
            assert violates(e.id, e.witness, closed)
        elif e.id == STABLE_TRANSITIVITY:
            assert violates(e.id, e.witness, classify_stability(closed))


@pytest.mark.parametrize(
    "arcs",
    [(), ("a->c", "b->c"), ("a->b", "a->c", "b->c")],
    ids=["arcless-empty-relation", "collider", "complete"],
)
def test_existence_test_misfires_only_with_universal_sinks(arcs):
    # Models of these graphs either hold a saturated statement or leave a
    # variable on no side of any statement, which keeps the failure indecisive.
    m, _ = extract_models(dag(U3, *arcs))
    e = saturation_tests(combined_representation(classify_stability(m)))[SATURATED_O_DOMINANT]
    assert find_pmap(m).outcome is Outcome.ISOMORPHIC
    if e.status is Status.FAIL:
        assert e.witness["uncovered"] and not decisive(e)


def test_report_dict_round_trip():
    report = full_report(sem_close(COUNTEREXAMPLE))
    assert ConditionReport.from_dict(report.to_dict()) == report
